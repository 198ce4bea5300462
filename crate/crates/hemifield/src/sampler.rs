//! Trial-level Monte Carlo: emit a pair, anchor one wing on its particle's
//! hemisphere, read the other wing from the branch conditional, and tally.
//!
//! One trial draws in a fixed order (so runs are reproducible draw-for-draw):
//! the wing-1 particle position (two unit-interval draws), a fair coin
//! choosing which wing anchors (one draw, skipped by the anchored variants),
//! and the remote wing's conditional acceptance (one draw). The anchored
//! wing's outcome is elementary — the sign of the hemisphere its particle
//! occupies on the anchored axis — and the exactly antipodal partner then
//! fixes the branch fed to the remote conditional.
//!
//! Each trial owns its own deterministic RNG, [`trial_rng`], derived from the
//! run seed and the trial index via independent ChaCha streams. Tallies are
//! therefore identical whatever the parallel chunking; [`run_experiment`]
//! exploits that to fold trials in parallel, and
//! [`run_experiment_chunked`] exists to demonstrate the invariance.
//!
//! The module also carries the factorisable baseline ([`naive_baseline_pair`]):
//! both wings read their own branch conditional on a shared construction axis
//! with no anchoring. Its correlation averages to `-cos(delta) / 2` under a
//! uniform construction axis, and its CHSH combination never exceeds the
//! classical bound 2 — the contrast the tests and the `chsh --baseline`
//! command quantify against the anchored model's `2 sqrt(2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geometry::{uniform_sample, Axis, Hemisphere, SurfacePoint};
use crate::subquantum::{
    alpha_conditional, elementary_outcome, ConditionalReading, ConditionalSpec, Particle,
};
use crate::two_party::{JointDistribution, JointSetting, SourceState, Wing};
use crate::{Error, Result, Sign};

// ─────────────────────────────────────────────────────────────────────────────
// Single trials
// ─────────────────────────────────────────────────────────────────────────────

/// Everything one trial produced.
#[derive(Debug, Clone, Copy)]
pub struct TrialRecord {
    /// The measurement axes used.
    pub setting: JointSetting,
    /// Construction axis of the emitted pair.
    pub u: Axis,
    /// Wing-1 particle position (wing 2 sits at the exact antipode).
    pub r1: SurfacePoint,
    /// Wing-1 outcome.
    pub epsilon1: Sign,
    /// Wing-2 outcome.
    pub epsilon2: Sign,
}

impl TrialRecord {
    /// Product of the two outcomes as `+-1`.
    pub fn product(&self) -> i8 {
        self.epsilon1.value() * self.epsilon2.value()
    }
}

/// One trial with a fair coin choosing the anchored wing.
pub fn sample_pair<R: Rng + ?Sized>(setting: JointSetting, u: Axis, rng: &mut R) -> TrialRecord {
    let r1 = uniform_sample(rng);
    let anchor = if rng.gen::<f64>() < 0.5 {
        Wing::One
    } else {
        Wing::Two
    };
    sample_pair_anchored_at(setting, u, anchor, r1, rng)
}

/// One trial with the anchored wing forced (no coin draw).
pub fn sample_pair_anchored<R: Rng + ?Sized>(
    setting: JointSetting,
    u: Axis,
    anchor: Wing,
    rng: &mut R,
) -> TrialRecord {
    let r1 = uniform_sample(rng);
    sample_pair_anchored_at(setting, u, anchor, r1, rng)
}

/// Core trial: anchored outcome from the particle's hemisphere, remote
/// outcome from the branch conditional on the anchored axis.
fn sample_pair_anchored_at<R: Rng + ?Sized>(
    setting: JointSetting,
    u: Axis,
    anchor: Wing,
    r1: SurfacePoint,
    rng: &mut R,
) -> TrialRecord {
    let state = SourceState::new(u, r1, -0.5, 0.5);
    let (epsilon1, epsilon2) = match anchor {
        Wing::One => {
            let e1 = elementary_outcome(setting.a, &Particle::new(state.r1()));
            let branch = Sign::from_indicator(Hemisphere::positive(setting.a).contains(state.r2()));
            let p_plus = alpha_conditional(
                ConditionalSpec {
                    u: setting.a,
                    b: setting.b,
                    branch,
                },
                ConditionalReading::Corrected,
            );
            let e2 = Sign::from_indicator(rng.gen::<f64>() < p_plus);
            (e1, e2)
        }
        Wing::Two => {
            let e2 = elementary_outcome(setting.b, &Particle::new(state.r2()));
            let branch = Sign::from_indicator(Hemisphere::positive(setting.b).contains(state.r1()));
            let p_plus = alpha_conditional(
                ConditionalSpec {
                    u: setting.b,
                    b: setting.a,
                    branch,
                },
                ConditionalReading::Corrected,
            );
            let e1 = Sign::from_indicator(rng.gen::<f64>() < p_plus);
            (e1, e2)
        }
    };
    TrialRecord {
        setting,
        u,
        r1: state.r1(),
        epsilon1,
        epsilon2,
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Runs
// ─────────────────────────────────────────────────────────────────────────────

/// Outcome tallies of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunStats {
    seed: u64,
    n: u64,
    counts: [[u64; 2]; 2],
}

impl RunStats {
    fn empty(seed: u64) -> Self {
        Self {
            seed,
            n: 0,
            counts: [[0; 2]; 2],
        }
    }

    fn record(mut self, e1: Sign, e2: Sign) -> Self {
        self.counts[e1.index()][e2.index()] += 1;
        self.n += 1;
        self
    }

    fn merge(mut self, other: Self) -> Self {
        for i in 0..2 {
            for j in 0..2 {
                self.counts[i][j] += other.counts[i][j];
            }
        }
        self.n += other.n;
        self
    }

    /// The seed the run was keyed on.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of trials tallied.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// The full count table, indexed `[e1][e2]` with `Plus -> 0`.
    pub fn counts(&self) -> [[u64; 2]; 2] {
        self.counts
    }

    /// Count of one outcome pair.
    pub fn count(&self, e1: Sign, e2: Sign) -> u64 {
        self.counts[e1.index()][e2.index()]
    }

    /// Empirical frequency of one outcome pair.
    pub fn frequency(&self, e1: Sign, e2: Sign) -> f64 {
        self.count(e1, e2) as f64 / self.n as f64
    }

    /// Empirical joint distribution (frequencies).
    pub fn empirical_joint(&self) -> JointDistribution {
        let n = self.n as f64;
        let mut table = [[0.0; 2]; 2];
        for e1 in Sign::BOTH {
            for e2 in Sign::BOTH {
                table[e1.index()][e2.index()] = self.count(e1, e2) as f64 / n;
            }
        }
        JointDistribution::from_table(table)
    }

    /// Binomial standard error of one empirical frequency.
    pub fn std_error(&self, e1: Sign, e2: Sign) -> f64 {
        let n = self.n as f64;
        let p = self.frequency(e1, e2);
        (p * (1.0 - p) / n).sqrt()
    }

    /// Empirical outcome-product expectation.
    pub fn correlation(&self) -> f64 {
        self.empirical_joint().correlation()
    }

    /// Standard error of the empirical correlation: the outcome product is
    /// `+-1`-valued, so its variance is `1 - E^2`.
    pub fn correlation_std_error(&self) -> f64 {
        let e = self.correlation();
        ((1.0 - e * e).max(0.0) / self.n as f64).sqrt()
    }
}

/// Deterministic per-trial generator: seed keys the cipher, the trial index
/// selects an independent stream. No draw mixes across trials, so tallies
/// cannot depend on execution order or chunking.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn tally<F>(n: u64, seed: u64, trial: F) -> Result<RunStats>
where
    F: Fn(&mut ChaCha8Rng) -> (Sign, Sign) + Sync,
{
    if n == 0 {
        return Err(Error::EmptyRun);
    }
    Ok((0..n)
        .into_par_iter()
        .fold(
            || RunStats::empty(seed),
            |stats, i| {
                let mut rng = trial_rng(seed, i);
                let (e1, e2) = trial(&mut rng);
                stats.record(e1, e2)
            },
        )
        .reduce(|| RunStats::empty(seed), RunStats::merge))
}

/// Tally `n` coin-anchored trials at a fixed construction axis.
///
/// # Errors
/// [`Error::EmptyRun`] if `n == 0`.
pub fn run_experiment(setting: JointSetting, u: Axis, n: u64, seed: u64) -> Result<RunStats> {
    tally(n, seed, |rng| {
        let t = sample_pair(setting, u, rng);
        (t.epsilon1, t.epsilon2)
    })
}

/// [`run_experiment`] with the trial range split into explicit chunks of
/// `chunk_size`, each folded sequentially. Exists to demonstrate that the
/// per-trial streams make the tallies chunking-invariant.
///
/// # Errors
/// [`Error::EmptyRun`] if `n == 0`.
///
/// # Panics
/// Panics if `chunk_size == 0`.
pub fn run_experiment_chunked(
    setting: JointSetting,
    u: Axis,
    n: u64,
    seed: u64,
    chunk_size: u64,
) -> Result<RunStats> {
    assert!(chunk_size > 0, "chunk size must be positive");
    if n == 0 {
        return Err(Error::EmptyRun);
    }
    let chunks = n.div_ceil(chunk_size);
    Ok((0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk_size;
            let hi = (lo + chunk_size).min(n);
            let mut stats = RunStats::empty(seed);
            for i in lo..hi {
                let mut rng = trial_rng(seed, i);
                let t = sample_pair(setting, u, &mut rng);
                stats = stats.record(t.epsilon1, t.epsilon2);
            }
            stats
        })
        .reduce(|| RunStats::empty(seed), RunStats::merge))
}

// ─────────────────────────────────────────────────────────────────────────────
// Factorisable baseline
// ─────────────────────────────────────────────────────────────────────────────

/// How the baseline picks its construction axis per trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UPolicy {
    /// Same axis every trial.
    Fixed(Axis),
    /// Fresh uniform angle every trial (one extra draw, taken first).
    Uniform,
}

/// One factorisable-baseline trial: no anchoring — each wing reads its own
/// branch conditional on the shared construction axis, independently.
/// Draw order: construction angle (uniform policy only), wing-1 position,
/// wing-1 acceptance, wing-2 acceptance.
pub fn naive_baseline_pair<R: Rng + ?Sized>(
    setting: JointSetting,
    policy: UPolicy,
    rng: &mut R,
) -> TrialRecord {
    let u = match policy {
        UPolicy::Fixed(axis) => axis,
        UPolicy::Uniform => Axis::new(2.0 * std::f64::consts::PI * rng.gen::<f64>()),
    };
    let r1 = uniform_sample(rng);
    let state = SourceState::new(u, r1, -0.5, 0.5);
    let mut wing_outcome = |target: Axis, r: SurfacePoint| -> Sign {
        let branch = Sign::from_indicator(Hemisphere::positive(u).contains(r));
        let p_plus = alpha_conditional(
            ConditionalSpec {
                u,
                b: target,
                branch,
            },
            ConditionalReading::Corrected,
        );
        Sign::from_indicator(rng.gen::<f64>() < p_plus)
    };
    let epsilon1 = wing_outcome(setting.a, state.r1());
    let epsilon2 = wing_outcome(setting.b, state.r2());
    TrialRecord {
        setting,
        u,
        r1: state.r1(),
        epsilon1,
        epsilon2,
    }
}

/// Tally `n` baseline trials.
///
/// # Errors
/// [`Error::EmptyRun`] if `n == 0`.
pub fn run_baseline(setting: JointSetting, policy: UPolicy, n: u64, seed: u64) -> Result<RunStats> {
    tally(n, seed, |rng| {
        let t = naive_baseline_pair(setting, policy, rng);
        (t.epsilon1, t.epsilon2)
    })
}

// ─────────────────────────────────────────────────────────────────────────────
// CHSH combinations
// ─────────────────────────────────────────────────────────────────────────────

/// The four correlations and their CHSH combination
/// `S = |E(a,b) - E(a,b')| + |E(a',b) + E(a',b')|`.
#[derive(Debug, Clone, Copy)]
pub struct ChshReport {
    /// Correlations in the order `(a,b), (a,b'), (a',b), (a',b')`.
    pub e: [f64; 4],
    /// The combination `S`.
    pub s: f64,
    /// Standard error on `S` (zero for analytic evaluations).
    pub std_error: f64,
}

fn chsh_combine(e: [f64; 4], se: [f64; 4]) -> ChshReport {
    ChshReport {
        e,
        s: (e[0] - e[1]).abs() + (e[2] + e[3]).abs(),
        std_error: se.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

fn chsh_settings(a: Axis, a2: Axis, b: Axis, b2: Axis) -> [JointSetting; 4] {
    [
        JointSetting { a, b },
        JointSetting { a, b: b2 },
        JointSetting { a: a2, b },
        JointSetting { a: a2, b: b2 },
    ]
}

/// CHSH from the closed-form model correlation `E = -cos(delta)`.
pub fn chsh_analytic(a: Axis, a2: Axis, b: Axis, b2: Axis) -> ChshReport {
    let e = chsh_settings(a, a2, b, b2).map(crate::two_party::correlation);
    chsh_combine(e, [0.0; 4])
}

/// CHSH from four Monte Carlo runs of `n` trials each; run `k` uses seed
/// `seed + k` so the four tallies draw from disjoint streams.
///
/// # Errors
/// [`Error::EmptyRun`] if `n == 0`.
pub fn chsh_monte_carlo(
    a: Axis,
    a2: Axis,
    b: Axis,
    b2: Axis,
    u: Axis,
    n: u64,
    seed: u64,
) -> Result<ChshReport> {
    let settings = chsh_settings(a, a2, b, b2);
    let mut e = [0.0; 4];
    let mut se = [0.0; 4];
    for (k, s) in settings.iter().enumerate() {
        let stats = run_experiment(*s, u, n, seed.wrapping_add(k as u64))?;
        e[k] = stats.correlation();
        se[k] = stats.correlation_std_error();
    }
    Ok(chsh_combine(e, se))
}

/// Baseline correlation in closed form: `-cos(u - a) * cos(u - b)` for a
/// fixed construction axis, and its uniform-axis average `-cos(b - a) / 2`.
pub fn baseline_correlation(setting: JointSetting, policy: UPolicy) -> f64 {
    match policy {
        UPolicy::Fixed(u) => {
            -(u.theta() - setting.a.theta()).cos() * (u.theta() - setting.b.theta()).cos()
        }
        UPolicy::Uniform => -0.5 * (setting.b.theta() - setting.a.theta()).cos(),
    }
}

/// CHSH for the factorisable baseline in closed form.
pub fn chsh_baseline_analytic(a: Axis, a2: Axis, b: Axis, b2: Axis, policy: UPolicy) -> ChshReport {
    let e = chsh_settings(a, a2, b, b2).map(|s| baseline_correlation(s, policy));
    chsh_combine(e, [0.0; 4])
}

/// CHSH for the factorisable baseline from four Monte Carlo runs.
///
/// # Errors
/// [`Error::EmptyRun`] if `n == 0`.
pub fn chsh_baseline_monte_carlo(
    a: Axis,
    a2: Axis,
    b: Axis,
    b2: Axis,
    policy: UPolicy,
    n: u64,
    seed: u64,
) -> Result<ChshReport> {
    let settings = chsh_settings(a, a2, b, b2);
    let mut e = [0.0; 4];
    let mut se = [0.0; 4];
    for (k, s) in settings.iter().enumerate() {
        let stats = run_baseline(*s, policy, n, seed.wrapping_add(k as u64))?;
        e[k] = stats.correlation();
        se[k] = stats.correlation_std_error();
    }
    Ok(chsh_combine(e, se))
}
