//! Acceptance gate: one test per acceptance criterion. Each prints a
//! `PASS criterion N: ...` line (visible under `--nocapture`) before
//! asserting, so a failing run shows exactly which criterion broke and by
//! how much. Criteria with runtime bounds assert wall-clock time too.
//!
//! Tolerances: closed-form identities hold to 1e-12; explicit quadrature
//! cross-checks hold to 1e-9; Monte Carlo estimates hold to three standard
//! errors or to the stated absolute windows.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hemifield::field::{alpha_field, enumerate_sequential, rebasis, FieldSuperposition};
use hemifield::geometry::{hemisphere_grid, Axis, Hemisphere};
use hemifield::sampler::{
    chsh_analytic, chsh_baseline_analytic, chsh_baseline_monte_carlo, chsh_monte_carlo,
    run_baseline, UPolicy,
};
use hemifield::subquantum::{alpha_conditional, ConditionalReading, ConditionalSpec};
use hemifield::two_party::{joint_distribution, joint_via_conditional, JointSetting, Wing};
use hemifield::Sign;

/// Tolerance for closed-form identities.
const EXACT: f64 = 1e-12;
/// Tolerance for explicit quadrature cross-checks.
const QUAD: f64 = 1e-9;

fn report(criterion: u32, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {criterion}: {detail}");
    assert!(ok, "criterion {criterion}: {detail}");
}

fn random_axis(rng: &mut ChaCha8Rng) -> Axis {
    Axis::new(4.0 * PI * (rng.gen::<f64>() - 0.5))
}

fn setting(a: f64, b: f64) -> JointSetting {
    JointSetting {
        a: Axis::new(a),
        b: Axis::new(b),
    }
}

/// The standard maximally violating axis tuple `(a, a', b, b')`.
fn chsh_axes() -> (Axis, Axis, Axis, Axis) {
    (
        Axis::new(0.0),
        Axis::new(PI / 2.0),
        Axis::new(PI / 4.0),
        Axis::new(3.0 * PI / 4.0),
    )
}

#[test]
fn criterion_01_single_axis_measurement_law() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = random_axis(&mut rng);
        let b = random_axis(&mut rng);
        let m = FieldSuperposition::hemisphere(a).measure(b).unwrap();
        let expected = (0.5 * (b.theta() - a.theta())).cos().powi(2);
        worst = worst.max((m.probability(Sign::Plus) - expected).abs());
        worst = worst.max((m.probability(Sign::Plus) + m.probability(Sign::Minus) - 1.0).abs());
    }
    let elapsed = start.elapsed();
    report(
        1,
        worst < EXACT && elapsed < Duration::from_secs(1),
        &format!(
            "measurement law on 1000 random axis pairs: worst residual {worst:.3e} \
             (tolerance 1e-12) in {elapsed:.2?} (bound 1s)"
        ),
    );
}

#[test]
fn criterion_02_amplitudes_match_explicit_quadrature() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_axis(&mut rng);
        let b = random_axis(&mut rng);
        let field = FieldSuperposition::hemisphere(a);
        for outcome in [b, b.antipode()] {
            let analytic = field.measurement_amplitude(outcome);
            let mut quadrature = Complex64::new(0.0, 0.0);
            for (coefficient, basis) in field.terms() {
                let region = Hemisphere::positive(basis.support().center().midpoint(outcome));
                let grid = hemisphere_grid(region, 64, 128).unwrap();
                let average = grid.integrate(|p| p.dot_axis(outcome) / PI);
                quadrature += coefficient * Complex64::from_polar(1.0, basis.phase()) * average;
            }
            worst = worst.max((analytic - quadrature).norm());
        }
    }
    let elapsed = start.elapsed();
    report(
        2,
        worst < QUAD && elapsed < Duration::from_secs(5),
        &format!(
            "amplitude vs 64x128 quadrature on 100 random pairs: worst residual {worst:.3e} \
             (tolerance 1e-9) in {elapsed:.2?} (bound 5s)"
        ),
    );
}

#[test]
fn criterion_03_rebasis_preserves_all_statistics() {
    let mut worst = 0.0f64;
    for a_step in 0..4 {
        let a = Axis::new(0.3 + a_step as f64);
        let direct = FieldSuperposition::hemisphere(a);
        for u_step in 0..36 {
            let u = Axis::new(2.0 * PI * u_step as f64 / 36.0 - PI);
            let rebased = rebasis(a, u);
            for b_step in 0..360 {
                let b = Axis::new(2.0 * PI * b_step as f64 / 360.0 - PI);
                let p_direct = direct.measure(b).unwrap().probability(Sign::Plus);
                let p_rebased = rebased.measure(b).unwrap().probability(Sign::Plus);
                worst = worst.max((p_direct - p_rebased).abs());
            }
        }
    }
    report(
        3,
        worst < EXACT,
        &format!(
            "rebasis equivalence over 4 preparations x 36 bases x 360 outcomes: \
             worst residual {worst:.3e} (tolerance 1e-12)"
        ),
    );
}

#[test]
fn criterion_04_isotropic_constructions_are_unbiased() {
    let mut worst = 0.0f64;
    for sign in Sign::BOTH {
        let field = alpha_field(Axis::new(0.4), sign);
        for b_step in 0..360 {
            let b = Axis::new(2.0 * PI * b_step as f64 / 360.0 - PI);
            let m = field.measure(b).unwrap();
            worst = worst.max((m.probability(Sign::Plus) - 0.5).abs());
            worst = worst.max((m.probability(Sign::Minus) - 0.5).abs());
        }
    }
    report(
        4,
        worst < EXACT,
        &format!(
            "isotropy of both two-term constructions over 360 axes: \
             worst |p - 1/2| = {worst:.3e} (tolerance 1e-12)"
        ),
    );
}

#[test]
fn criterion_05_branch_conditionals_average_correctly() {
    // Corrected table: the branch average reproduces the unconditional 1/2
    // everywhere. Literal table: the residual equals |cos^2((u-b)/2) - 1/2|.
    let mut worst_corrected = 0.0f64;
    let mut worst_literal_model = 0.0f64;
    for u_step in 0..360 {
        let u = Axis::new(2.0 * PI * u_step as f64 / 360.0 - PI);
        for b_step in 0..360 {
            let b = Axis::new(2.0 * PI * b_step as f64 / 360.0 - PI);
            let corrected: f64 = Sign::BOTH
                .iter()
                .map(|&branch| {
                    0.5 * alpha_conditional(
                        ConditionalSpec { u, b, branch },
                        ConditionalReading::Corrected,
                    )
                })
                .sum();
            worst_corrected = worst_corrected.max((corrected - 0.5).abs());

            let literal: f64 = Sign::BOTH
                .iter()
                .map(|&branch| {
                    0.5 * alpha_conditional(
                        ConditionalSpec { u, b, branch },
                        ConditionalReading::Literal,
                    )
                })
                .sum();
            let predicted_failure = ((0.5 * (u.theta() - b.theta())).cos().powi(2) - 0.5).abs();
            worst_literal_model =
                worst_literal_model.max(((literal - 0.5).abs() - predicted_failure).abs());
        }
    }
    report(
        5,
        worst_corrected < EXACT && worst_literal_model < EXACT,
        &format!(
            "branch-conditional averages over a 360x360 grid: corrected residual \
             {worst_corrected:.3e}, literal failure matches its closed form to \
             {worst_literal_model:.3e} (tolerance 1e-12)"
        ),
    );
}

#[test]
fn criterion_06_joint_law_routes_and_axis_independence() {
    let mut worst_law = 0.0f64;
    for d_step in 0..360 {
        let delta = 2.0 * PI * d_step as f64 / 360.0 - PI;
        let d = joint_distribution(setting(0.4, 0.4 + delta), Axis::new(2.0));
        let equal = 0.5 * (0.5 * delta).sin().powi(2);
        let opposite = 0.5 * (0.5 * delta).cos().powi(2);
        worst_law = worst_law.max((d.probability(Sign::Plus, Sign::Plus) - equal).abs());
        worst_law = worst_law.max((d.probability(Sign::Minus, Sign::Minus) - equal).abs());
        worst_law = worst_law.max((d.probability(Sign::Plus, Sign::Minus) - opposite).abs());
        worst_law = worst_law.max((d.probability(Sign::Minus, Sign::Plus) - opposite).abs());
    }

    let mut worst_routes = 0.0f64;
    let mut worst_axis = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for _ in 0..40 {
        let s = JointSetting {
            a: random_axis(&mut rng),
            b: random_axis(&mut rng),
        };
        let reference = joint_distribution(s, Axis::new(0.0));
        for wing in [Wing::One, Wing::Two] {
            worst_routes =
                worst_routes.max(reference.max_abs_difference(&joint_via_conditional(s, wing)));
        }
        for u_step in 0..36 {
            let u = Axis::new(2.0 * PI * u_step as f64 / 36.0 - PI);
            worst_axis = worst_axis.max(joint_distribution(s, u).max_abs_difference(&reference));
        }
    }
    report(
        6,
        worst_law < EXACT && worst_routes < EXACT && worst_axis < EXACT,
        &format!(
            "joint law over 360 separations (residual {worst_law:.3e}), three routes \
             (disagreement {worst_routes:.3e}), 36 construction axes \
             (dependence {worst_axis:.3e}); tolerance 1e-12"
        ),
    );
}

#[test]
fn criterion_07_no_signaling() {
    let mut worst = 0.0f64;
    for wing in [Wing::One, Wing::Two] {
        for local_step in 0..8 {
            let local = 2.0 * PI * local_step as f64 / 8.0;
            for remote_step in 0..360 {
                let remote = 2.0 * PI * remote_step as f64 / 360.0 - PI;
                let s = match wing {
                    Wing::One => setting(local, remote),
                    Wing::Two => setting(remote, local),
                };
                let (p_plus, p_minus) = joint_distribution(s, Axis::new(0.7)).marginal(wing);
                worst = worst.max((p_plus - 0.5).abs()).max((p_minus - 0.5).abs());
            }
        }
    }
    report(
        7,
        worst < EXACT,
        &format!(
            "local marginals under a 360-point remote-axis sweep on both wings: \
             worst |p - 1/2| = {worst:.3e} (tolerance 1e-12)"
        ),
    );
}

#[test]
fn criterion_08_correlation_law_and_chsh() {
    let start = Instant::now();
    let mut worst_e = 0.0f64;
    for d_step in 0..360 {
        let delta = 2.0 * PI * d_step as f64 / 360.0 - PI;
        let e = joint_distribution(setting(1.0, 1.0 + delta), Axis::new(0.0)).correlation();
        worst_e = worst_e.max((e - (-delta.cos())).abs());
    }

    let (a, a2, b, b2) = chsh_axes();
    let analytic = chsh_analytic(a, a2, b, b2);
    let analytic_residual = (analytic.s - 2.0 * 2.0f64.sqrt()).abs();

    let sampled = chsh_monte_carlo(a, a2, b, b2, Axis::new(0.0), 1_000_000, 108).unwrap();
    let sampled_error = (sampled.s - 2.0 * 2.0f64.sqrt()).abs();
    let elapsed = start.elapsed();
    report(
        8,
        worst_e < EXACT
            && analytic_residual < EXACT
            && sampled_error < 0.01
            && elapsed < Duration::from_secs(10),
        &format!(
            "correlation law residual {worst_e:.3e} (tolerance 1e-12); analytic S off by \
             {analytic_residual:.3e} (tolerance 1e-12); sampled S = {:.5} at 1e6 trials/pair \
             (window 0.01) in {elapsed:.2?} (bound 10s)",
            sampled.s
        ),
    );
}

#[test]
fn criterion_09_factorisable_baseline() {
    // Uniform-axis baseline correlation at three separations, 1e6 trials each.
    let mut worst_sigma = 0.0f64;
    for (a, b) in [(0.0, PI / 3.0), (0.5, 0.5), (0.2, 1.8)] {
        let s = setting(a, b);
        let stats = run_baseline(s, UPolicy::Uniform, 1_000_000, 109).unwrap();
        let expected = -0.5 * (b - a).cos();
        let sigma = stats.correlation_std_error().max(1e-9);
        worst_sigma = worst_sigma.max((stats.correlation() - expected).abs() / sigma);
    }

    let (a, a2, b, b2) = chsh_axes();
    let analytic = chsh_baseline_analytic(a, a2, b, b2, UPolicy::Uniform);
    let analytic_residual = (analytic.s - 2.0f64.sqrt()).abs();
    let sampled =
        chsh_baseline_monte_carlo(a, a2, b, b2, UPolicy::Uniform, 1_000_000, 110).unwrap();
    let sampled_error = (sampled.s - 2.0f64.sqrt()).abs();

    // Random axis tuples never beat the classical bound.
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut worst_s: f64 = 0.0;
    let mut classical = true;
    for trial in 0..50 {
        let (a, a2, b, b2) = (
            random_axis(&mut rng),
            random_axis(&mut rng),
            random_axis(&mut rng),
            random_axis(&mut rng),
        );
        let mc =
            chsh_baseline_monte_carlo(a, a2, b, b2, UPolicy::Uniform, 20_000, 112 + trial).unwrap();
        worst_s = worst_s.max(mc.s - 3.0 * mc.std_error);
        classical &= mc.s <= 2.0 + 3.0 * mc.std_error;
    }
    report(
        9,
        worst_sigma < 3.0 && analytic_residual < EXACT && sampled_error < 0.01 && classical,
        &format!(
            "baseline correlation within {worst_sigma:.2} sigma of -cos/2 at 1e6 trials; \
             analytic S off by {analytic_residual:.3e}; sampled S = {:.5} (window 0.01 \
             around sqrt(2)); 50 random tuples stay classical (max debiased S {worst_s:.3})",
            sampled.s
        ),
    );
}

#[test]
fn criterion_10_sequential_probes_do_not_commute() {
    let field = FieldSuperposition::hemisphere(Axis::new(0.0));
    let b = Axis::new(PI / 4.0);
    let c = Axis::new(PI / 2.0);
    let p_bc = enumerate_sequential(&field, &[b, c]).unwrap()[0].1;
    let p_cb = enumerate_sequential(&field, &[c, b]).unwrap()[0].1;
    let difference = (p_bc - p_cb).abs();
    report(
        10,
        difference > 0.1,
        &format!(
            "order dependence of sequential probes: |{p_bc:.4} - {p_cb:.4}| = \
             {difference:.4} (must exceed 0.1)"
        ),
    );
}

#[test]
fn criterion_11_cli_monte_carlo_is_reproducible() {
    let args = [
        "sample", "--a-deg", "0", "--b-deg", "60", "--n", "50000", "--seed", "2024",
    ];
    let run = |args: &[&str]| {
        std::process::Command::new(env!("CARGO_BIN_EXE_hemifield"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let first = run(&args);
    let second = run(&args);
    let reseeded = run(&[
        "sample", "--a-deg", "0", "--b-deg", "60", "--n", "50000", "--seed", "2025",
    ]);
    let ok = first.status.success()
        && !first.stdout.is_empty()
        && first.stdout == second.stdout
        && first.stdout != reseeded.stdout;
    report(
        11,
        ok,
        &format!(
            "seeded sampling command is byte-identical across runs ({} bytes) and \
             seed-sensitive",
            first.stdout.len()
        ),
    );
}
