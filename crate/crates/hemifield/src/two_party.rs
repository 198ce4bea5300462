//! Correlated pairs: the two-wing field, its symmetric/antisymmetric split,
//! and joint outcome distributions along three independent routes.
//!
//! A pair source prepares one two-wing field
//!
//! ```text
//! F_pair(u) = F_alpha(u, +)^(1) * F_alpha(u, -)^(2)
//! ```
//!
//! together with two particles pinned to exactly antipodal sphere points.
//! Expanding the product over the two-term isotropic constructions gives four
//! product terms which split by support pattern into a symmetric part `F_sym`
//! (both wings on the same hemisphere of `u`) and, `pi/2` out of phase with
//! it, an antisymmetric part `F_anti` (wings on opposite hemispheres):
//!
//! ```text
//! F_pair = F_sym + e^{i pi/2} F_anti
//! F_sym  = F(+u)F(+u) + F(-u)F(-u)
//! F_anti = F(+u)F(-u) - F(-u)F(+u)
//! ```
//!
//! Joint outcome weights come from the antisymmetric part alone: the
//! symmetric part's wing averages factor into a setting-independent constant
//! block that would wash out the correlation (it puts weight 1/4 on the
//! forbidden equal outcomes at equal settings — see
//! [`f0_noncontribution_check`]), so it is excluded from the outcome rule by
//! construction. The antisymmetric weights are independent of the
//! construction axis `u` and give
//!
//! ```text
//! p(equal outcomes)    = 1/2 sin^2(delta / 2)
//! p(opposite outcomes) = 1/2 cos^2(delta / 2)      delta = theta_b - theta_a
//! ```
//!
//! hence the correlation `E = -cos(delta)` with even marginals on both wings.
//!
//! Two more routes derive the same distribution without touching the
//! antisymmetric average: rebase the pair field onto either measurement axis
//! and anchor that wing's outcome on its particle's hemisphere, then read the
//! other wing from the branch conditional (see [`joint_via_conditional`]).
//! All three routes agree to rounding; the tests and the `check` command
//! sweep that agreement.

use num_complex::Complex64;

use crate::field::{alpha_field, measurement_overlap, BasisField, FieldSuperposition};
use crate::geometry::{Axis, SurfacePoint};
use crate::subquantum::{alpha_conditional, ConditionalReading, ConditionalSpec};
use crate::{Error, Result, Sign};

/// Which wing (measurement station) of the pair is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wing {
    One,
    Two,
}

// ─────────────────────────────────────────────────────────────────────────────
// Two-party fields
// ─────────────────────────────────────────────────────────────────────────────

/// A finite superposition of two-wing product terms
/// `coefficient * basis_1^(wing 1) * basis_2^(wing 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartyField {
    terms: Vec<(Complex64, BasisField, BasisField)>,
}

impl TwoPartyField {
    /// Field from explicit product terms.
    ///
    /// # Panics
    /// Panics if `terms` is empty.
    pub fn new(terms: Vec<(Complex64, BasisField, BasisField)>) -> Self {
        assert!(
            !terms.is_empty(),
            "a two-party field needs at least one term"
        );
        Self { terms }
    }

    /// The product terms.
    pub fn terms(&self) -> &[(Complex64, BasisField, BasisField)] {
        &self.terms
    }

    /// Wing-averaged amplitude for the signed outcome directions `o1`, `o2`:
    /// each wing contributes its half-rotated hemisphere average, summed over
    /// product terms with their coefficients and basis phases.
    fn wing_product_amplitude(&self, o1: Axis, o2: Axis) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, b1, b2)| {
                c * Complex64::from_polar(1.0, b1.phase() + b2.phase())
                    * measurement_overlap(o1, b1.support().center())
                    * measurement_overlap(o2, b2.support().center())
            })
            .sum()
    }
}

/// Expand the tensor product of two single-wing superpositions into a
/// two-party field (coefficients multiply; basis fields keep their phases).
pub fn product_field(f1: &FieldSuperposition, f2: &FieldSuperposition) -> TwoPartyField {
    let mut terms = Vec::with_capacity(f1.terms().len() * f2.terms().len());
    for (c1, b1) in f1.terms() {
        for (c2, b2) in f2.terms() {
            terms.push((c1 * c2, b1.clone(), b2.clone()));
        }
    }
    TwoPartyField::new(terms)
}

/// The pair field on construction axis `u`: the wing-1 `+` construction times
/// the wing-2 `-` construction, expanded into four product terms.
pub fn make_ft(u: Axis) -> TwoPartyField {
    product_field(&alpha_field(u, Sign::Plus), &alpha_field(u, Sign::Minus))
}

/// Swapped variant (wing labels and construction signs interchanged):
/// `F_alpha(u, -)^(1) * F_alpha(u, +)^(2)`. Prepares an equivalent pair — the
/// antisymmetric amplitude flips sign globally, so every joint probability
/// is unchanged; the tests pin this down.
pub fn make_ft_swapped(u: Axis) -> TwoPartyField {
    product_field(&alpha_field(u, Sign::Minus), &alpha_field(u, Sign::Plus))
}

/// Split a pair field into its symmetric and antisymmetric parts
/// `(F_sym, F_anti)` such that `F_pair = F_sym + e^{i pi/2} F_anti`
/// term-by-term: same-support terms form `F_sym` unchanged, opposite-support
/// terms are divided by `e^{i pi/2}` and form `F_anti`.
///
/// # Errors
/// [`Error::MalformedField`] unless the input has the four-term product shape
/// produced by [`make_ft`] / [`make_ft_swapped`]: one term per support
/// pattern over a common axis pair `{+u, -u}`, unit coefficients on the
/// same-support terms, coefficients `+-i` with opposite signs on the
/// opposite-support terms, and no phase hidden in the basis fields.
pub fn decompose(ft: &TwoPartyField) -> Result<(TwoPartyField, TwoPartyField)> {
    let malformed = |reason: &str| Error::MalformedField {
        reason: reason.to_string(),
    };

    if ft.terms().len() != 4 {
        return Err(malformed("expected exactly four product terms"));
    }
    if ft
        .terms()
        .iter()
        .any(|(_, b1, b2)| b1.phase() != 0.0 || b2.phase() != 0.0)
    {
        return Err(malformed("expected all phases in the coefficients"));
    }

    // Recover the common axis pair from the wing-1 supports: two centers a
    // half-turn apart, the larger angle being the +u representative.
    let mut wing1: Vec<f64> = ft
        .terms()
        .iter()
        .map(|(_, b1, _)| b1.support().center().theta())
        .collect();
    wing1.sort_by(|p, q| p.partial_cmp(q).unwrap());
    wing1.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    if wing1.len() != 2 || (wing1[1] - wing1[0] - std::f64::consts::PI).abs() > 1e-12 {
        return Err(malformed("wing-1 supports are not an antipodal axis pair"));
    }
    let theta_plus = wing1[1];

    let eye = Complex64::new(0.0, 1.0);
    let mut sym = Vec::with_capacity(2);
    let mut anti = Vec::with_capacity(2);
    let mut seen = [false; 4];
    for (c, b1, b2) in ft.terms() {
        let sign_of = |basis: &BasisField| -> Result<Sign> {
            let theta = basis.support().center().theta();
            if (theta - theta_plus).abs() < 1e-12 {
                Ok(Sign::Plus)
            } else if (theta - (theta_plus - std::f64::consts::PI)).abs() < 1e-12 {
                Ok(Sign::Minus)
            } else {
                Err(malformed("support center off the common axis pair"))
            }
        };
        let s1 = sign_of(b1)?;
        let s2 = sign_of(b2)?;
        let slot = 2 * s1.index() + s2.index();
        if seen[slot] {
            return Err(malformed("duplicate support pattern"));
        }
        seen[slot] = true;
        if s1 == s2 {
            if (c - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                return Err(malformed("same-support coefficient is not 1"));
            }
            sym.push((*c, b1.clone(), b2.clone()));
        } else {
            if (c.re).abs() > 1e-12 || (c.im.abs() - 1.0).abs() > 1e-12 {
                return Err(malformed("opposite-support coefficient is not +-i"));
            }
            anti.push((c / eye, b1.clone(), b2.clone()));
        }
    }
    if sym.len() != 2 || anti.len() != 2 {
        return Err(malformed("support patterns do not split 2 + 2"));
    }
    if (anti[0].0 + anti[1].0).norm() > 1e-12 {
        return Err(malformed("opposite-support coefficients do not alternate"));
    }

    Ok((TwoPartyField::new(sym), TwoPartyField::new(anti)))
}

// ─────────────────────────────────────────────────────────────────────────────
// Source state
// ─────────────────────────────────────────────────────────────────────────────

/// One emission event: the shared pair field, the construction axis, the two
/// particle positions (exactly antipodal by construction), and inert
/// lab-line coordinates for the two stations.
#[derive(Debug, Clone)]
pub struct SourceState {
    field: TwoPartyField,
    u: Axis,
    r1: SurfacePoint,
    r2: SurfacePoint,
    x1: f64,
    x2: f64,
}

impl SourceState {
    /// Emission with wing-1 particle at `r1`; the wing-2 particle is pinned
    /// to the exact antipode. `x1`, `x2` are carried as inert metadata.
    pub fn new(u: Axis, r1: SurfacePoint, x1: f64, x2: f64) -> Self {
        Self {
            field: make_ft(u),
            u,
            r1,
            r2: r1.antipodal_point(),
            x1,
            x2,
        }
    }

    /// The shared two-wing field.
    pub fn field(&self) -> &TwoPartyField {
        &self.field
    }

    /// Construction axis.
    pub fn u(&self) -> Axis {
        self.u
    }

    /// Wing-1 particle position.
    pub fn r1(&self) -> SurfacePoint {
        self.r1
    }

    /// Wing-2 particle position (the exact antipode of `r1`).
    pub fn r2(&self) -> SurfacePoint {
        self.r2
    }

    /// Wing-1 station coordinate (inert).
    pub fn x1(&self) -> f64 {
        self.x1
    }

    /// Wing-2 station coordinate (inert).
    pub fn x2(&self) -> f64 {
        self.x2
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Joint distributions
// ─────────────────────────────────────────────────────────────────────────────

/// A pair of measurement axes, one per wing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSetting {
    /// Wing-1 axis.
    pub a: Axis,
    /// Wing-2 axis.
    pub b: Axis,
}

/// Normalised joint distribution over the four outcome pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    p: [[f64; 2]; 2],
}

impl JointDistribution {
    /// Distribution from a probability table indexed `[e1][e2]` with
    /// `Plus -> 0`, `Minus -> 1`.
    ///
    /// # Panics
    /// Debug builds panic unless entries are non-negative and sum to 1
    /// within `1e-9`.
    pub fn from_table(p: [[f64; 2]; 2]) -> Self {
        debug_assert!(p.iter().flatten().all(|&x| x >= 0.0));
        debug_assert!((p.iter().flatten().sum::<f64>() - 1.0).abs() < 1e-9);
        Self { p }
    }

    /// Probability of the outcome pair `(e1, e2)`.
    pub fn probability(&self, e1: Sign, e2: Sign) -> f64 {
        self.p[e1.index()][e2.index()]
    }

    /// The full table, indexed `[e1][e2]`.
    pub fn table(&self) -> [[f64; 2]; 2] {
        self.p
    }

    /// Marginal `(P(+1), P(-1))` of one wing.
    pub fn marginal(&self, wing: Wing) -> (f64, f64) {
        match wing {
            Wing::One => (self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]),
            Wing::Two => (self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]),
        }
    }

    /// Outcome-product expectation `<e1 * e2>`.
    pub fn correlation(&self) -> f64 {
        self.p[0][0] + self.p[1][1] - self.p[0][1] - self.p[1][0]
    }

    /// Largest absolute difference between corresponding entries.
    pub fn max_abs_difference(&self, other: &JointDistribution) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.p[i][j] - other.p[i][j]).abs());
            }
        }
        worst
    }
}

/// Signed outcome direction: the axis itself for `+1`, its antipode for `-1`.
fn signed_axis(axis: Axis, outcome: Sign) -> Axis {
    match outcome {
        Sign::Plus => axis,
        Sign::Minus => axis.antipode(),
    }
}

/// Antisymmetric-part amplitude for the outcome pair `(e1, e2)` at setting
/// `s`, built on construction axis `u`: the difference of wing-average
/// products
///
/// ```text
/// <o1|+u><o2|-u> - <o1|-u><o2|+u>
/// ```
///
/// where `<o|c> = cos((theta_o - theta_c)/2)` is the per-wing hemisphere
/// average toward the signed outcome direction `o`. The squared modulus is
/// independent of `u`.
pub fn joint_amplitude_aleph(u: Axis, s: JointSetting, e1: Sign, e2: Sign) -> f64 {
    let o1 = signed_axis(s.a, e1);
    let o2 = signed_axis(s.b, e2);
    let plus = u;
    let minus = u.antipode();
    measurement_overlap(o1, plus) * measurement_overlap(o2, minus)
        - measurement_overlap(o1, minus) * measurement_overlap(o2, plus)
}

/// Joint distribution at setting `s` from the antisymmetric amplitudes on
/// construction axis `u`, normalised over the four outcome pairs.
pub fn joint_distribution(s: JointSetting, u: Axis) -> JointDistribution {
    let mut table = [[0.0; 2]; 2];
    let mut total = 0.0;
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            let amp = joint_amplitude_aleph(u, s, e1, e2);
            table[e1.index()][e2.index()] = amp * amp;
            total += amp * amp;
        }
    }
    for row in &mut table {
        for cell in row {
            *cell /= total;
        }
    }
    JointDistribution::from_table(table)
}

/// Joint distribution read off an explicit two-party field: split it with
/// [`decompose`] and normalise the squared antisymmetric-part wing averages.
///
/// For fields built by [`make_ft`] this reproduces [`joint_distribution`];
/// it also handles the swapped construction, whose antisymmetric part
/// differs by a global sign only.
///
/// # Errors
/// Whatever [`decompose`] reports for malformed input.
pub fn joint_distribution_from_field(
    ft: &TwoPartyField,
    s: JointSetting,
) -> Result<JointDistribution> {
    let (_, anti) = decompose(ft)?;
    let mut table = [[0.0; 2]; 2];
    let mut total = 0.0;
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            let amp = anti
                .wing_product_amplitude(signed_axis(s.a, e1), signed_axis(s.b, e2))
                .norm_sqr();
            table[e1.index()][e2.index()] = amp;
            total += amp;
        }
    }
    for row in &mut table {
        for cell in row {
            *cell /= total;
        }
    }
    Ok(JointDistribution::from_table(table))
}

/// Joint distribution via the conditional route, anchoring the given wing.
///
/// Rebase the pair field onto the anchored wing's axis; that wing's outcome
/// is then elementary — the sign of the hemisphere its particle occupies,
/// uniform over `(+1, -1)`. The particles are exactly antipodal, so the other
/// wing's particle occupies the opposite branch, and its outcome follows the
/// branch conditional with the anchored axis as construction axis.
pub fn joint_via_conditional(s: JointSetting, anchor: Wing) -> JointDistribution {
    joint_via_conditional_with(s, anchor, ConditionalReading::Corrected)
}

/// [`joint_via_conditional`] with an explicit conditional-table reading;
/// the literal reading exists only to demonstrate how it breaks the
/// agreement between routes.
pub fn joint_via_conditional_with(
    s: JointSetting,
    anchor: Wing,
    reading: ConditionalReading,
) -> JointDistribution {
    let mut table = [[0.0; 2]; 2];
    match anchor {
        Wing::One => {
            for e1 in Sign::BOTH {
                // Anchored outcome e1 means r1 occupies branch e1 of axis a,
                // so r2 occupies the opposite branch.
                let p_plus = alpha_conditional(
                    ConditionalSpec {
                        u: s.a,
                        b: s.b,
                        branch: e1.flip(),
                    },
                    reading,
                );
                table[e1.index()][Sign::Plus.index()] = 0.5 * p_plus;
                table[e1.index()][Sign::Minus.index()] = 0.5 * (1.0 - p_plus);
            }
        }
        Wing::Two => {
            for e2 in Sign::BOTH {
                let p_plus = alpha_conditional(
                    ConditionalSpec {
                        u: s.b,
                        b: s.a,
                        branch: e2.flip(),
                    },
                    reading,
                );
                table[Sign::Plus.index()][e2.index()] = 0.5 * p_plus;
                table[Sign::Minus.index()][e2.index()] = 0.5 * (1.0 - p_plus);
            }
        }
    }
    JointDistribution::from_table(table)
}

/// Outcome-product expectation at setting `s`: `-cos(theta_b - theta_a)`.
/// Uses the default construction axis; the distribution is independent of it.
pub fn correlation(s: JointSetting) -> f64 {
    joint_distribution(s, Axis::new(0.0)).correlation()
}

/// Marginal `(P(+1), P(-1))` of one wing at setting `s`; `(1/2, 1/2)`
/// regardless of either axis (no signalling between wings).
pub fn marginal(s: JointSetting, wing: Wing) -> (f64, f64) {
    joint_distribution(s, Axis::new(0.0)).marginal(wing)
}

// ─────────────────────────────────────────────────────────────────────────────
// Exclusion of the symmetric part
// ─────────────────────────────────────────────────────────────────────────────

/// Evidence that joint weights must come from the antisymmetric part alone.
#[derive(Debug, Clone, Copy)]
pub struct F0ExclusionReport {
    /// Largest disagreement between the antisymmetric-part distribution and
    /// the two conditional routes (zero up to rounding).
    pub aleph_route_residual: f64,
    /// Largest shift any outcome probability suffers when the symmetric
    /// part's wing averages are added to the weights (nonzero for generic
    /// settings; 1/4 on the forbidden equal outcomes at equal settings).
    pub f0_included_discrepancy: f64,
}

/// Compare the antisymmetric-only distribution against the conditional
/// routes, and against the distribution that would follow if the symmetric
/// part contributed: the parts are `pi/2` out of phase, so including the
/// symmetric part adds its squared wing averages to the weights,
/// `|<F_sym>|^2 + |<F_anti>|^2`, which flattens the distribution and breaks
/// the perfect anticorrelation at equal settings.
///
/// # Errors
/// Whatever [`decompose`] reports; never for fields built by [`make_ft`].
pub fn f0_noncontribution_check(s: JointSetting, u: Axis) -> Result<F0ExclusionReport> {
    let anti_only = joint_distribution(s, u);
    let residual1 = anti_only.max_abs_difference(&joint_via_conditional(s, Wing::One));
    let residual2 = anti_only.max_abs_difference(&joint_via_conditional(s, Wing::Two));

    let (sym, anti) = decompose(&make_ft(u))?;
    let mut with_sym = [[0.0; 2]; 2];
    let mut total = 0.0;
    for e1 in Sign::BOTH {
        for e2 in Sign::BOTH {
            let o1 = signed_axis(s.a, e1);
            let o2 = signed_axis(s.b, e2);
            let weight = sym.wing_product_amplitude(o1, o2).norm_sqr()
                + anti.wing_product_amplitude(o1, o2).norm_sqr();
            with_sym[e1.index()][e2.index()] = weight;
            total += weight;
        }
    }
    for row in &mut with_sym {
        for cell in row {
            *cell /= total;
        }
    }
    let discrepancy = anti_only.max_abs_difference(&JointDistribution::from_table(with_sym));

    Ok(F0ExclusionReport {
        aleph_route_residual: residual1.max(residual2),
        f0_included_discrepancy: discrepancy,
    })
}
