//! Single-particle fields and their measurement rule.
//!
//! A basis field lives on one hemisphere: its value at a surface point `r`
//! inside the support is `(r . c) e^{i phase} / pi`, where `c` is the support
//! center, and zero outside. Preparations are finite complex superpositions
//! of basis fields.
//!
//! Measuring along an axis `b` rotates the field onto `b` and averages the
//! rotated field over the half-rotated hemisphere; per term this average is
//! the first moment of the full-sphere dot-product profile over the
//! hemisphere halfway between the term's support center and the outcome
//! direction, which evaluates to the half-angle cosine
//! `cos((theta_outcome - theta_support) / 2)`. Outcome probabilities are the
//! squared moduli of the two outcome amplitudes, normalised by their sum.
//!
//! Two conventions make the superposition calculus consistent and are used
//! everywhere: the `-` outcome direction is `theta_b - pi` (never
//! `theta_b + pi`), and a support on the opposite hemisphere of `u` is
//! represented by the center `theta_u - pi`. Under these choices, rebasing a
//! hemisphere field onto any other axis (see [`rebasis`]) leaves every
//! measurement probability unchanged.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::geometry::{Axis, Hemisphere, SurfacePoint};
use crate::{Error, Result, Sign, MIN_MEASURABLE_WEIGHT};

// ─────────────────────────────────────────────────────────────────────────────
// Field types
// ─────────────────────────────────────────────────────────────────────────────

/// A field concentrated on a single hemisphere.
///
/// Value at `r`: `(r . center) e^{i phase} / pi` for `r` in the (closed)
/// support, `0` elsewhere. The sphere radius is fixed at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisField {
    support: Hemisphere,
    phase: f64,
}

impl BasisField {
    /// Basis field on `support` carrying a constant phase (radians).
    pub fn new(support: Hemisphere, phase: f64) -> Self {
        assert!(phase.is_finite(), "phase must be finite, got {phase}");
        Self { support, phase }
    }

    /// Supporting hemisphere.
    pub fn support(&self) -> Hemisphere {
        self.support
    }

    /// Constant phase carried by the field (radians).
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Field value at a surface point.
    pub fn evaluate(&self, p: SurfacePoint) -> Complex64 {
        if self.support.contains(p) {
            Complex64::from_polar(p.dot_axis(self.support.center()) / PI, self.phase)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// The phase factor `e^{i phase}` contributed to amplitudes.
    fn phase_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.phase)
    }
}

/// A finite complex superposition of basis fields.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSuperposition {
    terms: Vec<(Complex64, BasisField)>,
}

impl FieldSuperposition {
    /// Superposition from explicit `(coefficient, basis)` terms.
    ///
    /// # Panics
    /// Panics if `terms` is empty.
    pub fn new(terms: Vec<(Complex64, BasisField)>) -> Self {
        assert!(!terms.is_empty(), "a field needs at least one term");
        Self { terms }
    }

    /// The plain hemisphere field on the positive hemisphere of `a`
    /// (unit coefficient, zero phase).
    pub fn hemisphere(a: Axis) -> Self {
        Self::new(vec![(
            Complex64::new(1.0, 0.0),
            BasisField::new(Hemisphere::positive(a), 0.0),
        )])
    }

    /// The terms of the superposition.
    pub fn terms(&self) -> &[(Complex64, BasisField)] {
        &self.terms
    }

    /// Field value at a surface point (sum over terms).
    pub fn evaluate(&self, p: SurfacePoint) -> Complex64 {
        self.terms.iter().map(|(c, b)| c * b.evaluate(p)).sum()
    }

    /// Amplitude for the outcome whose signed direction is `outcome`:
    /// the half-rotated hemisphere average, summed over terms.
    ///
    /// Pass the measurement axis itself for the `+` outcome and its
    /// [`Axis::antipode`] for the `-` outcome.
    pub fn measurement_amplitude(&self, outcome: Axis) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, b)| c * b.phase_factor() * measurement_overlap(outcome, b.support().center()))
            .sum()
    }

    /// Total measurement weight `|A_+|^2 + |A_-|^2`.
    ///
    /// The weight is independent of the measurement axis (it is the Gram form
    /// of the term coefficients under half-angle cosines), so it acts as the
    /// squared norm of the superposition.
    pub fn weight(&self) -> f64 {
        let b = Axis::new(0.0);
        self.measurement_amplitude(b).norm_sqr()
            + self.measurement_amplitude(b.antipode()).norm_sqr()
    }

    /// Measure along axis `b`.
    ///
    /// # Errors
    /// Returns [`Error::DegenerateField`] when the total measurement weight
    /// falls below [`MIN_MEASURABLE_WEIGHT`], since the probabilities would
    /// be 0/0.
    pub fn measure(&self, b: Axis) -> Result<MeasurementResult> {
        let amp_plus = self.measurement_amplitude(b);
        let amp_minus = self.measurement_amplitude(b.antipode());
        let total = amp_plus.norm_sqr() + amp_minus.norm_sqr();
        if total < MIN_MEASURABLE_WEIGHT {
            return Err(Error::DegenerateField { weight: total });
        }
        Ok(MeasurementResult {
            prob_plus: amp_plus.norm_sqr() / total,
            prob_minus: amp_minus.norm_sqr() / total,
            post_plus: post_measurement_field(amp_plus, Hemisphere::positive(b)),
            post_minus: post_measurement_field(amp_minus, Hemisphere::positive(b.antipode())),
        })
    }
}

/// Outcome of measuring a field along one axis.
#[derive(Debug, Clone)]
pub struct MeasurementResult {
    /// Probability of the `+1` outcome.
    pub prob_plus: f64,
    /// Probability of the `-1` outcome.
    pub prob_minus: f64,
    /// Field left behind by the `+1` outcome: a single term on the positive
    /// hemisphere of the measurement axis, carrying the amplitude's phase.
    pub post_plus: FieldSuperposition,
    /// Field left behind by the `-1` outcome, on the opposite hemisphere.
    pub post_minus: FieldSuperposition,
}

impl MeasurementResult {
    /// Probability of the given outcome sign.
    pub fn probability(&self, outcome: Sign) -> f64 {
        match outcome {
            Sign::Plus => self.prob_plus,
            Sign::Minus => self.prob_minus,
        }
    }

    /// Post-measurement field for the given outcome sign.
    pub fn post_field(&self, outcome: Sign) -> &FieldSuperposition {
        match outcome {
            Sign::Plus => &self.post_plus,
            Sign::Minus => &self.post_minus,
        }
    }
}

/// Collapse the amplitude onto a single outcome hemisphere, keeping only the
/// amplitude's phase. A zero amplitude (unreachable outcome) collapses to the
/// plain hemisphere field so the record stays a valid superposition.
fn post_measurement_field(amp: Complex64, support: Hemisphere) -> FieldSuperposition {
    let coeff = if amp.norm() > 0.0 {
        amp / amp.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    FieldSuperposition::new(vec![(coeff, BasisField::new(support, 0.0))])
}

// ─────────────────────────────────────────────────────────────────────────────
// Hemisphere averages
// ─────────────────────────────────────────────────────────────────────────────

/// Mean of the full-sphere dot-product profile `(r . b) / pi` over a
/// hemisphere region, in closed form: `cos(theta_b - theta_region)`.
///
/// The numerical counterpart is `geometry::hemisphere_grid` integration of
/// the same integrand; the two agree to quadrature accuracy and the tests
/// hold them against each other.
pub fn average_full_dot(b: Axis, region: Hemisphere) -> f64 {
    (b.theta() - region.center().theta()).cos()
}

/// Per-term measurement overlap: the mean of the outcome direction's
/// dot-product profile over the hemisphere halfway between the term support
/// and the outcome, `cos((theta_outcome - theta_support) / 2)`.
pub fn measurement_overlap(outcome: Axis, support_center: Axis) -> f64 {
    average_full_dot(
        outcome,
        Hemisphere::positive(support_center.midpoint(outcome)),
    )
}

// ─────────────────────────────────────────────────────────────────────────────
// Derived constructions
// ─────────────────────────────────────────────────────────────────────────────

/// Rewrite the hemisphere field of axis `a` in the basis of axis `u`:
///
/// `F(a) = cos((theta_u - theta_a)/2) F(+u) + sin((theta_u - theta_a)/2) F(-u)`
///
/// where `F(-u)` is the basis field whose support center is `u.antipode()`.
/// The rewritten field is measurement-equivalent to the original for every
/// axis (the equivalence-class property the tests sweep).
pub fn rebasis(a: Axis, u: Axis) -> FieldSuperposition {
    let half = 0.5 * (u.theta() - a.theta());
    FieldSuperposition::new(vec![
        (
            Complex64::new(half.cos(), 0.0),
            BasisField::new(Hemisphere::positive(u), 0.0),
        ),
        (
            Complex64::new(half.sin(), 0.0),
            BasisField::new(Hemisphere::positive(u.antipode()), 0.0),
        ),
    ])
}

/// The isotropic two-term construction on axis `u`:
///
/// `F_alpha(u, s) = e^{s * i pi/2} F(+u) + F(-u)`
///
/// with `s = +1` or `-1` per `sign`. Measured along any axis it yields
/// probabilities (1/2, 1/2), and constructions of the same sign on different
/// axes are measurement-equivalent.
pub fn alpha_field(u: Axis, sign: Sign) -> FieldSuperposition {
    let phase = f64::from(sign.value()) * FRAC_PI_2;
    FieldSuperposition::new(vec![
        (
            Complex64::from_polar(1.0, phase),
            BasisField::new(Hemisphere::positive(u), 0.0),
        ),
        (
            Complex64::new(1.0, 0.0),
            BasisField::new(Hemisphere::positive(u.antipode()), 0.0),
        ),
    ])
}

// ─────────────────────────────────────────────────────────────────────────────
// Sequential measurement and equivalence
// ─────────────────────────────────────────────────────────────────────────────

/// Measure a field along a sequence of axes, sampling each outcome and
/// feeding the post-measurement field into the next measurement.
///
/// # Errors
/// [`Error::NoAxes`] if `axes` is empty, or any error from [`FieldSuperposition::measure`].
pub fn sequential_measure<R: Rng + ?Sized>(
    f: &FieldSuperposition,
    axes: &[Axis],
    rng: &mut R,
) -> Result<Vec<Sign>> {
    if axes.is_empty() {
        return Err(Error::NoAxes);
    }
    let mut outcomes = Vec::with_capacity(axes.len());
    let mut current = f.clone();
    for &axis in axes {
        let m = current.measure(axis)?;
        let outcome = Sign::from_indicator(rng.gen::<f64>() < m.prob_plus);
        current = m.post_field(outcome).clone();
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

/// Exact outcome-path distribution of a sequential measurement: every
/// `2^len(axes)` outcome path together with its probability.
///
/// This enumerates the measurement tree instead of sampling it, so it serves
/// as the oracle for order-dependence checks. Paths are returned in binary
/// order with `Plus` first; probabilities sum to 1.
///
/// # Errors
/// [`Error::NoAxes`] if `axes` is empty, or any error from [`FieldSuperposition::measure`].
pub fn enumerate_sequential(
    f: &FieldSuperposition,
    axes: &[Axis],
) -> Result<Vec<(Vec<Sign>, f64)>> {
    if axes.is_empty() {
        return Err(Error::NoAxes);
    }
    let mut paths = Vec::with_capacity(1 << axes.len());
    let mut prefix = Vec::with_capacity(axes.len());
    walk_paths(f, axes, 1.0, &mut prefix, &mut paths)?;
    Ok(paths)
}

fn walk_paths(
    f: &FieldSuperposition,
    remaining: &[Axis],
    prob_so_far: f64,
    prefix: &mut Vec<Sign>,
    out: &mut Vec<(Vec<Sign>, f64)>,
) -> Result<()> {
    let Some((&axis, rest)) = remaining.split_first() else {
        out.push((prefix.clone(), prob_so_far));
        return Ok(());
    };
    let m = f.measure(axis)?;
    for outcome in Sign::BOTH {
        prefix.push(outcome);
        walk_paths(
            m.post_field(outcome),
            rest,
            prob_so_far * m.probability(outcome),
            prefix,
            out,
        )?;
        prefix.pop();
    }
    Ok(())
}

/// Test whether two fields are measurement-equivalent: both outcome
/// probabilities agree within `tol` along `n_axes` axes evenly spread over a
/// full turn.
///
/// # Panics
/// Panics if `n_axes < 4` (too coarse to distinguish anything).
///
/// # Errors
/// Propagates [`Error::DegenerateField`] if either input cannot be measured.
pub fn equivalent(
    f1: &FieldSuperposition,
    f2: &FieldSuperposition,
    n_axes: usize,
    tol: f64,
) -> Result<bool> {
    assert!(n_axes >= 4, "equivalence probe needs at least 4 axes");
    for j in 0..n_axes {
        let b = Axis::new(2.0 * PI * j as f64 / n_axes as f64);
        let m1 = f1.measure(b)?;
        let m2 = f2.measure(b)?;
        if (m1.prob_plus - m2.prob_plus).abs() > tol || (m1.prob_minus - m2.prob_minus).abs() > tol
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hemisphere_grid;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Absolute tolerance for identities that hold to machine precision.
    const EXACT: f64 = 1e-12;
    /// Absolute tolerance for closed forms checked against quadrature.
    const QUAD: f64 = 1e-9;

    fn seeded_axis(rng: &mut ChaCha8Rng) -> Axis {
        Axis::new(4.0 * PI * (rng.gen::<f64>() - 0.5))
    }

    #[test]
    fn basis_field_values() {
        let f = BasisField::new(Hemisphere::positive(Axis::new(0.0)), 0.0);
        let top = f.evaluate(SurfacePoint::new(0.0, 0.0, 1.0));
        assert_abs_diff_eq!(top.re, 1.0 / PI, epsilon = EXACT);
        assert_abs_diff_eq!(top.im, 0.0, epsilon = EXACT);
        // Outside the support the field vanishes.
        assert_eq!(
            f.evaluate(SurfacePoint::new(0.0, 0.0, -1.0)),
            Complex64::new(0.0, 0.0)
        );
        // On the boundary the dot product vanishes, so the value does too.
        let rim = f.evaluate(SurfacePoint::new(1.0, 0.0, 0.0));
        assert_abs_diff_eq!(rim.norm(), 0.0, epsilon = EXACT);
    }

    #[test]
    fn basis_field_phase_rotates_the_value() {
        let f = BasisField::new(Hemisphere::positive(Axis::new(0.0)), FRAC_PI_2);
        let top = f.evaluate(SurfacePoint::new(0.0, 0.0, 1.0));
        assert_abs_diff_eq!(top.re, 0.0, epsilon = EXACT);
        assert_abs_diff_eq!(top.im, 1.0 / PI, epsilon = EXACT);
    }

    #[test]
    fn average_full_dot_closed_form() {
        let region = Hemisphere::positive(Axis::new(0.4));
        assert_abs_diff_eq!(
            average_full_dot(Axis::new(0.4), region),
            1.0,
            epsilon = EXACT
        );
        assert_abs_diff_eq!(
            average_full_dot(Axis::new(0.4 + PI / 2.0), region),
            0.0,
            epsilon = EXACT
        );
        assert_abs_diff_eq!(
            average_full_dot(Axis::new(0.4 + PI / 3.0), region),
            0.5,
            epsilon = EXACT
        );
    }

    #[test]
    fn average_full_dot_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let b = seeded_axis(&mut rng);
            let region = Hemisphere::positive(seeded_axis(&mut rng));
            let grid = hemisphere_grid(region, 16, 32).unwrap();
            let numeric = grid.integrate(|p| p.dot_axis(b) / PI);
            assert_abs_diff_eq!(average_full_dot(b, region), numeric, epsilon = QUAD);
        }
    }

    #[test]
    fn hemisphere_field_measurement_law() {
        // Probabilities (cos^2, sin^2) of half the axis separation.
        let a = Axis::new(0.0);
        let f = FieldSuperposition::hemisphere(a);

        let same = f.measure(a).unwrap();
        assert_abs_diff_eq!(same.prob_plus, 1.0, epsilon = EXACT);
        assert_abs_diff_eq!(same.prob_minus, 0.0, epsilon = EXACT);

        let third = f.measure(Axis::new(PI / 3.0)).unwrap();
        assert_abs_diff_eq!(third.prob_plus, 0.75, epsilon = EXACT);
        assert_abs_diff_eq!(third.prob_minus, 0.25, epsilon = EXACT);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = seeded_axis(&mut rng);
            let b = seeded_axis(&mut rng);
            let m = FieldSuperposition::hemisphere(a).measure(b).unwrap();
            let half = 0.5 * (b.theta() - a.theta());
            assert_abs_diff_eq!(m.prob_plus, half.cos().powi(2), epsilon = EXACT);
            assert_abs_diff_eq!(m.prob_minus, half.sin().powi(2), epsilon = EXACT);
        }
    }

    #[test]
    fn measurement_amplitude_is_the_half_rotated_average() {
        // Cross-check the closed-form overlap against explicit quadrature of
        // the half-rotated hemisphere average for a superposed field.
        let u = Axis::new(0.7);
        let f = alpha_field(u, Sign::Plus);
        let b = Axis::new(2.1);
        for outcome in [b, b.antipode()] {
            let closed = f.measurement_amplitude(outcome);
            let mut numeric = Complex64::new(0.0, 0.0);
            for (c, basis) in f.terms() {
                let mid = basis.support().center().midpoint(outcome);
                let grid = hemisphere_grid(Hemisphere::positive(mid), 16, 32).unwrap();
                let avg = grid.integrate(|p| p.dot_axis(outcome) / PI);
                numeric += c * Complex64::from_polar(1.0, basis.phase()) * avg;
            }
            assert_abs_diff_eq!((closed - numeric).norm(), 0.0, epsilon = QUAD);
        }
    }

    #[test]
    fn cancelled_field_cannot_be_measured() {
        let basis = BasisField::new(Hemisphere::positive(Axis::new(0.3)), 0.0);
        let f = FieldSuperposition::new(vec![
            (Complex64::new(1.0, 0.0), basis.clone()),
            (Complex64::new(-1.0, 0.0), basis),
        ]);
        assert!(matches!(
            f.measure(Axis::new(1.0)),
            Err(Error::DegenerateField { .. })
        ));
        assert!(f.weight() < MIN_MEASURABLE_WEIGHT);
    }

    #[test]
    fn post_measurement_fields_live_on_the_outcome_hemispheres() {
        let f = FieldSuperposition::hemisphere(Axis::new(0.2));
        let b = Axis::new(1.0);
        let m = f.measure(b).unwrap();

        let plus_support = m.post_plus.terms()[0].1.support();
        let minus_support = m.post_minus.terms()[0].1.support();
        assert_abs_diff_eq!(plus_support.center().theta(), b.theta(), epsilon = 0.0);
        assert_abs_diff_eq!(
            minus_support.center().theta(),
            b.antipode().theta(),
            epsilon = 0.0
        );
        // Post fields are unit-weight single terms: immediately re-measuring
        // along the same axis is deterministic.
        let again = m.post_plus.measure(b).unwrap();
        assert_abs_diff_eq!(again.prob_plus, 1.0, epsilon = EXACT);
        let again_minus = m.post_minus.measure(b).unwrap();
        assert_abs_diff_eq!(again_minus.prob_minus, 1.0, epsilon = EXACT);
    }

    #[test]
    fn rebasis_is_identity_on_the_same_axis() {
        let a = Axis::new(0.9);
        let f = rebasis(a, a);
        assert_abs_diff_eq!(f.terms()[0].0.re, 1.0, epsilon = EXACT);
        assert_abs_diff_eq!(f.terms()[1].0.re, 0.0, epsilon = EXACT);
    }

    #[test]
    fn rebasis_preserves_all_measurement_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..36 {
            let a = seeded_axis(&mut rng);
            let u = seeded_axis(&mut rng);
            let original = FieldSuperposition::hemisphere(a);
            let rewritten = rebasis(a, u);
            for j in 0..90 {
                let b = Axis::new(2.0 * PI * j as f64 / 90.0);
                let m1 = original.measure(b).unwrap();
                let m2 = rewritten.measure(b).unwrap();
                assert_abs_diff_eq!(m1.prob_plus, m2.prob_plus, epsilon = EXACT);
                assert_abs_diff_eq!(m1.prob_minus, m2.prob_minus, epsilon = EXACT);
            }
        }
    }

    #[test]
    fn rebasis_quarter_turn_half_split() {
        // Rewriting the axis-0 field on the quarter-turn axis and measuring
        // along that axis gives an even split.
        let rewritten = rebasis(Axis::new(0.0), Axis::new(PI / 2.0));
        let m = rewritten.measure(Axis::new(PI / 2.0)).unwrap();
        assert_abs_diff_eq!(m.prob_plus, 0.5, epsilon = EXACT);
        assert_abs_diff_eq!(m.prob_minus, 0.5, epsilon = EXACT);
    }

    #[test]
    fn wrong_antipode_representative_breaks_rebasing() {
        // Same decomposition but with the opposite-hemisphere support written
        // as theta + pi: probabilities acquire a dependence on the basis axis,
        // which is exactly why the theta - pi convention is load-bearing.
        let a = Axis::new(0.0);
        let u = Axis::new(PI / 3.0);
        let half = 0.5 * (u.theta() - a.theta());
        let wrong = FieldSuperposition::new(vec![
            (
                Complex64::new(half.cos(), 0.0),
                BasisField::new(Hemisphere::positive(u), 0.0),
            ),
            (
                Complex64::new(half.sin(), 0.0),
                BasisField::new(Hemisphere::positive(Axis::new(u.theta() + PI)), 0.0),
            ),
        ]);
        let b = Axis::new(1.9);
        let good = FieldSuperposition::hemisphere(a).measure(b).unwrap();
        let bad = wrong.measure(b).unwrap();
        assert!((good.prob_plus - bad.prob_plus).abs() > 0.1);
    }

    #[test]
    fn alpha_field_is_isotropic() {
        let u = Axis::new(0.35);
        for sign in Sign::BOTH {
            let f = alpha_field(u, sign);
            for j in 0..360 {
                let b = Axis::new(2.0 * PI * j as f64 / 360.0);
                let m = f.measure(b).unwrap();
                assert_abs_diff_eq!(m.prob_plus, 0.5, epsilon = EXACT);
                assert_abs_diff_eq!(m.prob_minus, 0.5, epsilon = EXACT);
            }
        }
    }

    #[test]
    fn alpha_amplitudes_have_unit_modulus() {
        // Per-outcome amplitude i*cos(d/2) - sin(d/2) (and its antipodal
        // partner) has modulus 1 for every separation d: brute-force sweep.
        let u = Axis::new(0.0);
        let f = alpha_field(u, Sign::Plus);
        for j in 0..720 {
            let d = 4.0 * PI * j as f64 / 720.0 - 2.0 * PI;
            let b = Axis::new(d);
            assert_abs_diff_eq!(f.measurement_amplitude(b).norm(), 1.0, epsilon = EXACT);
            assert_abs_diff_eq!(
                f.measurement_amplitude(b.antipode()).norm(),
                1.0,
                epsilon = EXACT
            );
        }
    }

    #[test]
    fn alpha_fields_of_equal_sign_are_equivalent_across_axes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let u = seeded_axis(&mut rng);
            let v = seeded_axis(&mut rng);
            for sign in Sign::BOTH {
                assert!(
                    equivalent(&alpha_field(u, sign), &alpha_field(v, sign), 24, EXACT).unwrap()
                );
            }
        }
    }

    #[test]
    fn equivalence_probe_distinguishes_distinct_preparations() {
        let f1 = FieldSuperposition::hemisphere(Axis::new(0.0));
        let f2 = FieldSuperposition::hemisphere(Axis::new(PI / 2.0));
        assert!(equivalent(&f1, &rebasis(Axis::new(0.0), Axis::new(2.2)), 24, EXACT).unwrap());
        assert!(!equivalent(&f1, &f2, 24, 1e-3).unwrap());
    }

    #[test]
    fn sequential_measurement_repeats_are_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = FieldSuperposition::hemisphere(Axis::new(0.4));
        let axes = [Axis::new(0.4), Axis::new(0.4), Axis::new(0.4)];
        for _ in 0..20 {
            let outcomes = sequential_measure(&f, &axes, &mut rng).unwrap();
            assert_eq!(outcomes, vec![Sign::Plus; 3]);
        }
        assert!(matches!(
            sequential_measure(&f, &[], &mut rng),
            Err(Error::NoAxes)
        ));
    }

    #[test]
    fn enumerated_paths_match_the_chain_rule() {
        let f = FieldSuperposition::hemisphere(Axis::new(0.0));
        let b = Axis::new(PI / 4.0);
        let c = Axis::new(PI / 2.0);
        let paths = enumerate_sequential(&f, &[b, c]).unwrap();
        assert_eq!(paths.len(), 4);
        let total: f64 = paths.iter().map(|(_, p)| p).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = EXACT);

        // First outcome + keeps the field on b, so the second measurement
        // sees separation pi/4; first outcome - flips to the antipode of b,
        // so the second sees separation pi/4 + pi.
        let c8 = (PI / 8.0).cos().powi(2);
        let s8 = (PI / 8.0).sin().powi(2);
        let expect = [c8 * c8, c8 * s8, s8 * s8, s8 * c8];
        for ((path, p), e) in paths.iter().zip(expect) {
            assert_eq!(path.len(), 2);
            assert_abs_diff_eq!(*p, e, epsilon = EXACT);
        }
    }

    #[test]
    fn measurement_order_changes_path_statistics() {
        // Axes an eighth and a quarter turn from the preparation: probing
        // them in the two orders yields visibly different joint statistics.
        let f = FieldSuperposition::hemisphere(Axis::new(0.0));
        let b = Axis::new(PI / 4.0);
        let c = Axis::new(PI / 2.0);
        let bc = enumerate_sequential(&f, &[b, c]).unwrap();
        let cb = enumerate_sequential(&f, &[c, b]).unwrap();
        // Compare P(outcome_b = +, outcome_c = +) across orders; in the
        // second enumeration the path order is (outcome_c, outcome_b).
        let p_bc = bc[0].1;
        let p_cb = cb[0].1;
        assert!(
            (p_bc - p_cb).abs() > 0.1,
            "orders should differ: {p_bc} vs {p_cb}"
        );
    }

    proptest! {
        #[test]
        fn prop_probabilities_are_normalised(
            theta in -10.0..10.0f64,
            b in -10.0..10.0f64,
            re in -2.0..2.0f64,
            im in -2.0..2.0f64,
        ) {
            // Two-term superposition with an arbitrary complex second
            // coefficient; skip near-cancelling combinations via the weight.
            let f = FieldSuperposition::new(vec![
                (Complex64::new(1.0, 0.0), BasisField::new(Hemisphere::positive(Axis::new(theta)), 0.0)),
                (Complex64::new(re, im), BasisField::new(Hemisphere::positive(Axis::new(theta).antipode()), 0.0)),
            ]);
            prop_assume!(f.weight() > 1e-6);
            let m = f.measure(Axis::new(b)).unwrap();
            prop_assert!((m.prob_plus + m.prob_minus - 1.0).abs() < EXACT);
            prop_assert!(m.prob_plus >= 0.0 && m.prob_plus <= 1.0);
        }

        #[test]
        fn prop_global_phase_is_unobservable(
            a in -10.0..10.0f64,
            b in -10.0..10.0f64,
            gamma in 0.0..(2.0 * PI),
        ) {
            let f = FieldSuperposition::hemisphere(Axis::new(a));
            let rotated = FieldSuperposition::new(
                f.terms()
                    .iter()
                    .map(|(c, basis)| (c * Complex64::from_polar(1.0, gamma), basis.clone()))
                    .collect(),
            );
            let m1 = f.measure(Axis::new(b)).unwrap();
            let m2 = rotated.measure(Axis::new(b)).unwrap();
            prop_assert!((m1.prob_plus - m2.prob_plus).abs() < EXACT);
        }

        #[test]
        fn prop_full_turn_shift_is_unobservable(
            a in -6.0..6.0f64,
            u in -6.0..6.0f64,
            b in -6.0..6.0f64,
        ) {
            // Shifting the basis axis by a full turn flips the sign of both
            // the rebasis coefficients and the overlaps; probabilities are
            // unchanged.
            let f1 = rebasis(Axis::new(a), Axis::new(u));
            let f2 = rebasis(Axis::new(a), Axis::new(u + 2.0 * PI));
            let m1 = f1.measure(Axis::new(b)).unwrap();
            let m2 = f2.measure(Axis::new(b)).unwrap();
            prop_assert!((m1.prob_plus - m2.prob_plus).abs() < EXACT);
        }
    }
}
