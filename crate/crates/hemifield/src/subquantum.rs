//! Particle-level outcome assignment and branch-conditional probabilities.
//!
//! Underneath the field statistics sits a point particle at a definite sphere
//! position. When the field is prepared directly on the measurement axis the
//! outcome is elementary: the sign of the hemisphere the particle occupies.
//! For the isotropic two-term construction measured along some other axis
//! `b`, only a conditional law survives: given the particle's hemisphere
//! branch relative to the construction axis `u`, the outcome along `b` is
//! `+1` with probability
//!
//! ```text
//! P(+1 | branch s) = cos^2((theta_u - theta_b)/2 + shift(s))
//! ```
//!
//! with `shift(+) = 0` and `shift(-) = pi/2` — so the `-` branch probability
//! is `sin^2` of the same half angle. That is the corrected reading used
//! throughout the crate: the two branches then average to 1/2 for every `b`,
//! matching the isotropy of the construction, and they reproduce the
//! elementary account at `b = u`.
//!
//! A literal reading with `shift(-) = pi` is kept behind
//! [`ConditionalReading::Literal`] purely to document its failure: `cos^2`
//! is `pi`-periodic, so both branches coincide and the branch average drifts
//! from 1/2 by `|cos^2((theta_u - theta_b)/2) - 1/2|`. The consistency check
//! below exposes exactly that residual.

use std::f64::consts::FRAC_PI_2;

use crate::field::FieldSuperposition;
use crate::geometry::{Axis, SurfacePoint};
use crate::Sign;

/// A point particle riding on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    position: SurfacePoint,
}

impl Particle {
    /// Particle at the given surface position.
    pub fn new(position: SurfacePoint) -> Self {
        Self { position }
    }

    /// Current position.
    pub fn position(self) -> SurfacePoint {
        self.position
    }
}

/// True iff the particle is embedded in the field: the field value at its
/// position is nonzero, or the position lies on the closed support of a term
/// with nonzero coefficient (the support boundary carries value zero but
/// still belongs to the field's reach).
pub fn embedded_ok(f: &FieldSuperposition, p: &Particle) -> bool {
    if f.evaluate(p.position()).norm() > 0.0 {
        return true;
    }
    f.terms()
        .iter()
        .any(|(c, basis)| c.norm() > 0.0 && basis.support().contains(p.position()))
}

/// Elementary outcome for a field prepared directly on the measurement axis
/// `u`: the sign of the hemisphere the particle occupies, with the boundary
/// tie resolved toward `+1`.
pub fn elementary_outcome(u: Axis, p: &Particle) -> Sign {
    Sign::from_indicator(p.position().dot_axis(u) >= 0.0)
}

/// Inputs of the branch-conditional outcome law: construction axis `u`,
/// measurement axis `b`, and the particle's hemisphere branch relative to
/// `u` (`Plus` for the positive hemisphere of `u`, `Minus` for its antipode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSpec {
    /// Construction axis of the isotropic field.
    pub u: Axis,
    /// Measurement axis.
    pub b: Axis,
    /// Hemisphere branch occupied by the particle, relative to `u`.
    pub branch: Sign,
}

/// Which reading of the branch-dependent phase shift to use.
///
/// `Corrected` (shift `pi/2` on the `-` branch) is the physically consistent
/// table used by the whole crate. `Literal` (shift `pi`) collapses both
/// branches onto the same probability and violates the branch-average
/// consistency law; it exists only so the failure can be demonstrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionalReading {
    Corrected,
    Literal,
}

/// Probability of outcome `+1` along `spec.b`, conditional on the particle's
/// hemisphere branch relative to the construction axis `spec.u`.
pub fn alpha_conditional(spec: ConditionalSpec, reading: ConditionalReading) -> f64 {
    let half = 0.5 * (spec.u.theta() - spec.b.theta());
    let shift = match (spec.branch, reading) {
        (Sign::Plus, _) => 0.0,
        (Sign::Minus, ConditionalReading::Corrected) => FRAC_PI_2,
        (Sign::Minus, ConditionalReading::Literal) => 2.0 * FRAC_PI_2,
    };
    (half + shift).cos().powi(2)
}

/// Consistency residual of the conditional table: the particle occupies each
/// branch with probability 1/2, so the branch average of `P(+1 | branch)`
/// must equal the unconditional isotropic value 1/2. Returns
/// `|avg - 1/2|`; zero (to rounding) for the corrected reading, and
/// `|cos^2((theta_u - theta_b)/2) - 1/2|` for the literal one.
pub fn consistency_check(u: Axis, b: Axis, reading: ConditionalReading) -> f64 {
    let avg = Sign::BOTH
        .iter()
        .map(|&branch| 0.5 * alpha_conditional(ConditionalSpec { u, b, branch }, reading))
        .sum::<f64>();
    (avg - 0.5).abs()
}
