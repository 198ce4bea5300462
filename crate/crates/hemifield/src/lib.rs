//! Field-particle model of spin-1/2 measurement statistics on the unit sphere.
//!
//! A preparation is a complex-valued field concentrated on hemispheres of the
//! unit sphere, together with a point particle riding on the sphere surface.
//! Measuring along an axis rotates the field onto that axis and reads out a
//! hemisphere average; outcome probabilities are squared moduli of those
//! averages. A correlated pair shares one two-wing field with the particles
//! pinned to antipodal points, which reproduces singlet statistics
//! (`E = -cos(delta)`, CHSH `S = 2*sqrt(2)`) from purely local evaluation
//! rules, while a factorisable baseline built from the same ingredients stays
//! below the classical CHSH bound.
//!
//! Module map:
//! - [`geometry`]: planar measurement axes, hemispheres, surface points,
//!   uniform sphere sampling and hemisphere quadrature
//! - [`field`]: single-particle fields, the measurement rule, rebasing and
//!   equivalence classes
//! - [`subquantum`]: particle-level outcome assignment and branch-conditional
//!   outcome probabilities
//! - [`two_party`]: the correlated-pair field, its symmetric/antisymmetric
//!   split, joint distributions along three independent routes
//! - [`sampler`]: seeded Monte Carlo trial generation, CHSH runs and the
//!   naive factorisable baseline

pub mod field;
pub mod geometry;
pub mod sampler;
pub mod subquantum;
pub mod two_party;

/// Binary label used for measurement outcomes, hemisphere branches and the
/// two signs of the isotropic field construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Both signs, in the order used for table indexing.
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// Numeric outcome value: `+1` or `-1`.
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// The opposite sign.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `Plus` if the indicator holds, `Minus` otherwise.
    pub fn from_indicator(indicator: bool) -> Sign {
        if indicator {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Table index: `Plus -> 0`, `Minus -> 1`.
    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// Errors surfaced by the model's fallible operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Every measurement amplitude of the field vanishes, so outcome
    /// probabilities cannot be normalised.
    #[error("degenerate field: total measurement weight {weight:.3e} is below {MIN_MEASURABLE_WEIGHT:.0e}")]
    DegenerateField {
        /// The total squared-amplitude weight that failed the cutoff.
        weight: f64,
    },

    /// Quadrature grids need at least two nodes per direction.
    #[error("quadrature grid too small: {n_polar}x{n_azimuth} (need at least 2x2)")]
    GridTooSmall { n_polar: usize, n_azimuth: usize },

    /// A sequential measurement needs at least one axis.
    #[error("no measurement axes supplied")]
    NoAxes,

    /// Monte Carlo runs need at least one trial.
    #[error("trial count must be at least 1")]
    EmptyRun,

    /// A two-party field did not have the expected four-term product shape.
    #[error("malformed two-party field: {reason}")]
    MalformedField { reason: String },
}

/// Fields whose total measurement weight falls below this cutoff cannot be
/// measured: the outcome probabilities would be 0/0.
pub const MIN_MEASURABLE_WEIGHT: f64 = 1e-14;

/// Convenience alias for results carrying [`enum@Error`].
pub type Result<T> = std::result::Result<T, Error>;
