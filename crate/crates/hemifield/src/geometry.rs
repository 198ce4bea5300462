//! Spherical geometry: measurement axes, hemispheres, surface points,
//! uniform sphere sampling and hemisphere quadrature.
//!
//! Every measurement direction lies in a single plane, so an axis is one
//! polar angle `theta` in that plane; sphere points stay fully
//! three-dimensional. Angles are kept un-normalised on the real line: all
//! downstream statistics are built from half-angle cosines whose sign flips
//! cancel pairwise, so probabilities are `2*pi`-periodic without any angle
//! wrapping (the property tests pin this down).
//!
//! Sign convention: the antipode of `theta` is represented as `theta - pi`.
//! Half-angle expressions are sensitive to the choice of representative, and
//! only this one keeps superposition coefficients consistent across the rest
//! of the crate; see `field::rebasis`.

use std::f64::consts::PI;

use rand::Rng;

use crate::{Error, Result};

// ─────────────────────────────────────────────────────────────────────────────
// Axes
// ─────────────────────────────────────────────────────────────────────────────

/// A measurement axis in the common plane of all analyser settings,
/// identified by its polar angle in radians.
///
/// `theta = 0` is the +z direction, `theta = pi/2` is +x. The angle is stored
/// exactly as given (no wrapping); antipodes are represented as `theta - pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    theta: f64,
}

impl Axis {
    /// Axis at polar angle `theta` (radians).
    ///
    /// # Panics
    /// Panics if `theta` is not finite.
    pub fn new(theta: f64) -> Self {
        assert!(theta.is_finite(), "axis angle must be finite, got {theta}");
        Self { theta }
    }

    /// Polar angle in radians, exactly as constructed.
    pub fn theta(self) -> f64 {
        self.theta
    }

    /// Unit vector `(sin theta, 0, cos theta)` of this axis.
    pub fn unit_vector(self) -> [f64; 3] {
        [self.theta.sin(), 0.0, self.theta.cos()]
    }

    /// The opposite direction, represented as `theta - pi`.
    ///
    /// The representative matters: half-angle amplitudes distinguish
    /// `theta - pi` from `theta + pi` by a sign, and only `theta - pi`
    /// composes consistently with the superposition coefficients used
    /// throughout the crate.
    pub fn antipode(self) -> Self {
        Self {
            theta: self.theta - PI,
        }
    }

    /// Axis halfway between `self` and `other`: `(theta_1 + theta_2) / 2`.
    ///
    /// For antipodal inputs the geometric midpoint is ambiguous; this formula
    /// then picks the representative fixed by the two input angles, which is
    /// exactly the convention the measurement rule relies on.
    pub fn midpoint(self, other: Self) -> Self {
        Self {
            theta: 0.5 * (self.theta + other.theta),
        }
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Surface points and hemispheres
// ─────────────────────────────────────────────────────────────────────────────

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SurfacePoint {
    /// Point from Cartesian components.
    ///
    /// # Panics
    /// Panics if the components do not lie on the unit sphere to `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        let norm = (x * x + y * y + z * z).sqrt();
        assert!(
            (norm - 1.0).abs() <= 1e-12,
            "surface point must have unit norm, got {norm}"
        );
        Self { x, y, z }
    }

    /// The in-plane point at the tip of an axis: `(sin theta, 0, cos theta)`.
    pub fn from_axis(a: Axis) -> Self {
        let [x, y, z] = a.unit_vector();
        Self { x, y, z }
    }

    /// Cartesian components `[x, y, z]`.
    pub fn coords(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Dot product with another surface point.
    pub fn dot(self, other: SurfacePoint) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Dot product with an axis direction (the axis has no y-component).
    pub fn dot_axis(self, a: Axis) -> f64 {
        let [ux, _, uz] = a.unit_vector();
        self.x * ux + self.z * uz
    }

    /// The diametrically opposite point.
    pub fn antipodal_point(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// A closed hemisphere of the unit sphere, identified by its center axis.
///
/// Membership is `r . center >= 0`, so points on the boundary great circle
/// belong to the hemisphere (and to its antipodal partner): ties resolve
/// toward the positive side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hemisphere {
    center: Axis,
}

impl Hemisphere {
    /// The hemisphere centered on `center`.
    pub fn positive(center: Axis) -> Self {
        Self { center }
    }

    /// Center axis.
    pub fn center(self) -> Axis {
        self.center
    }

    /// The opposite hemisphere, centered on the antipode.
    pub fn antipodal(self) -> Self {
        Self {
            center: self.center.antipode(),
        }
    }

    /// Closed membership test: `r . center >= 0`.
    pub fn contains(self, p: SurfacePoint) -> bool {
        p.dot_axis(self.center) >= 0.0
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Uniform sphere sampling
// ─────────────────────────────────────────────────────────────────────────────

/// Draw a point uniformly distributed on the unit sphere.
///
/// Uses the area-preserving parametrisation: the z-coordinate uniform in
/// `[-1, 1]` and the azimuth uniform in `[0, 2*pi)`. Consumes exactly two
/// `f64` draws from `rng`.
pub fn uniform_sample<R: Rng + ?Sized>(rng: &mut R) -> SurfacePoint {
    let z = 2.0 * rng.gen::<f64>() - 1.0;
    let phi = 2.0 * PI * rng.gen::<f64>();
    let s = (1.0 - z * z).max(0.0).sqrt();
    SurfacePoint {
        x: s * phi.cos(),
        y: s * phi.sin(),
        z,
    }
}

// ─────────────────────────────────────────────────────────────────────────────
// Hemisphere quadrature
// ─────────────────────────────────────────────────────────────────────────────

/// Surface-integral quadrature rule over one hemisphere.
///
/// Nodes are Gauss-Legendre in the cosine of the polar angle measured from
/// the hemisphere center (over `[0, 1]`) crossed with a uniform azimuth grid,
/// rotated so the polar axis coincides with the hemisphere center. Weights
/// sum to the hemisphere area `2*pi`; integrands polynomial in the cos-polar
/// coordinate up to degree `2*n_polar - 1` and trigonometric in azimuth up to
/// order `n_azimuth - 1` are integrated exactly (up to rounding).
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    nodes: Vec<SurfacePoint>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True if the grid has no nodes (never the case for constructed grids).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sum of all weights; equals the hemisphere area `2*pi` up to rounding.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Approximate the surface integral of `f` over the hemisphere.
    pub fn integrate<F: Fn(SurfacePoint) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }
}

/// Build a quadrature grid over hemisphere `h` with `n_polar` Gauss-Legendre
/// nodes in the cos-polar direction and `n_azimuth` uniform azimuth nodes.
///
/// # Errors
/// Returns [`Error::GridTooSmall`] unless both sizes are at least 2.
pub fn hemisphere_grid(h: Hemisphere, n_polar: usize, n_azimuth: usize) -> Result<QuadratureGrid> {
    if n_polar < 2 || n_azimuth < 2 {
        return Err(Error::GridTooSmall { n_polar, n_azimuth });
    }

    // Orthonormal frame with e3 along the hemisphere center; e1 is the
    // in-plane tangent (the theta-derivative of the center direction).
    let c = h.center().unit_vector();
    let e3 = c;
    let e1 = [c[2], 0.0, -c[0]];
    let e2 = [0.0, 1.0, 0.0];

    let azimuth_weight = 2.0 * PI / n_azimuth as f64;
    let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(n_polar * n_azimuth);

    for (x, w) in gauss_legendre(n_polar) {
        // Map the node from [-1, 1] to the cos-polar interval [0, 1].
        let t = 0.5 * (x + 1.0);
        let wt = 0.5 * w;
        let s = (1.0 - t * t).max(0.0).sqrt();
        for j in 0..n_azimuth {
            let phi = azimuth_weight * j as f64;
            let (sin_phi, cos_phi) = phi.sin_cos();
            let u = s * cos_phi;
            let v = s * sin_phi;
            nodes.push(SurfacePoint {
                x: u * e1[0] + v * e2[0] + t * e3[0],
                y: u * e1[1] + v * e2[1] + t * e3[1],
                z: u * e1[2] + v * e2[2] + t * e3[2],
            });
            weights.push(wt * azimuth_weight);
        }
    }

    Ok(QuadratureGrid { nodes, weights })
}

/// Legendre polynomial `P_n` and its derivative at `x`, by the three-term
/// recurrence (valid for `n >= 1` and `|x| < 1`).
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, found by Newton iteration
/// on the roots of `P_n` from the standard cosine initial guesses.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule
}
