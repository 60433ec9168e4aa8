//! Designs on the sphere and their information matrices.
//!
//! A [`SphereDesign`] is a finitely supported probability measure on
//! `[0, π] × (−π, π]`. The optimal constructions are products of a polar
//! factor ([`polar_from_rule`]) and a uniform azimuthal factor
//! ([`azimuthal_design`]); [`grid_design`] and [`equal_height_design`] are
//! the common sampling schemes they are compared against.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::harmonics::{basis_len, normalize_azimuth, LegendreTable};
use crate::linalg::{distance_to_identity, SymEigen};
use crate::quadrature::QuadratureRule;
use crate::{Error, Result};

/// Points with `θ` this close to a pole are treated as the pole.
pub const POLE_EPSILON: f64 = 1e-12;

/// Two support points closer than this in both coordinates are the same point.
pub const POINT_TOLERANCE: f64 = 1e-10;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Weighted support points on a line: a polar factor (angles in `[0, π]`) or
/// an azimuthal factor (angles in `(−π, π]`).
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalDesign {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl MarginalDesign {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::SizeMismatch {
                expected: points.len(),
                got: weights.len(),
            });
        }
        check_weights(&weights)?;
        for (i, a) in points.iter().enumerate() {
            if points[..i].iter().any(|b| (a - b).abs() < POINT_TOLERANCE) {
                return Err(Error::InvalidDesign(format!("repeated marginal point {a}")));
            }
        }
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights
        .iter()
        .any(|w| w.is_nan() || *w <= 0.0 || !w.is_finite())
    {
        return Err(Error::InvalidDesign("weights must be positive".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::InvalidDesign(format!(
            "weights sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// One support point of a design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

impl DesignPoint {
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (s, c) = self.theta.sin_cos();
        [s * self.phi.cos(), s * self.phi.sin(), c]
    }

    fn is_north(&self) -> bool {
        self.theta < POLE_EPSILON
    }

    fn is_south(&self) -> bool {
        self.theta > PI - POLE_EPSILON
    }
}

/// Finitely supported probability measure on `[0, π] × (−π, π]`.
///
/// Construction validates the angle ranges and the weights. Repeated
/// sphere points are allowed (a product with a polar node repeats the pole
/// `t` times); [`merge_poles`] collapses those.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereDesign {
    points: Vec<DesignPoint>,
}

impl SphereDesign {
    pub fn new(points: Vec<DesignPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDesign("empty design".into()));
        }
        let mut normalized = Vec::with_capacity(points.len());
        for p in points {
            if !p.theta.is_finite() || !p.phi.is_finite() {
                return Err(Error::InvalidDesign("non-finite coordinate".into()));
            }
            if !(-POLE_EPSILON..=PI + POLE_EPSILON).contains(&p.theta) {
                return Err(Error::InvalidDesign(format!(
                    "polar angle {} outside [0, π]",
                    p.theta
                )));
            }
            normalized.push(DesignPoint {
                theta: p.theta.clamp(0.0, PI),
                phi: normalize_azimuth(p.phi),
                weight: p.weight,
            });
        }
        let weights: Vec<f64> = normalized.iter().map(|p| p.weight).collect();
        check_weights(&weights)?;
        Ok(Self { points: normalized })
    }

    /// Uniform weights over the given `(θ, φ)` pairs.
    pub fn uniform(angles: &[(f64, f64)]) -> Result<Self> {
        let w = 1.0 / angles.len() as f64;
        Self::new(
            angles
                .iter()
                .map(|&(theta, phi)| DesignPoint {
                    theta,
                    phi,
                    weight: w,
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[DesignPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when no two support points coincide on the sphere (poles
    /// compared without regard to azimuth).
    pub fn is_distinct(&self) -> bool {
        let canon: Vec<(f64, f64)> = self
            .points
            .iter()
            .map(|p| {
                if p.is_north() {
                    (0.0, 0.0)
                } else if p.is_south() {
                    (PI, 0.0)
                } else {
                    (p.theta, p.phi)
                }
            })
            .collect();
        for (i, a) in canon.iter().enumerate() {
            for b in &canon[..i] {
                let dphi = (a.1 - b.1).abs();
                let dphi = dphi.min(2.0 * PI - dphi);
                if (a.0 - b.0).abs() < POINT_TOLERANCE && dphi < POINT_TOLERANCE {
                    return false;
                }
            }
        }
        true
    }

    /// Shift every azimuth by `delta` (wrapping into `(−π, π]`).
    pub fn rotate_azimuth(&self, delta: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| DesignPoint {
                    phi: normalize_azimuth(p.phi + delta),
                    ..*p
                })
                .collect(),
        }
    }
}

/// Polar factor `θ_i = arccos x_i` with the rule's weights. Because `arccos`
/// is decreasing, the angles come out in decreasing order.
pub fn polar_from_rule(rule: &QuadratureRule) -> MarginalDesign {
    let points = rule
        .nodes()
        .iter()
        .map(|x| x.clamp(-1.0, 1.0).acos())
        .collect();
    MarginalDesign {
        points,
        weights: rule.weights().to_vec(),
    }
}

/// `t` equally spaced azimuths `φ_j = α + 2πj/t`, `j = 1..t`, each with weight `1/t`.
///
/// The phase must lie in `[−(t+1)π/t, −π]` (within `1e−12`); every
/// admissible phase yields points inside `(−π, π]`.
pub fn azimuthal_design(alpha: f64, t: usize) -> Result<MarginalDesign> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "azimuthal design needs t >= 1".into(),
        ));
    }
    let tf = t as f64;
    let lower = -(tf + 1.0) * PI / tf;
    if !alpha.is_finite() || alpha < lower - 1e-12 || alpha > -PI + 1e-12 {
        return Err(Error::PhaseOutOfRange { alpha, t });
    }
    let points = (1..=t)
        .map(|j| normalize_azimuth(alpha + 2.0 * PI * j as f64 / tf))
        .collect();
    Ok(MarginalDesign {
        points,
        weights: vec![1.0 / tf; t],
    })
}

/// Product measure `μ ⊗ ν`: every pair `(θ_i, φ_j)` with weight `w_i v_j`.
pub fn product_design(mu: &MarginalDesign, nu: &MarginalDesign) -> SphereDesign {
    let mut points = Vec::with_capacity(mu.len() * nu.len());
    for (&theta, &wt) in mu.points.iter().zip(&mu.weights) {
        for (&phi, &wp) in nu.points.iter().zip(&nu.weights) {
            points.push(DesignPoint {
                theta,
                phi,
                weight: wt * wp,
            });
        }
    }
    SphereDesign { points }
}

/// Collapse all points at the north pole into `(0, 0)` and all at the south
/// pole into `(π, 0)`, summing their weights. The information matrix is
/// unchanged because every harmonic with `m ≠ 0` vanishes at the poles.
pub fn merge_poles(xi: &SphereDesign) -> SphereDesign {
    let mut out: Vec<DesignPoint> = Vec::with_capacity(xi.len());
    let mut north: Option<usize> = None;
    let mut south: Option<usize> = None;
    for p in &xi.points {
        let (slot, theta) = if p.is_north() {
            (&mut north, 0.0)
        } else if p.is_south() {
            (&mut south, PI)
        } else {
            out.push(*p);
            continue;
        };
        match slot {
            Some(i) => out[*i].weight += p.weight,
            None => {
                *slot = Some(out.len());
                out.push(DesignPoint {
                    theta,
                    phi: 0.0,
                    weight: p.weight,
                });
            }
        }
    }
    SphereDesign { points: out }
}

/// Uniform grid: `θ_i = iπ/(n1+1)`, `φ_j = 2jπ/n2 − π`, weights `1/(n1 n2)`.
pub fn grid_design(n1: usize, n2: usize) -> Result<SphereDesign> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument("grid needs n1, n2 >= 1".into()));
    }
    let thetas: Vec<f64> = (1..=n1).map(|i| i as f64 * PI / (n1 + 1) as f64).collect();
    uniform_product(&thetas, n2)
}

/// Circles at equally spaced heights: `θ_i = arccos(1 − 2i/(n1+1))`, with
/// the azimuths of [`grid_design`].
pub fn equal_height_design(n1: usize, n2: usize) -> Result<SphereDesign> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument(
            "equal-height design needs n1, n2 >= 1".into(),
        ));
    }
    let thetas: Vec<f64> = (1..=n1)
        .map(|i| (1.0 - 2.0 * i as f64 / (n1 + 1) as f64).acos())
        .collect();
    uniform_product(&thetas, n2)
}

fn uniform_product(thetas: &[f64], n2: usize) -> Result<SphereDesign> {
    let w = 1.0 / (thetas.len() * n2) as f64;
    let phis = azimuthal_design(-PI, n2)?;
    let mut points = Vec::with_capacity(thetas.len() * n2);
    for &theta in thetas {
        for &phi in phis.points() {
            points.push(DesignPoint {
                theta,
                phi,
                weight: w,
            });
        }
    }
    SphereDesign::new(points)
}

/// Exact design with one observation per point: node `i` of an equal-weight
/// rule (nodes in increasing order) carries `band_sizes[i]` equally spaced
/// azimuths `π(2j − t_i)/t_i`, and every point has weight `1/Σ t_i`.
pub fn banded_design(rule: &QuadratureRule, band_sizes: &[usize]) -> Result<SphereDesign> {
    if !rule.has_equal_weights() {
        return Err(Error::InvalidArgument(
            "banded designs need an equal-weight rule".into(),
        ));
    }
    if band_sizes.len() != rule.len() {
        return Err(Error::SizeMismatch {
            expected: rule.len(),
            got: band_sizes.len(),
        });
    }
    if band_sizes.contains(&0) {
        return Err(Error::InvalidArgument("band sizes must be >= 1".into()));
    }
    let total: usize = band_sizes.iter().sum();
    let w = 1.0 / total as f64;
    let mut points = Vec::with_capacity(total);
    for (&x, &t) in rule.nodes().iter().zip(band_sizes) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for phi in azimuthal_design(-PI, t)?.points() {
            points.push(DesignPoint {
                theta,
                phi: *phi,
                weight: w,
            });
        }
    }
    SphereDesign::new(points)
}

/// Information matrix `M(ξ) = Σ_k w_k f_d(θ_k, φ_k) f_d(θ_k, φ_k)ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationMatrix {
    degree: usize,
    matrix: DMatrix<f64>,
}

impl InformationMatrix {
    /// Wrap an arbitrary symmetric matrix of size `(d+1)²`.
    pub fn from_matrix(degree: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let n = basis_len(degree);
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: matrix.nrows(),
            });
        }
        Ok(Self { degree, matrix })
    }

    pub fn identity(degree: usize) -> Self {
        let n = basis_len(degree);
        Self {
            degree,
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn eigen(&self) -> SymEigen {
        SymEigen::new(&self.matrix)
    }

    /// `‖M − I‖_∞` entrywise.
    pub fn distance_to_identity(&self) -> f64 {
        distance_to_identity(&self.matrix)
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).abs().max()
    }
}

pub fn information_matrix(xi: &SphereDesign, d: usize) -> InformationMatrix {
    let n = basis_len(d);
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut f = DVector::<f64>::zeros(n);
    for p in &xi.points {
        LegendreTable::new(d, p.theta.cos()).fill_vector(p.phi, f.as_mut_slice());
        m.syger(p.weight, &f, &f, 1.0);
    }
    m.fill_upper_triangle_with_lower_triangle();
    InformationMatrix {
        degree: d,
        matrix: m,
    }
}
