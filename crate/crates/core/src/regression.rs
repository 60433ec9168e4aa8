//! Least-squares fits of spherical harmonic expansions and a Monte Carlo
//! check of the covariance law `Cov(ĉ) ≈ σ²/n · M⁻¹`.
//!
//! Noise is drawn from ChaCha8 streams: replication `k` uses the generator
//! seeded with `seed` on stream `k`, so results do not depend on scheduling.

use nalgebra::{ColPivQR, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{information_matrix, SphereDesign};
use crate::harmonics::{basis_len, regression_vector, HarmonicIndex, SphericalAngle};
use crate::linalg::pseudo_inverse;
use crate::{Error, Result};

/// Relative pivot threshold for rank decisions in [`fit`].
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Minimum number of Monte Carlo replications.
pub const MIN_REPLICATIONS: usize = 1000;

/// An observed radius in a given direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSample {
    pub angle: SphericalAngle,
    pub radius: f64,
}

impl RadiusSample {
    pub fn new(angle: SphericalAngle, radius: f64) -> Result<Self> {
        if !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "radius {radius} is not finite"
            )));
        }
        Ok(Self { angle, radius })
    }
}

/// Coefficients `c_ℓ^m` in regression-vector order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    d: usize,
    c: Vec<f64>,
}

/// One `(ℓ, m, value)` entry, the unit of the coefficient file format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub ell: usize,
    pub m: i32,
    pub value: f64,
}

impl CoefficientVector {
    pub fn new(d: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != basis_len(d) {
            return Err(Error::SizeMismatch {
                expected: basis_len(d),
                got: c.len(),
            });
        }
        Ok(Self { d, c })
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            c: vec![0.0; basis_len(d)],
        }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    pub fn get(&self, ell: usize, m: i32) -> Option<f64> {
        let idx = HarmonicIndex::new(ell, m).ok()?;
        self.c.get(idx.flat()).copied()
    }

    pub fn set(&mut self, ell: usize, m: i32, value: f64) -> Result<()> {
        let i = HarmonicIndex::new(ell, m)?.flat();
        let len = self.c.len();
        *self.c.get_mut(i).ok_or(Error::SizeMismatch {
            expected: len,
            got: i + 1,
        })? = value;
        Ok(())
    }

    pub fn entries(&self) -> Vec<CoefficientEntry> {
        self.c
            .iter()
            .enumerate()
            .map(|(i, &value)| {
                let idx = HarmonicIndex::from_flat(i);
                CoefficientEntry {
                    ell: idx.ell(),
                    m: idx.m(),
                    value,
                }
            })
            .collect()
    }

    /// Rebuild from entries; the degree is the largest `ℓ` present and
    /// missing coefficients are zero.
    pub fn from_entries(entries: &[CoefficientEntry]) -> Result<Self> {
        let d = entries.iter().map(|e| e.ell).max().unwrap_or(0);
        let mut out = Self::zeros(d);
        for e in entries {
            out.set(e.ell, e.m, e.value)?;
        }
        Ok(out)
    }
}

/// `n × (d+1)²` matrix whose rows are regression vectors.
pub fn design_matrix(angles: &[SphericalAngle], d: usize) -> DMatrix<f64> {
    let p = basis_len(d);
    let mut b = DMatrix::zeros(angles.len(), p);
    for (i, a) in angles.iter().enumerate() {
        let f = regression_vector(d, *a);
        for (j, v) in f.into_iter().enumerate() {
            b[(i, j)] = v;
        }
    }
    b
}

/// Column-pivoted QR of a design matrix, reusable across right-hand sides.
struct LeastSquares {
    qr: ColPivQR<f64, nalgebra::Dyn, nalgebra::Dyn>,
    r: DMatrix<f64>,
    p: usize,
}

impl LeastSquares {
    fn new(b: DMatrix<f64>) -> Result<Self> {
        let (n, p) = b.shape();
        let scale = b.norm();
        let qr = b.col_piv_qr();
        let r = qr.r();
        let rank = (0..n.min(p))
            .filter(|&i| r[(i, i)].abs() > RANK_TOLERANCE * scale)
            .count();
        if rank < p {
            return Err(Error::RankDeficient {
                rank,
                deficiency: p - rank,
            });
        }
        let r = r.view((0, 0), (p, p)).into_owned();
        Ok(Self { qr, r, p })
    }

    fn solve(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut qty = y.clone();
        self.qr.q_tr_mul(&mut qty);
        let mut x = qty.rows(0, self.p).into_owned();
        self.r.solve_upper_triangular_mut(&mut x);
        self.qr.p().inv_permute_rows(&mut x);
        x
    }
}

/// Least-squares coefficients from sampled radii.
pub fn fit(samples: &[RadiusSample], d: usize) -> Result<CoefficientVector> {
    let angles: Vec<SphericalAngle> = samples.iter().map(|s| s.angle).collect();
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.radius));
    let ls = LeastSquares::new(design_matrix(&angles, d))?;
    CoefficientVector::new(d, ls.solve(&y).iter().copied().collect())
}

/// `Σ c_ℓ^m Y_ℓ^m(θ, φ)`.
pub fn synthesize_radius(c: &CoefficientVector, angle: SphericalAngle) -> f64 {
    regression_vector(c.degree(), angle)
        .iter()
        .zip(c.as_slice())
        .map(|(f, c)| f * c)
        .sum()
}

/// Integer counts summing to `n`, proportional to `weights`: floor of each
/// quota, then the leftover units go to the largest remainders (lowest
/// index first on ties).
pub fn apportion(weights: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| w / total * n as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// `σ²/n · M⁻` for the design.
pub fn theoretical_covariance(xi: &SphereDesign, d: usize, sigma: f64, n: usize) -> DMatrix<f64> {
    pseudo_inverse(information_matrix(xi, d).matrix()) * (sigma * sigma / n as f64)
}

/// Empirical covariance of `ĉ` over `reps` simulated data sets.
///
/// Each support point is observed `apportion(weights, n)` times; the true
/// surface is the unit sphere (`c = e_1`) plus `N(0, σ²)` noise.
pub fn monte_carlo_covariance(
    xi: &SphereDesign,
    d: usize,
    sigma: f64,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<DMatrix<f64>> {
    if reps < MIN_REPLICATIONS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_REPLICATIONS} replications, got {reps}"
        )));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise sd {sigma} must be >= 0"
        )));
    }
    let weights: Vec<f64> = xi.points().iter().map(|p| p.weight).collect();
    let counts = apportion(&weights, n);
    let mut angles = Vec::with_capacity(n);
    for (p, &k) in xi.points().iter().zip(&counts) {
        let a = SphericalAngle::new(p.theta, p.phi)?;
        angles.extend(std::iter::repeat_n(a, k));
    }
    let ls = LeastSquares::new(design_matrix(&angles, d))?;
    // c = e_1, so the noiseless response is 1 everywhere.
    let p = basis_len(d);

    let estimates: Vec<DVector<f64>> = (0..reps)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let y = DVector::from_fn(angles.len(), |_, _| {
                let e: f64 = StandardNormal.sample(&mut rng);
                1.0 + sigma * e
            });
            ls.solve(&y)
        })
        .collect();

    let mut mean = DVector::zeros(p);
    for e in &estimates {
        mean += e;
    }
    mean /= reps as f64;
    let mut cov = DMatrix::zeros(p, p);
    for e in &estimates {
        let dev = e - &mean;
        cov += &dev * dev.transpose();
    }
    Ok(cov / (reps - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{azimuthal_design, polar_from_rule, product_design};
    use crate::quadrature::gauss_rule;
    use std::f64::consts::PI;

    fn optimal(d: usize) -> SphereDesign {
        let mu = polar_from_rule(&gauss_rule(d + 1).unwrap());
        product_design(&mu, &azimuthal_design(-PI, 2 * d + 1).unwrap())
    }

    fn angles(xi: &SphereDesign) -> Vec<SphericalAngle> {
        xi.points()
            .iter()
            .map(|p| SphericalAngle::new(p.theta, p.phi).unwrap())
            .collect()
    }

    #[test]
    fn design_matrix_rows() {
        let a = SphericalAngle::new(0.0, 0.7).unwrap();
        let b = design_matrix(&[a], 2);
        assert_eq!(b.shape(), (1, 9));
        assert_eq!(b[(0, 0)], 1.0);
        for m in [-1, 1] {
            assert!(b[(0, HarmonicIndex::new(1, m).unwrap().flat())].abs() < 1e-15);
        }
        let mu = polar_from_rule(&crate::quadrature::equal_weight_rule(2).unwrap());
        let xi = product_design(&mu, &azimuthal_design(-PI, 5).unwrap());
        let b = design_matrix(&angles(&xi), 2);
        let m = b.transpose() * &b / xi.len() as f64;
        assert!((m - information_matrix(&xi, 2).matrix()).abs().max() < 1e-12);
    }

    #[test]
    fn constant_radius() {
        let samples: Vec<RadiusSample> = angles(&optimal(2))
            .into_iter()
            .map(|a| RadiusSample::new(a, 5.0).unwrap())
            .collect();
        let c = fit(&samples, 2).unwrap();
        assert!((c.get(0, 0).unwrap() - 5.0).abs() < 1e-12);
        assert!(c.as_slice()[1..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn round_trip() {
        let d = 3;
        let coeffs: Vec<f64> = (0..basis_len(d)).map(|i| (i as f64 * 0.37).sin()).collect();
        let c = CoefficientVector::new(d, coeffs).unwrap();
        let samples: Vec<RadiusSample> = angles(&optimal(d))
            .into_iter()
            .map(|a| RadiusSample::new(a, synthesize_radius(&c, a)).unwrap())
            .collect();
        let back = fit(&samples, d).unwrap();
        for (a, b) in back.as_slice().iter().zip(c.as_slice()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn synthesize_examples() {
        let mut c = CoefficientVector::zeros(1);
        c.set(0, 0, 1.0).unwrap();
        let a = SphericalAngle::new(1.1, -0.4).unwrap();
        assert!((synthesize_radius(&c, a) - 1.0).abs() < 1e-15);
        let mut c = CoefficientVector::zeros(1);
        c.set(1, 0, 0.8).unwrap();
        let north = SphericalAngle::new(0.0, 0.0).unwrap();
        assert!((synthesize_radius(&c, north) - 3f64.sqrt() * 0.8).abs() < 1e-14);
    }

    #[test]
    fn too_few_samples() {
        let samples: Vec<RadiusSample> = (0..5)
            .map(|i| {
                RadiusSample::new(SphericalAngle::new(0.3 * i as f64, 0.1).unwrap(), 1.0).unwrap()
            })
            .collect();
        match fit(&samples, 2) {
            Err(Error::RankDeficient { rank, deficiency }) => {
                assert_eq!(rank + deficiency, 9);
                assert!(rank <= 5);
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn apportionment() {
        assert_eq!(apportion(&[0.5, 0.5], 3), vec![2, 1]);
        assert_eq!(apportion(&[0.2, 0.3, 0.5], 10), vec![2, 3, 5]);
        assert_eq!(apportion(&[1.0, 1.0, 1.0], 4), vec![2, 1, 1]);
        assert_eq!(apportion(&[0.1, 0.45, 0.45], 7).iter().sum::<usize>(), 7);
    }

    #[test]
    fn coefficient_entries() {
        let c = CoefficientVector::new(1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let e = c.entries();
        assert_eq!(
            e[1],
            CoefficientEntry {
                ell: 1,
                m: -1,
                value: 2.0
            }
        );
        assert_eq!(CoefficientVector::from_entries(&e).unwrap(), c);
        assert!(CoefficientVector::new(1, vec![0.0; 3]).is_err());
    }

    #[test]
    fn zero_noise_zero_covariance() {
        let cov = monte_carlo_covariance(&optimal(1), 1, 0.0, 60, 1000, 7).unwrap();
        assert!(cov.abs().max() < 1e-20);
        assert!(monte_carlo_covariance(&optimal(1), 1, 1.0, 60, 999, 7).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = monte_carlo_covariance(&optimal(1), 1, 1.0, 60, 1000, 11).unwrap();
        let b = monte_carlo_covariance(&optimal(1), 1, 1.0, 60, 1000, 11).unwrap();
        assert_eq!(a, b);
    }
}
