//! Real orthonormal spherical harmonics.
//!
//! `Y_ℓ^m(θ, φ) = γ_{ℓ|m|} P_ℓ^{|m|}(cos θ) ψ_m(φ)` with
//! `γ_{ℓm} = √((2ℓ+1)(ℓ−m)!/(ℓ+m)!)`, `ψ_0 = 1`, `ψ_m = √2 cos(mφ)` for
//! `m > 0` and `ψ_m = √2 sin(|m|φ)` for `m < 0`. With this scaling the basis
//! is orthonormal under the uniform probability measure on the sphere, and
//! `Σ_m (Y_ℓ^m)² = 2ℓ + 1` at every point.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A direction on the unit sphere: polar angle `θ ∈ [0, π]`, azimuth `φ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalAngle {
    theta: f64,
    phi: f64,
}

impl SphericalAngle {
    /// Validates `θ` (clamping within `1e−12` of the ends) and wraps `φ` into `(−π, π]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite angle ({theta}, {phi})"
            )));
        }
        if !(-1e-12..=PI + 1e-12).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "polar angle {theta} outside [0, π]"
            )));
        }
        Ok(Self {
            theta: theta.clamp(0.0, PI),
            phi: normalize_azimuth(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit-sphere Cartesian coordinates `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (s, c) = self.theta.sin_cos();
        [s * self.phi.cos(), s * self.phi.sin(), c]
    }
}

/// Wrap an azimuth into `(−π, π]`.
pub fn normalize_azimuth(phi: f64) -> f64 {
    let mut p = phi;
    while p > PI {
        p -= 2.0 * PI;
    }
    while p <= -PI {
        p += 2.0 * PI;
    }
    p
}

/// Level `ℓ` and order `m` of a harmonic, `|m| ≤ ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    ell: usize,
    m: i32,
}

impl HarmonicIndex {
    pub fn new(ell: usize, m: i32) -> Result<Self> {
        if m.unsigned_abs() as usize > ell {
            return Err(Error::InvalidArgument(format!(
                "harmonic order {m} exceeds level {ell}"
            )));
        }
        Ok(Self { ell, m })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Position in the regression vector: `ℓ² + ℓ + m`.
    pub fn flat(&self) -> usize {
        ((self.ell * self.ell + self.ell) as i64 + self.m as i64) as usize
    }

    /// Inverse of [`HarmonicIndex::flat`].
    pub fn from_flat(i: usize) -> Self {
        let ell = (i as f64).sqrt() as usize;
        let ell = if (ell + 1) * (ell + 1) <= i {
            ell + 1
        } else {
            ell
        };
        let m = i as i64 - (ell * ell + ell) as i64;
        Self { ell, m: m as i32 }
    }
}

/// Number of basis functions up to degree `d`: `(d+1)²`.
pub fn basis_len(d: usize) -> usize {
    (d + 1) * (d + 1)
}

/// Normalized associated Legendre values `γ_{ℓm} P_ℓ^m(x)` for `0 ≤ m ≤ ℓ ≤ d`
/// at one abscissa, stored row by row.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    d: usize,
    values: Vec<f64>,
}

impl LegendreTable {
    /// `x` must already lie in `[−1, 1]`.
    pub fn new(d: usize, x: f64) -> Self {
        let mut values = vec![0.0; (d + 1) * (d + 2) / 2];
        let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
        let mut diag = 1.0;
        for m in 0..=d {
            if m > 0 {
                let mf = m as f64;
                diag *= -s * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
            }
            values[idx(m, m)] = diag;
            if m == d {
                break;
            }
            values[idx(m + 1, m)] = x * ((2 * m + 3) as f64).sqrt() * diag;
            for l in (m + 2)..=d {
                let (lf, mf) = (l as f64, m as f64);
                let a = ((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / ((lf - mf) * (lf + mf))).sqrt();
                let b = ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0)
                    / ((lf - mf) * (lf + mf) * (2.0 * lf - 3.0)))
                    .sqrt();
                values[idx(l, m)] = a * x * values[idx(l - 1, m)] - b * values[idx(l - 2, m)];
            }
        }
        Self { d, values }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `γ_{ℓm} P_ℓ^m(x)` for `m ≤ ℓ ≤ d`.
    pub fn get(&self, ell: usize, m: usize) -> f64 {
        self.values[ell * (ell + 1) / 2 + m]
    }

    /// Fill `out` (length `(d+1)²`) with the regression vector at azimuth `phi`.
    pub fn fill_vector(&self, phi: f64, out: &mut [f64]) {
        let d = self.d;
        debug_assert_eq!(out.len(), basis_len(d));
        let sqrt2 = std::f64::consts::SQRT_2;
        let trig: Vec<(f64, f64)> = (0..=d).map(|m| (m as f64 * phi).sin_cos()).collect();
        for l in 0..=d {
            let center = l * l + l;
            out[center] = self.get(l, 0);
            for m in 1..=l {
                let n = sqrt2 * self.get(l, m);
                let (s, c) = trig[m];
                out[center + m] = n * c;
                out[center - m] = n * s;
            }
        }
    }
}

/// Evaluate a single real harmonic `Y_ℓ^m(θ, φ)`.
pub fn ylm_eval(idx: HarmonicIndex, angle: SphericalAngle) -> f64 {
    let x = angle.theta.cos();
    let table = LegendreTable::new(idx.ell, x);
    let am = idx.m.unsigned_abs() as usize;
    let n = table.get(idx.ell, am);
    match idx.m {
        0 => n,
        m if m > 0 => std::f64::consts::SQRT_2 * n * (m as f64 * angle.phi).cos(),
        m => std::f64::consts::SQRT_2 * n * ((-m) as f64 * angle.phi).sin(),
    }
}

/// Regression vector `f_d(θ, φ)`, ordered `ℓ = 0..d`, and within each
/// level `m = −ℓ, …, ℓ`.
pub fn regression_vector(d: usize, angle: SphericalAngle) -> Vec<f64> {
    let mut out = vec![0.0; basis_len(d)];
    LegendreTable::new(d, angle.theta.cos()).fill_vector(angle.phi, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::assoc_legendre_eval;
    use approx::assert_abs_diff_eq;

    fn gamma(l: usize, m: usize) -> f64 {
        let ratio: f64 = ((l - m + 1)..=(l + m)).map(|k| 1.0 / k as f64).product();
        ((2 * l + 1) as f64 * ratio).sqrt()
    }

    #[test]
    fn flat_index_round_trip() {
        for i in 0..200 {
            let h = HarmonicIndex::from_flat(i);
            assert!(h.m.unsigned_abs() as usize <= h.ell);
            assert_eq!(h.flat(), i);
        }
        assert_eq!(HarmonicIndex::new(1, -1).unwrap().flat(), 1);
        assert!(HarmonicIndex::new(1, 2).is_err());
    }

    #[test]
    fn table_matches_direct_associated_legendre() {
        for &x in &[-1.0, -0.73, -0.1, 0.0, 0.42, 0.99, 1.0] {
            let t = LegendreTable::new(9, x);
            for l in 0..=9 {
                for m in 0..=l {
                    let direct = gamma(l, m) * assoc_legendre_eval(l, m, x).unwrap();
                    assert_abs_diff_eq!(
                        t.get(l, m),
                        direct,
                        epsilon = 1e-11 * (1.0 + direct.abs())
                    );
                }
            }
        }
    }

    #[test]
    fn closed_forms_at_low_degree() {
        let a = SphericalAngle::new(0.0, 1.3).unwrap();
        assert_eq!(ylm_eval(HarmonicIndex::new(0, 0).unwrap(), a), 1.0);
        assert_abs_diff_eq!(
            ylm_eval(HarmonicIndex::new(1, 0).unwrap(), a),
            3f64.sqrt(),
            epsilon = 1e-15
        );
        let eq = SphericalAngle::new(PI / 2.0, 0.0).unwrap();
        assert_abs_diff_eq!(
            ylm_eval(HarmonicIndex::new(1, 1).unwrap(), eq).abs(),
            3f64.sqrt(),
            epsilon = 1e-15
        );
        let v = regression_vector(1, SphericalAngle::new(PI / 2.0, PI / 2.0).unwrap());
        let expected = [1.0, 3f64.sqrt(), 0.0, 0.0];
        for (a, b) in v.iter().zip(expected) {
            assert_abs_diff_eq!(a.abs(), b, epsilon = 1e-15);
        }
    }

    #[test]
    fn poles_zero_every_nonzero_order() {
        for &theta in &[0.0, PI] {
            let v = regression_vector(7, SphericalAngle::new(theta, 0.8).unwrap());
            assert_eq!(v.len(), 64);
            for (i, &vi) in v.iter().enumerate() {
                let h = HarmonicIndex::from_flat(i);
                if h.m != 0 {
                    assert_eq!(vi, 0.0);
                } else {
                    let sign = if theta == PI && h.ell % 2 == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    assert_abs_diff_eq!(
                        vi,
                        sign * ((2 * h.ell + 1) as f64).sqrt(),
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn addition_theorem_pointwise() {
        for k in 0..=7usize {
            for i in 0..13 {
                let a = SphericalAngle::new(i as f64 * PI / 12.0, -2.0 + 0.37 * i as f64).unwrap();
                let v = regression_vector(k, a);
                let level: f64 = v[k * k..].iter().map(|y| y * y).sum();
                assert_abs_diff_eq!(level, (2 * k + 1) as f64, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn azimuth_normalization() {
        assert_abs_diff_eq!(normalize_azimuth(-PI), PI);
        assert_abs_diff_eq!(normalize_azimuth(3.0 * PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(normalize_azimuth(2.5 * PI), 0.5 * PI, epsilon = 1e-15);
        assert!(SphericalAngle::new(-0.1, 0.0).is_err());
        assert_eq!(SphericalAngle::new(PI + 1e-13, 0.0).unwrap().theta(), PI);
    }
}
