//! Grid evaluation of the Φ_p equivalence inequality.
//!
//! With `C = (Kᵀ M⁻ K)⁻¹`, a design is Φ_p-optimal iff
//!
//! ```text
//! f(θ,φ)ᵀ M⁻ K C^{p+1} Kᵀ M⁻ f(θ,φ) ≤ tr C^p    for all (θ, φ)
//! ```
//!
//! At `M = I` the left side is the sum of squares of the selected harmonics
//! and the bound is `s`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{check_order, reduced_information, LevelSelector};
use crate::design::{information_matrix, SphereDesign};
use crate::harmonics::{basis_len, LegendreTable, SphericalAngle};
use crate::linalg::{pseudo_inverse, SymEigen};
use crate::{Error, Result};

/// Allowed excess of the left side over the bound.
pub const EQUIVALENCE_SLACK: f64 = 1e-8;

/// Number of polar and azimuthal grid lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridResolution {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridResolution {
    fn default() -> Self {
        Self {
            n_theta: 200,
            n_phi: 400,
        }
    }
}

impl GridResolution {
    /// `θ_i = iπ/(n_θ − 1)`, both poles included.
    pub fn theta(&self, i: usize) -> f64 {
        if self.n_theta == 1 {
            0.0
        } else {
            i as f64 * std::f64::consts::PI / (self.n_theta - 1) as f64
        }
    }

    /// `φ_j = −π + 2π(j + 1)/n_φ`, covering `(−π, π]`.
    pub fn phi(&self, j: usize) -> f64 {
        -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (j + 1) as f64 / self.n_phi as f64
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub holds: bool,
    pub max_lhs: f64,
    pub bound: f64,
    pub argmax: SphericalAngle,
}

/// Evaluate the equivalence function of `Φ_p` on a grid. `p = −∞` is not
/// supported since its equivalence theorem involves a choice of subgradient.
pub fn equivalence_check(
    xi: &SphereDesign,
    d: usize,
    sel: &LevelSelector,
    p: f64,
    grid: GridResolution,
) -> Result<EquivalenceReport> {
    check_order(p)?;
    if p == f64::NEG_INFINITY {
        return Err(Error::InvalidArgument(
            "equivalence check needs a finite order p".into(),
        ));
    }
    if grid.n_theta == 0 || grid.n_phi == 0 {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    }
    let m = information_matrix(xi, d);
    let c = reduced_information(&m, sel)?;
    let eig = SymEigen::new(&c);
    let bound: f64 = eig.values.iter().map(|l| l.powf(p)).sum();
    let cp1 = eig.reconstruct(|l| l.powf(p + 1.0));
    let k = sel.matrix();
    let a = pseudo_inverse(m.matrix()) * &k;
    // f ↦ ‖L ᵀ f‖² with Lᵀ L-factor of A C^{p+1} Aᵀ; C^{p+1} is SPD so use its square root.
    let root = SymEigen::new(&cp1).reconstruct(f64::sqrt);
    let w: DMatrix<f64> = (a * root).transpose();

    let dim = basis_len(d);
    let rows: Vec<(f64, usize)> = (0..grid.n_theta)
        .into_par_iter()
        .map(|i| {
            let table = LegendreTable::new(d, grid.theta(i).cos());
            let mut f = vec![0.0; dim];
            let mut best = (f64::NEG_INFINITY, 0);
            for j in 0..grid.n_phi {
                table.fill_vector(grid.phi(j), &mut f);
                let v = &w * DVector::from_column_slice(&f);
                let lhs = v.norm_squared();
                if lhs > best.0 {
                    best = (lhs, j);
                }
            }
            best
        })
        .collect();

    let (mut max_lhs, mut arg) = (f64::NEG_INFINITY, (0, 0));
    for (i, &(lhs, j)) in rows.iter().enumerate() {
        if lhs > max_lhs {
            max_lhs = lhs;
            arg = (i, j);
        }
    }
    Ok(EquivalenceReport {
        holds: max_lhs <= bound + EQUIVALENCE_SLACK,
        max_lhs,
        bound,
        argmax: SphericalAngle::new(grid.theta(arg.0), grid.phi(arg.1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{azimuthal_design, equal_height_design, polar_from_rule, product_design};
    use crate::quadrature::gauss_rule;

    fn optimal(d: usize) -> SphereDesign {
        let mu = polar_from_rule(&gauss_rule(d + 1).unwrap());
        let nu = azimuthal_design(-std::f64::consts::PI, 2 * d + 1).unwrap();
        product_design(&mu, &nu)
    }

    #[test]
    fn grid_layout() {
        let g = GridResolution::default();
        assert_eq!(g.theta(0), 0.0);
        assert!((g.theta(199) - std::f64::consts::PI).abs() < 1e-15);
        assert!((g.phi(399) - std::f64::consts::PI).abs() < 1e-15);
        assert!(g.phi(0) > -std::f64::consts::PI);
    }

    #[test]
    fn optimal_design_attains_bound() {
        let grid = GridResolution {
            n_theta: 41,
            n_phi: 80,
        };
        for sel in LevelSelector::all_subsets(2) {
            let s = sel.size() as f64;
            let r = equivalence_check(&optimal(2), 2, &sel, -1.0, grid).unwrap();
            assert!(r.holds);
            assert!((r.bound - s).abs() < 1e-9);
            assert!((r.max_lhs - s).abs() < 1e-9);
        }
        for p in [0.0, 0.5] {
            let r = equivalence_check(&optimal(1), 1, &LevelSelector::full(1), p, grid).unwrap();
            assert!((r.max_lhs - 4.0).abs() < 1e-9 && (r.bound - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn equal_height_d1_fails() {
        let xi = equal_height_design(3, 7).unwrap();
        let r = equivalence_check(
            &xi,
            1,
            &LevelSelector::full(1),
            -1.0,
            GridResolution::default(),
        )
        .unwrap();
        assert!(!r.holds);
        assert!(r.max_lhs > r.bound + 0.1);
    }

    #[test]
    fn minus_infinity_rejected() {
        let r = equivalence_check(
            &optimal(1),
            1,
            &LevelSelector::full(1),
            f64::NEG_INFINITY,
            GridResolution::default(),
        );
        assert!(r.is_err());
    }
}
