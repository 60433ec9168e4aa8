//! Small dense symmetric helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenvalues at or below this are treated as zero for rank decisions and
/// the spectral pseudo-inverse.
pub const EIGEN_ZERO: f64 = 1e-10;

/// Eigen-decomposition with eigenvalues sorted ascending; column `i` of
/// `vectors` belongs to `values[i]`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let sym = (m + m.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty matrix")
    }

    pub fn rank(&self) -> usize {
        self.values.iter().filter(|v| **v > EIGEN_ZERO).count()
    }

    /// `V diag(g(λ)) Vᵀ`, with `g` applied only to eigenvalues above
    /// [`EIGEN_ZERO`] and the rest mapped to zero.
    pub fn reconstruct(&self, g: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let n = self.vectors.nrows();
        let mut out = DMatrix::zeros(n, n);
        for (i, &lambda) in self.values.iter().enumerate() {
            if lambda <= EIGEN_ZERO {
                continue;
            }
            let v = self.vectors.column(i);
            out += g(lambda) * v * v.transpose();
        }
        out
    }
}

/// Spectral Moore–Penrose inverse of a symmetric positive semidefinite matrix.
pub fn pseudo_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    SymEigen::new(m).reconstruct(|l| 1.0 / l)
}

/// `max_{ij} |m_ij − δ_ij|`.
pub fn distance_to_identity(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sorted_eigenvalues() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0]);
        let e = SymEigen::new(&m);
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.values[2], 5.0, epsilon = 1e-12);
        let back = e.reconstruct(|l| l);
        assert!((back - m).abs().max() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_singular() {
        let v = nalgebra::DVector::from_vec(vec![1.0, 0.0, 3f64.sqrt(), 0.0]);
        let m = &v * v.transpose();
        let p = pseudo_inverse(&m);
        let mpm = &m * &p * &m;
        assert!((mpm - &m).abs().max() < 1e-12);
        assert_eq!(SymEigen::new(&m).rank(), 1);
    }
}
