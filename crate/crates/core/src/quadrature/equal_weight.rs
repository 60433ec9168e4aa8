//! Equal-weight (Chebyshev-type) rules of degree `2d`.
//!
//! Nodes are symmetric about the origin: `n = 2p` nodes `±y_k`, or
//! `n = 2p + 1` with an extra node at 0. Odd moments then vanish, and the
//! remaining conditions are
//!
//! ```text
//! (2/n) Σ_k y_k^{2j} = 1/(2j+1),   j = 1..d
//! ```
//!
//! For `d ≤ 4` the system is square. For `d ≥ 5` it is underdetermined
//! (`p > d`) and solutions form a family. The solver takes minimum-norm
//! Gauss–Newton steps with backtracking, so from a start near a reference
//! node set it lands on a nearby member of that family.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{verify_degree, QuadratureRule};
use crate::{Error, Result};

/// Node counts for `d = 1..=7`.
const SCHEDULE: [usize; 7] = [2, 4, 6, 9, 13, 17, 23];

/// Positive nodes of published equal-weight rules to three decimals, used as
/// the first starting point of the search. For `d ≥ 4` the rule also has a
/// node at 0.
pub const REFERENCE_EQUAL_WEIGHT_NODES: [&[f64]; 7] = [
    &[0.577],
    &[0.188, 0.795],
    &[0.267, 0.423, 0.866],
    &[0.168, 0.529, 0.601, 0.912],
    &[0.223, 0.247, 0.443, 0.671, 0.724, 0.939],
    &[0.008, 0.282, 0.358, 0.458, 0.566, 0.760, 0.778, 0.954],
    &[
        0.174, 0.177, 0.186, 0.328, 0.502, 0.533, 0.542, 0.712, 0.797, 0.852, 0.965,
    ],
];

const PERTURBED_STARTS: usize = 16;
const RANDOM_STARTS: usize = 256;
const MAX_ITERATIONS: usize = 200;
const ACCEPT_RESIDUAL: f64 = 1e-13;
const MIN_SEPARATION: f64 = 1e-6;

/// Number of nodes of the equal-weight rule for model degree `d` (1..=7).
pub fn equal_weight_schedule(d: usize) -> Result<usize> {
    SCHEDULE.get(d.wrapping_sub(1)).copied().ok_or_else(|| {
        Error::InvalidArgument(format!("equal-weight rules cover d = 1..=7, got {d}"))
    })
}

/// Equal-weight rule of degree `2d` with the tabulated node count.
///
/// Starts are tried in a fixed order: the reference nodes, then seeded
/// perturbations of them, then stratified random points. The first start
/// that converges to distinct nodes in `[0, 1]` and passes
/// `verify_degree(·, 2d)` wins.
pub fn equal_weight_rule(d: usize) -> Result<QuadratureRule> {
    let n = equal_weight_schedule(d)?;
    let center = n % 2 == 1;
    let pairs = n / 2;
    let reference = REFERENCE_EQUAL_WEIGHT_NODES[d - 1];
    debug_assert_eq!(reference.len(), pairs);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + d as u64);
    let mut starts: Vec<Vec<f64>> = vec![reference.to_vec()];
    for _ in 0..PERTURBED_STARTS {
        starts.push(
            reference
                .iter()
                .map(|y| (y + rng.random_range(-0.02..0.02)).clamp(0.001, 0.999))
                .collect(),
        );
    }
    for _ in 0..RANDOM_STARTS {
        let mut s: Vec<f64> = (0..pairs)
            .map(|k| (k as f64 + rng.random::<f64>()) / pairs as f64)
            .collect();
        s.sort_by(f64::total_cmp);
        starts.push(s);
    }

    let mut best = f64::INFINITY;
    for start in starts {
        let (y, residual) = solve(start, d, n);
        best = best.min(residual);
        if residual > ACCEPT_RESIDUAL {
            continue;
        }
        if let Some(rule) = assemble(&y, center, n, d) {
            return Ok(rule);
        }
    }
    Err(Error::SearchFailed { d, residual: best })
}

fn residuals(y: &[f64], d: usize, n: usize) -> DVector<f64> {
    DVector::from_iterator(
        d,
        (1..=d).map(|j| {
            let s: f64 = y.iter().map(|v| v.powi(2 * j as i32)).sum();
            2.0 / n as f64 * s - 1.0 / (2 * j + 1) as f64
        }),
    )
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped minimum-norm Gauss–Newton. Returns the final point and its max residual.
fn solve(mut y: Vec<f64>, d: usize, n: usize) -> (Vec<f64>, f64) {
    let p = y.len();
    let mut f = residuals(&y, d, n);
    for _ in 0..MAX_ITERATIONS {
        let norm = f.norm();
        if max_abs(&f) < 1e-16 {
            break;
        }
        let jac = DMatrix::from_fn(d, p, |j, k| {
            let e = 2 * (j + 1);
            2.0 / n as f64 * e as f64 * y[k].powi(e as i32 - 1)
        });
        let svd = jac.svd(true, true);
        let Ok(step) = svd.solve(&(-&f), 1e-14) else {
            break;
        };
        let mut lambda = 1.0;
        let mut improved = false;
        while lambda > 1e-6 {
            let trial: Vec<f64> = y
                .iter()
                .zip(step.iter())
                .map(|(a, s)| a + lambda * s)
                .collect();
            let ft = residuals(&trial, d, n);
            if ft.norm() < norm {
                y = trial;
                f = ft;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let r = max_abs(&f);
    (y, if r.is_finite() { r } else { f64::INFINITY })
}

fn assemble(y: &[f64], center: bool, n: usize, d: usize) -> Option<QuadratureRule> {
    let mut pos: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    pos.sort_by(f64::total_cmp);
    if pos.iter().any(|v| *v > 1.0) {
        return None;
    }
    let floor = if center {
        MIN_SEPARATION
    } else {
        MIN_SEPARATION / 2.0
    };
    if pos[0] < floor || pos.windows(2).any(|w| w[1] - w[0] < MIN_SEPARATION) {
        return None;
    }
    let mut nodes: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    if center {
        nodes.push(0.0);
    }
    nodes.extend(pos.iter().copied());
    let weights = vec![1.0 / n as f64; n];
    let rule = QuadratureRule::new(nodes, weights, 2 * d).ok()?;
    verify_degree(&rule, 2 * d).exact.then_some(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn schedule_matches_table() {
        let counts: Vec<usize> = (1..=7).map(|d| equal_weight_schedule(d).unwrap()).collect();
        assert_eq!(counts, vec![2, 4, 6, 9, 13, 17, 23]);
        assert!(equal_weight_schedule(0).is_err());
        assert!(equal_weight_schedule(8).is_err());
    }

    #[test]
    fn low_degree_rules() {
        let r = equal_weight_rule(1).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(r.nodes()[0], -s, epsilon = 1e-14);
        assert_abs_diff_eq!(r.nodes()[1], s, epsilon = 1e-14);
        let r = equal_weight_rule(2).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.has_equal_weights());
        assert!((r.nodes()[2] - 0.188).abs() < 5e-4);
        assert!((r.nodes()[3] - 0.795).abs() < 5e-4);
    }

    #[test]
    fn all_rules_exact_and_equal_weight() {
        for d in 1..=7 {
            let r = equal_weight_rule(d).unwrap();
            assert_eq!(r.len(), equal_weight_schedule(d).unwrap());
            assert_eq!(r.degree(), 2 * d);
            assert!(r.has_equal_weights());
            assert!(verify_degree(&r, 2 * d).max_residual < 1e-10);
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn out_of_range_degree() {
        assert!(equal_weight_rule(0).is_err());
        assert!(equal_weight_rule(9).is_err());
    }
}
