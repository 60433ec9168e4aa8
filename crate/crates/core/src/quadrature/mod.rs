//! Positive quadrature rules on `[−1, 1]` under the normalized measure `dx/2`.
//!
//! A rule `{x_i, w_i}` has degree `z` when `Σ w_i x_i^ℓ = ½∫x^ℓ dx` for
//! `ℓ = 0..z`, i.e. the even moments equal `1/(ℓ+1)` and the odd ones vanish.
//! Weights always sum to one, so a rule doubles as a probability measure on
//! the cosines of the polar angles.

mod equal_weight;

pub use equal_weight::{equal_weight_rule, equal_weight_schedule, REFERENCE_EQUAL_WEIGHT_NODES};

use serde::{Deserialize, Serialize};

use crate::orthopoly::{jacobi_roots, legendre_derivative, legendre_unchecked};
use crate::{Error, Result};

/// Tolerance on moment residuals for [`verify_degree`].
pub const MOMENT_TOLERANCE: f64 = 1e-10;

/// Nodes, positive weights summing to one, and a verified degree of exactness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRule", into = "RawRule")]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree: usize,
}

#[derive(Serialize, Deserialize)]
struct RawRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    degree: usize,
}

impl TryFrom<RawRule> for QuadratureRule {
    type Error = Error;

    fn try_from(raw: RawRule) -> Result<Self> {
        QuadratureRule::new(raw.nodes, raw.weights, raw.degree)
    }
}

impl From<QuadratureRule> for RawRule {
    fn from(rule: QuadratureRule) -> Self {
        RawRule {
            nodes: rule.nodes,
            weights: rule.weights,
            degree: rule.degree,
        }
    }
}

impl QuadratureRule {
    /// Checks every invariant: strictly increasing nodes in `[−1, 1]`,
    /// positive weights summing to one, and exactness to `degree`.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, degree: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidRule("empty node set".into()));
        }
        if nodes.len() != weights.len() {
            return Err(Error::SizeMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        if nodes.iter().any(|x| !x.is_finite() || x.abs() > 1.0) {
            return Err(Error::InvalidRule("nodes must lie in [-1, 1]".into()));
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidRule(
                "nodes must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|w| w.is_nan() || *w <= 0.0) {
            return Err(Error::InvalidRule("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidRule(format!("weights sum to {total}, not 1")));
        }
        let check = moment_check(&nodes, &weights, degree);
        if !check.exact {
            return Err(Error::InvalidRule(format!(
                "not exact to degree {degree}: max moment residual {:.3e}",
                check.max_residual
            )));
        }
        Ok(Self {
            nodes,
            weights,
            degree,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Declared degree of exactness.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i g(x_i)`, approximating `½∫ g`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * g(*x))
            .sum()
    }

    /// Whether all weights are identical (within `1e−14`).
    pub fn has_equal_weights(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().all(|w| (w - w0).abs() < 1e-14)
    }
}

/// Outcome of a moment check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeCheck {
    pub exact: bool,
    pub max_residual: f64,
}

/// `½∫_{−1}^{1} x^ℓ dx`.
pub fn normalized_moment(ell: usize) -> f64 {
    if ell % 2 == 1 {
        0.0
    } else {
        1.0 / (ell + 1) as f64
    }
}

/// Checks `|Σ w_i x_i^ℓ − ½∫x^ℓ| < 1e−10` for `ℓ = 0..=z`.
pub fn verify_degree(rule: &QuadratureRule, z: usize) -> DegreeCheck {
    moment_check(&rule.nodes, &rule.weights, z)
}

/// [`verify_degree`] on raw node/weight slices.
pub fn moment_check(nodes: &[f64], weights: &[f64], z: usize) -> DegreeCheck {
    let mut powers: Vec<f64> = vec![1.0; nodes.len()];
    let mut max_residual: f64 = 0.0;
    for ell in 0..=z {
        let sum: f64 = powers.iter().zip(weights).map(|(p, w)| p * w).sum();
        max_residual = max_residual.max((sum - normalized_moment(ell)).abs());
        for (p, x) in powers.iter_mut().zip(nodes) {
            *p *= x;
        }
    }
    DegreeCheck {
        exact: max_residual < MOMENT_TOLERANCE,
        max_residual,
    }
}

/// Coefficients (lowest degree first) of `Π_{k∈roots} (x − x_k)`.
fn monic_from_roots<'a>(roots: impl Iterator<Item = &'a f64>) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] += ci;
            next[i] -= r * ci;
        }
        c = next;
    }
    c
}

/// Interpolatory weights `w_j = ½∫ ℓ_j(x) dx` for the Lagrange basis on `nodes`.
///
/// The Lagrange numerators are expanded in monomials and integrated against
/// exact moments. When cancellation in that sum is too severe the weights are
/// recomputed by integrating the product form with a Gauss rule of
/// sufficient degree. Weights are returned as computed; a bad node set can
/// produce negative weights.
pub fn weights_from_nodes(nodes: &[f64]) -> Result<Vec<f64>> {
    for (i, a) in nodes.iter().enumerate() {
        if !a.is_finite() || a.abs() > 1.0 + 1e-12 {
            return Err(Error::Domain(*a));
        }
        if nodes[..i].iter().any(|b| b == a) {
            return Err(Error::DuplicateNode(*a));
        }
    }
    let n = nodes.len();
    let mut weights = Vec::with_capacity(n);
    let mut ill_conditioned = false;
    for j in 0..n {
        let others = nodes
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, x)| x);
        let numer = monic_from_roots(others);
        let denom: f64 = nodes
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .map(|(_, x)| nodes[j] - x)
            .product();
        let (mut sum, mut abs_sum) = (0.0, 0.0);
        for (ell, c) in numer.iter().enumerate() {
            let m = normalized_moment(ell);
            sum += c * m;
            abs_sum += (c * m).abs();
        }
        if abs_sum * f64::EPSILON * n as f64 > 1e-14 * sum.abs().max(f64::MIN_POSITIVE) {
            ill_conditioned = true;
        }
        weights.push(sum / denom);
    }
    if ill_conditioned {
        return Ok(weights_by_reference_rule(nodes));
    }
    Ok(weights)
}

fn weights_by_reference_rule(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    // ℓ_j has degree n−1; a Gauss rule with m points is exact to 2m−1.
    let reference = gauss_nodes_weights(n / 2 + 1);
    (0..n)
        .map(|j| {
            reference
                .iter()
                .map(|&(x, w)| {
                    let l: f64 = nodes
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, xk)| (x - xk) / (nodes[j] - xk))
                        .product();
                    w * l
                })
                .sum()
        })
        .collect()
}

/// Gauss–Legendre nodes and normalized weights `1/((1−x²) P_r'(x)²)`.
fn gauss_nodes_weights(r: usize) -> Vec<(f64, f64)> {
    let roots = jacobi_roots(r, 0.0, 0.0).expect("Legendre roots always bracket");
    roots
        .into_iter()
        .map(|x| {
            let dp = legendre_derivative(r, x);
            (x, 1.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Which endpoint a Radau rule fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedEnd {
    PlusOne,
    MinusOne,
}

/// Gauss–Legendre rule with `r` nodes (the zeros of `P_r`), degree `2r − 1`.
pub fn gauss_rule(r: usize) -> Result<QuadratureRule> {
    if r == 0 {
        return Err(Error::InvalidArgument("Gauss rule needs r >= 1".into()));
    }
    let (nodes, weights): (Vec<f64>, Vec<f64>) = gauss_nodes_weights(r).into_iter().unzip();
    QuadratureRule::new(nodes, renormalize(weights), 2 * r - 1)
}

/// Radau rule with `r` nodes: the fixed endpoint plus the zeros of
/// `P_{r−1}^{(1,0)}` (for `+1`) or `P_{r−1}^{(0,1)}` (for `−1`). Degree `2r − 2`.
pub fn radau_rule(r: usize, fixed_end: FixedEnd) -> Result<QuadratureRule> {
    if r < 2 {
        return Err(Error::InvalidArgument("Radau rule needs r >= 2".into()));
    }
    let rf = r as f64;
    let (a, b, end) = match fixed_end {
        FixedEnd::PlusOne => (1.0, 0.0, 1.0),
        FixedEnd::MinusOne => (0.0, 1.0, -1.0),
    };
    let interior = jacobi_roots(r - 1, a, b)
        .ok_or_else(|| Error::RootConvergence(format!("Jacobi ({a},{b}) degree {}", r - 1)))?;
    // Normalized Radau weights: 1/r² at the fixed end, (1 ± x)/(2r² P_{r−1}(x)²) inside.
    let mut pairs: Vec<(f64, f64)> = interior
        .into_iter()
        .map(|x| {
            let p = legendre_unchecked(r - 1, x);
            (x, (1.0 + end * x) / (2.0 * rf * rf * p * p))
        })
        .collect();
    pairs.push((end, 1.0 / (rf * rf)));
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    QuadratureRule::new(nodes, renormalize(weights), 2 * r - 2)
}

/// Lobatto rule with `r` nodes: `±1` plus the zeros of `P_{r−2}^{(1,1)}`. Degree `2r − 3`.
pub fn lobatto_rule(r: usize) -> Result<QuadratureRule> {
    if r < 3 {
        return Err(Error::InvalidArgument("Lobatto rule needs r >= 3".into()));
    }
    let rf = r as f64;
    let interior = jacobi_roots(r - 2, 1.0, 1.0)
        .ok_or_else(|| Error::RootConvergence(format!("Jacobi (1,1) degree {}", r - 2)))?;
    let end_weight = 1.0 / (rf * (rf - 1.0));
    let mut nodes = vec![-1.0];
    let mut weights = vec![end_weight];
    for x in interior {
        let p = legendre_unchecked(r - 1, x);
        nodes.push(x);
        weights.push(end_weight / (p * p));
    }
    nodes.push(1.0);
    weights.push(end_weight);
    QuadratureRule::new(nodes, renormalize(weights), 2 * r - 3)
}

/// Build a rule from arbitrary nodes using interpolatory weights. Fails if
/// any weight is non-positive or the rule is not exact to `degree`.
pub fn rule_from_nodes(mut nodes: Vec<f64>, degree: usize) -> Result<QuadratureRule> {
    nodes.sort_by(f64::total_cmp);
    let weights = weights_from_nodes(&nodes)?;
    let nodes = nodes.into_iter().map(|x| x.clamp(-1.0, 1.0)).collect();
    QuadratureRule::new(nodes, renormalize(weights), degree)
}

/// Largest residual of the orthogonality conditions `½∫ V(x) x^ℓ dx = 0`,
/// `ℓ = 0..=z−r`, where `V` is the monic node polynomial.
/// Returns 0 when `z < r`.
pub fn node_polynomial_orthogonality(nodes: &[f64], z: usize) -> f64 {
    let r = nodes.len();
    if z < r {
        return 0.0;
    }
    let v = monic_from_roots(nodes.iter());
    (0..=(z - r))
        .map(|ell| {
            v.iter()
                .enumerate()
                .map(|(i, c)| c * normalized_moment(i + ell))
                .sum::<f64>()
                .abs()
        })
        .fold(0.0, f64::max)
}

/// Removes the last-bit drift of closed-form weights so they sum to one.
fn renormalize(mut weights: Vec<f64>) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    weights
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_slices(a: &[f64], b: &[f64], eps: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = eps);
        }
    }

    #[test]
    fn weights_from_node_examples() {
        assert_slices(
            &weights_from_nodes(&[-1.0 / 3.0, 1.0]).unwrap(),
            &[0.75, 0.25],
            1e-15,
        );
        let s = (0.6f64).sqrt();
        assert_slices(
            &weights_from_nodes(&[-s, 0.0, s]).unwrap(),
            &[5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0],
            1e-15,
        );
        let s = (0.2f64).sqrt();
        assert_slices(
            &weights_from_nodes(&[-1.0, -s, s, 1.0]).unwrap(),
            &[1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0],
            1e-15,
        );
        assert!(matches!(
            weights_from_nodes(&[0.1, 0.5, 0.1]),
            Err(Error::DuplicateNode(_))
        ));
    }

    #[test]
    fn bad_node_sets_give_negative_weights() {
        let w = weights_from_nodes(&[-0.9, -0.85, 0.0, 0.85, 0.9]).unwrap();
        assert!(w.iter().any(|w| *w < 0.0));
        assert!(rule_from_nodes(vec![-0.9, -0.85, 0.0, 0.85, 0.9], 4).is_err());
    }

    #[test]
    fn gauss_examples() {
        let g = gauss_rule(1).unwrap();
        assert_eq!(g.nodes(), &[0.0]);
        assert_eq!(g.weights(), &[1.0]);
        let g = gauss_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_slices(g.nodes(), &[-s, s], 1e-15);
        assert_slices(g.weights(), &[0.5, 0.5], 1e-15);
        let g = gauss_rule(3).unwrap();
        assert_eq!(g.degree(), 5);
        assert_slices(g.weights(), &[5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0], 1e-15);
        assert!(verify_degree(&g, 5).exact);
        let over = verify_degree(&g, 6);
        assert!(!over.exact);
        assert_abs_diff_eq!(over.max_residual, 1.0 / 7.0 - 0.12, epsilon = 1e-14);
    }

    #[test]
    fn radau_examples() {
        let six = 6f64.sqrt();
        let r = radau_rule(3, FixedEnd::PlusOne).unwrap();
        assert_slices(
            r.nodes(),
            &[(-1.0 - six) / 5.0, (-1.0 + six) / 5.0, 1.0],
            1e-15,
        );
        assert_slices(
            r.weights(),
            &[(16.0 - six) / 36.0, (16.0 + six) / 36.0, 1.0 / 9.0],
            1e-15,
        );
        assert_eq!(r.degree(), 4);
        let m = radau_rule(3, FixedEnd::MinusOne).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(m.nodes()[i], -r.nodes()[2 - i], epsilon = 1e-15);
            assert_abs_diff_eq!(m.weights()[i], r.weights()[2 - i], epsilon = 1e-15);
        }
        let r2 = radau_rule(2, FixedEnd::PlusOne).unwrap();
        assert_slices(r2.nodes(), &[-1.0 / 3.0, 1.0], 1e-15);
        assert_slices(r2.weights(), &[0.75, 0.25], 1e-15);
    }

    #[test]
    fn lobatto_examples() {
        let l = lobatto_rule(4).unwrap();
        let s = (0.2f64).sqrt();
        assert_slices(l.nodes(), &[-1.0, -s, s, 1.0], 1e-15);
        assert_slices(
            l.weights(),
            &[1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0],
            1e-15,
        );
        let l = lobatto_rule(3).unwrap();
        assert_slices(l.nodes(), &[-1.0, 0.0, 1.0], 1e-15);
        assert_slices(l.weights(), &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1e-15);
        for r in 3..12 {
            let l = lobatto_rule(r).unwrap();
            for i in 0..r {
                assert_abs_diff_eq!(l.nodes()[i], -l.nodes()[r - 1 - i], epsilon = 1e-15);
                assert_abs_diff_eq!(l.weights()[i], l.weights()[r - 1 - i], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn constructed_rules_agree_with_interpolatory_weights() {
        let mut rules = Vec::new();
        for r in 1..=16 {
            rules.push(gauss_rule(r).unwrap());
        }
        for r in 2..=16 {
            rules.push(radau_rule(r, FixedEnd::PlusOne).unwrap());
            rules.push(radau_rule(r, FixedEnd::MinusOne).unwrap());
        }
        for r in 3..=16 {
            rules.push(lobatto_rule(r).unwrap());
        }
        for rule in rules {
            let w = weights_from_nodes(rule.nodes()).unwrap();
            assert_slices(&w, rule.weights(), 1e-12);
            assert!(node_polynomial_orthogonality(rule.nodes(), rule.degree()) < 1e-10);
            // no rule with r nodes reaches degree 2r
            assert!(!verify_degree(&rule, 2 * rule.len()).exact);
        }
    }

    #[test]
    fn orthogonality_implies_exactness() {
        // (1 − x²) P_3^{(1,1)} satisfies the orthogonality conditions up to z = 2·5 − 3.
        let rule = lobatto_rule(5).unwrap();
        assert!(node_polynomial_orthogonality(rule.nodes(), 7) < 1e-12);
        let built = rule_from_nodes(rule.nodes().to_vec(), 7).unwrap();
        assert!(verify_degree(&built, 7).exact);
    }

    #[test]
    fn invalid_rules_rejected() {
        assert!(QuadratureRule::new(vec![0.5, -0.5], vec![0.5, 0.5], 1).is_err());
        assert!(QuadratureRule::new(vec![-0.5, 0.5], vec![0.6, 0.6], 0).is_err());
        assert!(QuadratureRule::new(vec![-0.5, 0.5], vec![0.5, 0.5], 2).is_err());
        assert!(QuadratureRule::new(vec![-0.5, 0.5], vec![0.5, 0.5], 1).is_ok());
    }

    #[test]
    fn json_shape() {
        let rule = gauss_rule(2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rule).unwrap();
        assert!(v.get("nodes").is_some() && v.get("weights").is_some());
        assert_eq!(v["degree"], 3);
        let back: QuadratureRule = serde_json::from_value(v).unwrap();
        assert_eq!(back, rule);
        let bad = serde_json::json!({"nodes": [0.0], "weights": [1.0], "degree": 3});
        assert!(serde_json::from_value::<QuadratureRule>(bad).is_err());
    }
}
