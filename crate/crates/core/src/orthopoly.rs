//! Legendre, associated Legendre, ultraspherical and Jacobi polynomials on
//! `[−1, 1]`, with root finding by interlacing brackets.
//!
//! All evaluators accept abscissae within `1e−12` of the interval and clamp
//! them to `±1`; anything further out is a [`Error::Domain`].

use crate::{Error, Result};

/// Slack allowed outside `[−1, 1]` before an abscissa is rejected.
pub const ENDPOINT_SLACK: f64 = 1e-12;

/// Clamp `x` into `[−1, 1]`, rejecting values more than [`ENDPOINT_SLACK`] outside.
pub fn clamp_unit(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 1.0 + ENDPOINT_SLACK {
        return Err(Error::Domain(x));
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// Polynomial family selector for [`PolySpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily {
    Legendre,
    /// `P_n^m` of fixed order `m`.
    AssociatedLegendre {
        order: usize,
    },
    /// `P_n^{(α,β)}` with `α, β ∈ {0, 1}`.
    Jacobi {
        alpha: i32,
        beta: i32,
    },
    /// Gegenbauer `C_n^{(λ)}`, `λ > 0`.
    Ultraspherical {
        lambda: f64,
    },
}

/// A concrete polynomial: family plus degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolySpec {
    family: PolyFamily,
    degree: usize,
}

impl PolySpec {
    pub fn new(family: PolyFamily, degree: usize) -> Result<Self> {
        match family {
            PolyFamily::Legendre => {}
            PolyFamily::AssociatedLegendre { order } => {
                if order > degree {
                    return Err(Error::InvalidPolynomial(format!(
                        "associated Legendre order {order} exceeds degree {degree}"
                    )));
                }
            }
            PolyFamily::Jacobi { alpha, beta } => check_jacobi(alpha, beta)?,
            PolyFamily::Ultraspherical { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidPolynomial(format!(
                        "ultraspherical parameter must be positive, got {lambda}"
                    )));
                }
            }
        }
        Ok(Self { family, degree })
    }

    pub fn legendre(degree: usize) -> Self {
        Self {
            family: PolyFamily::Legendre,
            degree,
        }
    }

    pub fn jacobi(degree: usize, alpha: i32, beta: i32) -> Result<Self> {
        Self::new(PolyFamily::Jacobi { alpha, beta }, degree)
    }

    pub fn family(&self) -> PolyFamily {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.family {
            PolyFamily::Legendre => legendre_eval(self.degree, x),
            PolyFamily::AssociatedLegendre { order } => assoc_legendre_eval(self.degree, order, x),
            PolyFamily::Jacobi { alpha, beta } => jacobi_eval(self.degree, alpha, beta, x),
            PolyFamily::Ultraspherical { lambda } => ultraspherical_eval(self.degree, lambda, x),
        }
    }

    /// Jacobi parameters and degree of the polynomial factor whose roots are
    /// the interior zeros of this spec.
    fn jacobi_equivalent(&self) -> (usize, f64, f64) {
        match self.family {
            PolyFamily::Legendre => (self.degree, 0.0, 0.0),
            PolyFamily::Jacobi { alpha, beta } => (self.degree, alpha as f64, beta as f64),
            // C_n^{(λ)} ∝ P_n^{(λ−½, λ−½)}
            PolyFamily::Ultraspherical { lambda } => (self.degree, lambda - 0.5, lambda - 0.5),
            // P_n^m = const · (1−x²)^{m/2} · C_{n−m}^{(m+½)} ∝ (1−x²)^{m/2} P_{n−m}^{(m,m)}
            PolyFamily::AssociatedLegendre { order } => {
                (self.degree - order, order as f64, order as f64)
            }
        }
    }
}

fn check_jacobi(alpha: i32, beta: i32) -> Result<()> {
    if (0..=1).contains(&alpha) && (0..=1).contains(&beta) {
        Ok(())
    } else {
        Err(Error::UnsupportedJacobi { alpha, beta })
    }
}

/// Legendre polynomial `P_n(x)` by the three-term recurrence.
pub fn legendre_eval(n: usize, x: f64) -> Result<f64> {
    let x = clamp_unit(x)?;
    Ok(legendre_unchecked(n, x))
}

pub(crate) fn legendre_unchecked(n: usize, x: f64) -> f64 {
    legendre_pair(n, x).0
}

/// `(P_n(x), P_{n−1}(x))`, with `P_{−1} := 0`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Associated Legendre function `P_n^m(x)` including the Condon–Shortley
/// phase `(−1)^m`, computed by the fixed-order recurrence seeded at `P_m^m`.
pub fn assoc_legendre_eval(n: usize, m: usize, x: f64) -> Result<f64> {
    if m > n {
        return Err(Error::InvalidPolynomial(format!(
            "associated Legendre order {m} exceeds degree {n}"
        )));
    }
    let x = clamp_unit(x)?;
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= -((2 * i - 1) as f64) * s;
    }
    if n == m {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=n {
        let next = ((2 * l - 1) as f64 * x * cur - (l + m - 1) as f64 * prev) / (l - m) as f64;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Gegenbauer polynomial `C_n^{(λ)}(x)`.
pub fn ultraspherical_eval(n: usize, lambda: f64, x: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidPolynomial(format!(
            "ultraspherical parameter must be positive, got {lambda}"
        )));
    }
    let x = clamp_unit(x)?;
    if n == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, 2.0 * lambda * x);
    for k in 2..=n {
        let k = k as f64;
        let next = (2.0 * x * (k + lambda - 1.0) * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Jacobi polynomial `P_j^{(α,β)}(x)` normalized so that `P_j^{(α,β)}(1) = C(j+α, j)`.
pub fn jacobi_eval(j: usize, alpha: i32, beta: i32, x: f64) -> Result<f64> {
    check_jacobi(alpha, beta)?;
    let x = clamp_unit(x)?;
    Ok(jacobi_real(j, alpha as f64, beta as f64, x))
}

/// Jacobi recurrence for real parameters `α, β > −1`.
pub(crate) fn jacobi_real(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let denom = 2.0 * k * (k + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / denom;
        prev = cur;
        cur = next;
    }
    cur
}

fn jacobi_real_derivative(n: usize, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + a + b + 1.0) * jacobi_real(n - 1, a + 1.0, b + 1.0, x)
}

/// Derivative of the Legendre polynomial, used for Gauss weights.
pub(crate) fn legendre_derivative(n: usize, x: f64) -> f64 {
    jacobi_real_derivative(n, 0.0, 0.0, x)
}

/// Interior zeros of the polynomial, strictly increasing.
///
/// For an associated Legendre spec `P_n^m` these are the `n − m` zeros of
/// its polynomial factor; the endpoint zeros of `(1−x²)^{m/2}` are not
/// reported. For every other family the count equals the degree.
pub fn poly_roots(spec: &PolySpec) -> Result<Vec<f64>> {
    let (n, a, b) = spec.jacobi_equivalent();
    if spec.degree == 0 {
        return Err(Error::InvalidPolynomial(
            "root finding needs degree at least 1".into(),
        ));
    }
    let roots = jacobi_roots(n, a, b).ok_or_else(|| Error::RootConvergence(format!("{spec:?}")))?;
    Ok(roots)
}

/// Zeros of `P_n^{(a,b)}` built degree by degree: the zeros of degree `k−1`
/// strictly separate those of degree `k`, so each gap holds exactly one root.
pub(crate) fn jacobi_roots(n: usize, a: f64, b: f64) -> Option<Vec<f64>> {
    let mut roots: Vec<f64> = Vec::new();
    for k in 1..=n {
        let mut edges = Vec::with_capacity(k + 1);
        edges.push(-1.0);
        edges.extend_from_slice(&roots);
        edges.push(1.0);
        let f = |x: f64| jacobi_real(k, a, b, x);
        let mut next = Vec::with_capacity(k);
        for w in edges.windows(2) {
            next.push(bracketed_root(&f, w[0], w[1], |x| {
                jacobi_real_derivative(k, a, b, x)
            })?);
        }
        roots = next;
    }
    Some(roots)
}

fn bracketed_root(
    f: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    df: impl Fn(f64) -> f64,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let x = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    // Newton polish, kept only if it improves the residual inside the bracket.
    let d = df(x);
    if d != 0.0 {
        let polished = x - f(x) / d;
        if polished >= lo.min(hi) - f64::EPSILON
            && polished <= hi.max(lo) + f64::EPSILON
            && f(polished).abs() < f(x).abs()
        {
            return Some(polished);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_eval(0, 0.37).unwrap(), 1.0);
        assert_eq!(legendre_eval(3, 1.0).unwrap(), 1.0);
        for n in 0..30 {
            assert_eq!(legendre_eval(n, 1.0).unwrap(), 1.0);
        }
        assert_abs_diff_eq!(
            legendre_eval(2, 1.0 / 3f64.sqrt()).unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn domain_and_clamping() {
        assert!(matches!(legendre_eval(2, 1.1), Err(Error::Domain(_))));
        assert!(legendre_eval(2, 1.0 + 1e-13).is_ok());
        assert!(matches!(legendre_eval(2, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn associated_examples() {
        for n in 0..8 {
            for &x in &[-0.9, -0.2, 0.0, 0.4, 1.0] {
                assert_eq!(
                    assoc_legendre_eval(n, 0, x).unwrap(),
                    legendre_eval(n, x).unwrap()
                );
            }
        }
        assert_abs_diff_eq!(
            assoc_legendre_eval(1, 1, 0.0).unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        assert_eq!(assoc_legendre_eval(2, 2, 1.0).unwrap(), 0.0);
        assert!(assoc_legendre_eval(2, 3, 0.0).is_err());
    }

    #[test]
    fn jacobi_examples() {
        for &x in &[-1.0, -0.3, 0.2, 0.7, 1.0] {
            let expected = 0.75 * (5.0 * x * x - 1.0);
            assert_abs_diff_eq!(jacobi_eval(2, 1, 1, x).unwrap(), expected, epsilon = 1e-14);
            let expected = 0.5 * (5.0 * x * x + 2.0 * x - 1.0);
            assert_abs_diff_eq!(jacobi_eval(2, 1, 0, x).unwrap(), expected, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(jacobi_eval(2, 1, 1, 1.0).unwrap(), 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jacobi_eval(2, 1, 0, 0.2).unwrap(), -0.2, epsilon = 1e-14);
        assert_eq!(jacobi_eval(0, 0, 1, 0.9).unwrap(), 1.0);
        assert!(matches!(
            jacobi_eval(2, 2, 0, 0.0),
            Err(Error::UnsupportedJacobi { .. })
        ));
    }

    #[test]
    fn jacobi_endpoint_normalization() {
        // P_j^{(α,β)}(1) = C(j+α, j)
        for j in 0..10 {
            assert_abs_diff_eq!(jacobi_eval(j, 0, 0, 1.0).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                jacobi_eval(j, 1, 0, 1.0).unwrap(),
                (j + 1) as f64,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                jacobi_eval(j, 1, 1, 1.0).unwrap(),
                (j + 1) as f64,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(jacobi_eval(j, 0, 1, 1.0).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn root_examples() {
        let r = poly_roots(&PolySpec::legendre(3)).unwrap();
        let s = (0.6f64).sqrt();
        assert_abs_diff_eq!(r[0], -s, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[2], s, epsilon = 1e-15);

        let r = poly_roots(&PolySpec::jacobi(2, 1, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(r[0], -(0.2f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], (0.2f64).sqrt(), epsilon = 1e-15);

        let r = poly_roots(&PolySpec::jacobi(2, 1, 0).unwrap()).unwrap();
        let six = 6f64.sqrt();
        assert_abs_diff_eq!(r[0], (-1.0 - six) / 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], (-1.0 + six) / 5.0, epsilon = 1e-15);
    }

    #[test]
    fn roots_have_small_residuals() {
        let specs = [
            PolyFamily::Legendre,
            PolyFamily::Jacobi { alpha: 1, beta: 0 },
            PolyFamily::Jacobi { alpha: 0, beta: 1 },
            PolyFamily::Jacobi { alpha: 1, beta: 1 },
        ];
        for family in specs {
            for n in 1..=24 {
                let spec = PolySpec::new(family, n).unwrap();
                let roots = poly_roots(&spec).unwrap();
                assert_eq!(roots.len(), n);
                assert!(roots.windows(2).all(|w| w[0] < w[1]));
                assert!(roots.iter().all(|r| r.abs() < 1.0));
                for &r in &roots {
                    assert!(spec.eval(r).unwrap().abs() < 1e-13, "{spec:?} at {r}");
                }
            }
        }
    }

    #[test]
    fn ultraspherical_and_associated_roots() {
        // C_n^{(1/2)} is the Legendre polynomial.
        let u = poly_roots(&PolySpec::new(PolyFamily::Ultraspherical { lambda: 0.5 }, 5).unwrap())
            .unwrap();
        let l = poly_roots(&PolySpec::legendre(5)).unwrap();
        for (a, b) in u.iter().zip(&l) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let spec = PolySpec::new(PolyFamily::AssociatedLegendre { order: 2 }, 6).unwrap();
        let roots = poly_roots(&spec).unwrap();
        assert_eq!(roots.len(), 4);
        for r in roots {
            assert!(spec.eval(r).unwrap().abs() < 1e-12);
        }
        assert!(PolySpec::new(PolyFamily::AssociatedLegendre { order: 3 }, 2).is_err());
    }

    #[test]
    fn ultraspherical_matches_explicit_forms() {
        // C_2^{(λ)}(x) = 2λ(1+λ)x² − λ
        for &lambda in &[0.5, 1.0, 1.5, 2.5] {
            for &x in &[-0.8, 0.1, 0.6] {
                let expected = 2.0 * lambda * (1.0 + lambda) * x * x - lambda;
                assert_abs_diff_eq!(
                    ultraspherical_eval(2, lambda, x).unwrap(),
                    expected,
                    epsilon = 1e-14
                );
            }
        }
    }
}
