//! Optimality criteria, efficiencies, and optimality checks.
//!
//! Two families are supported:
//!
//! * Kiefer's `Φ_p` for a subset of harmonic levels selected by a
//!   [`LevelSelector`] `K`: with `C = (Kᵀ M⁻ K)⁻¹`,
//!   `Φ_p = (tr C^p)^{1/p}`, `Φ_0 = det C`, `Φ_{−∞} = λ_min(C)`.
//! * `Ψ_{p,r}`, the `p`-mean of the `r` smallest eigenvalues of `M`.
//!
//! The uniform measure on the sphere (and every discrete design with
//! `M = I`) maximizes all of them, so efficiencies are taken relative to
//! `M = I`.

mod bound;
mod equivalence;
pub mod tables;

pub use bound::{support_bound, ConstrainedSearch, SearchOutcome};
pub use equivalence::{equivalence_check, EquivalenceReport, GridResolution, EQUIVALENCE_SLACK};

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::design::{information_matrix, InformationMatrix, SphereDesign};
use crate::harmonics::basis_len;
use crate::linalg::{pseudo_inverse, SymEigen, EIGEN_ZERO};
use crate::{Error, Result};

/// Maximum allowed `‖(I − M M⁻) K‖` for `Kᵀc` to count as estimable.
pub const ESTIMABILITY_TOLERANCE: f64 = 1e-8;

/// A set of harmonic levels `k_0 < … < k_q ≤ d` whose coefficients are of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSelector {
    d: usize,
    levels: Vec<usize>,
}

impl LevelSelector {
    pub fn new(d: usize, levels: Vec<usize>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument(
                "level selector needs at least one level".into(),
            ));
        }
        if !levels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "levels must be strictly increasing".into(),
            ));
        }
        if levels.last().is_some_and(|&k| k > d) {
            return Err(Error::InvalidArgument(format!(
                "level exceeds model degree {d}"
            )));
        }
        Ok(Self { d, levels })
    }

    /// All levels `0..=d`; `K` is the identity.
    pub fn full(d: usize) -> Self {
        Self {
            d,
            levels: (0..=d).collect(),
        }
    }

    /// Every nonempty subset of `0..=d`.
    pub fn all_subsets(d: usize) -> Vec<Self> {
        (1u32..(1 << (d + 1)))
            .map(|mask| Self {
                d,
                levels: (0..=d).filter(|k| mask & (1 << k) != 0).collect(),
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// `s = Σ (2k + 1)`.
    pub fn size(&self) -> usize {
        self.levels.iter().map(|k| 2 * k + 1).sum()
    }

    /// Positions in the regression vector picked out by `Kᵀ`, in level order.
    pub fn indices(&self) -> Vec<usize> {
        self.levels
            .iter()
            .flat_map(|&k| (k * k)..((k + 1) * (k + 1)))
            .collect()
    }

    /// The 0/1 matrix `K ∈ R^{(d+1)² × s}`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let idx = self.indices();
        DMatrix::from_fn(basis_len(self.d), idx.len(), |r, c| {
            if idx[c] == r {
                1.0
            } else {
                0.0
            }
        })
    }
}

fn check_order(p: f64) -> Result<()> {
    if p.is_nan() || p >= 1.0 || p == f64::INFINITY {
        return Err(Error::InvalidArgument(format!(
            "criterion order p must be < 1, got {p}"
        )));
    }
    Ok(())
}

/// `C = (Kᵀ M⁻ K)⁻¹`, after checking `range(K) ⊆ range(M)`.
pub fn reduced_information(m: &InformationMatrix, sel: &LevelSelector) -> Result<DMatrix<f64>> {
    check_selector(m, sel)?;
    let k = sel.matrix();
    let mm = m.matrix();
    let ginv = pseudo_inverse(mm);
    let projector_residual = (&k - mm * &ginv * &k).abs().max();
    if projector_residual > ESTIMABILITY_TOLERANCE {
        return Err(Error::NotEstimable(projector_residual));
    }
    let kmk = k.transpose() * ginv * &k;
    let eig = SymEigen::new(&kmk);
    if eig.min() <= EIGEN_ZERO {
        return Err(Error::NotEstimable(eig.min()));
    }
    Ok(eig.reconstruct(|l| 1.0 / l))
}

fn check_selector(m: &InformationMatrix, sel: &LevelSelector) -> Result<()> {
    if sel.degree() != m.degree() {
        return Err(Error::InvalidArgument(format!(
            "selector degree {} does not match matrix degree {}",
            sel.degree(),
            m.degree()
        )));
    }
    Ok(())
}

/// Kiefer's `Φ_p` of `C = (Kᵀ M⁻ K)⁻¹`: `(tr C^p)^{1/p}`, with `det C` at
/// `p = 0` and `λ_min(C)` at `p = −∞`. At `M = I` this is `s^{1/p}` (`p ≠ 0`).
pub fn phi_p(m: &InformationMatrix, sel: &LevelSelector, p: f64) -> Result<f64> {
    check_order(p)?;
    let c = reduced_information(m, sel)?;
    let values = SymEigen::new(&c).values;
    Ok(if p == 0.0 {
        values.iter().product()
    } else if p == f64::NEG_INFINITY {
        values[0]
    } else {
        values.iter().map(|l| l.powf(p)).sum::<f64>().powf(1.0 / p)
    })
}

/// `Ψ_{p,r} = (Σ_{j≤r} λ_(j)^p)^{1/p}` over the `r` smallest eigenvalues of
/// `M`, with the product at `p = 0` and `λ_min` at `p = −∞`.
pub fn psi_pr(m: &InformationMatrix, p: f64, r: usize) -> Result<f64> {
    check_order(p)?;
    check_count(m.dim(), r)?;
    let values = m.eigen().values;
    Ok(psi_from_eigenvalues(&values[..r], p))
}

fn check_count(dim: usize, r: usize) -> Result<()> {
    if r == 0 || r > dim {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue count r must be in 1..={dim}, got {r}"
        )));
    }
    Ok(())
}

fn psi_from_eigenvalues(values: &[f64], p: f64) -> f64 {
    let clipped = values
        .iter()
        .map(|l| if *l <= EIGEN_ZERO { 0.0 } else { *l });
    if p == 0.0 {
        clipped.product()
    } else if p == f64::NEG_INFINITY {
        clipped.fold(f64::INFINITY, f64::min)
    } else if p < 0.0 && values.iter().any(|l| *l <= EIGEN_ZERO) {
        0.0
    } else {
        clipped.map(|l| l.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Power-mean of order `p` normalized to equal 1 when every value is 1.
fn normalized_mean(values: &[f64], p: f64) -> f64 {
    let n = values.len() as f64;
    if p == 0.0 {
        (values.iter().map(|l| l.ln()).sum::<f64>() / n).exp()
    } else if p == f64::NEG_INFINITY {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        (values.iter().map(|l| l.powf(p)).sum::<f64>() / n).powf(1.0 / p)
    }
}

/// A design criterion whose optimum is attained at `M = I`.
#[derive(Debug, Clone, PartialEq)]
pub enum Criterion {
    /// `Φ_p` over the coefficients of the selected levels.
    PhiP { p: f64, selector: LevelSelector },
    /// `Ψ_{p,r}` over the `r` smallest eigenvalues of `M`.
    PsiPR { p: f64, r: usize },
}

impl Criterion {
    pub fn d_optimality(d: usize) -> Self {
        Self::PhiP {
            p: 0.0,
            selector: LevelSelector::full(d),
        }
    }

    pub fn a_optimality(d: usize) -> Self {
        Self::PhiP {
            p: -1.0,
            selector: LevelSelector::full(d),
        }
    }

    pub fn e_optimality(d: usize) -> Self {
        Self::PhiP {
            p: f64::NEG_INFINITY,
            selector: LevelSelector::full(d),
        }
    }

    pub fn psi(p: f64, r: usize) -> Self {
        Self::PsiPR { p, r }
    }

    /// Parse `D`, `A`, `E`, `psi:p:r` or `phi:p[:k0,k1,…]` for model degree `d`.
    /// `p` accepts `-inf`.
    pub fn parse(name: &str, d: usize) -> Result<Self> {
        let unknown = || Error::UnknownCriterion(name.to_string());
        let parse_p = |s: &str| -> Result<f64> {
            let p = match s.trim() {
                "-inf" | "-infinity" => f64::NEG_INFINITY,
                other => f64::from_str(other).map_err(|_| unknown())?,
            };
            check_order(p)?;
            Ok(p)
        };
        let parts: Vec<&str> = name.trim().split(':').collect();
        match parts.as_slice() {
            ["D"] | ["d"] => Ok(Self::d_optimality(d)),
            ["A"] | ["a"] => Ok(Self::a_optimality(d)),
            ["E"] | ["e"] => Ok(Self::e_optimality(d)),
            ["psi", p, r] => {
                let r: usize = r.trim().parse().map_err(|_| unknown())?;
                check_count(basis_len(d), r)?;
                Ok(Self::PsiPR { p: parse_p(p)?, r })
            }
            ["phi", p] => Ok(Self::PhiP {
                p: parse_p(p)?,
                selector: LevelSelector::full(d),
            }),
            ["phi", p, levels] => {
                let levels = levels
                    .split(',')
                    .map(|k| k.trim().parse::<usize>().map_err(|_| unknown()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::PhiP {
                    p: parse_p(p)?,
                    selector: LevelSelector::new(d, levels)?,
                })
            }
            _ => Err(unknown()),
        }
    }

    /// Short column label, e.g. `eff_D` or `eff_psi(-1,2)`.
    pub fn label(&self) -> String {
        match self {
            Self::PhiP { p, selector } if selector.levels().len() == selector.degree() + 1 => {
                match *p {
                    0.0 => "eff_D".into(),
                    -1.0 => "eff_A".into(),
                    f64::NEG_INFINITY => "eff_E".into(),
                    p => format!("eff_phi({})", fmt_order(p)),
                }
            }
            Self::PhiP { p, selector } => {
                let levels: Vec<String> = selector.levels().iter().map(|k| k.to_string()).collect();
                format!("eff_phi({};{})", fmt_order(*p), levels.join(","))
            }
            Self::PsiPR { p, r } => format!("eff_psi({},{})", fmt_order(*p), r),
        }
    }
}

fn fmt_order(p: f64) -> String {
    if p == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{p}")
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Efficiency of an information matrix relative to `M = I`.
///
/// `Φ_p` uses the homogeneous mean `((1/s) Σ λ_i(C)^p)^{1/p}`, which gives
/// `det(M)^{1/(d+1)²}` for D, `(d+1)²/tr M⁻¹` for A and `λ_min(M)` for E
/// when all levels are selected. `Ψ_{p,r}` efficiency is `Ψ_{p,r}(M)/r^{1/p}`
/// (the plain product for `p = 0`).
pub fn efficiency_of_matrix(m: &InformationMatrix, criterion: &Criterion) -> Result<f64> {
    match criterion {
        Criterion::PhiP { p, selector } => {
            check_order(*p)?;
            let c = reduced_information(m, selector)?;
            Ok(normalized_mean(&SymEigen::new(&c).values, *p))
        }
        Criterion::PsiPR { p, r } => {
            let psi = psi_pr(m, *p, *r)?;
            Ok(if *p == 0.0 || *p == f64::NEG_INFINITY {
                psi
            } else {
                psi / (*r as f64).powf(1.0 / p)
            })
        }
    }
}

/// Efficiency of a design for a degree-`d` model.
pub fn efficiency(xi: &SphereDesign, d: usize, criterion: &Criterion) -> Result<f64> {
    efficiency_of_matrix(&information_matrix(xi, d), criterion)
}
