//! Polar support bound for designs with `M = I`.
//!
//! A design with identity information matrix induces, through `x = cos θ`,
//! a positive quadrature rule of degree `2d`. Every such rule has a node at
//! least as far out as the largest root of `P_{d+1}`, so the polar support
//! must reach `θ = z*` or `θ = π − z*`, where `z* = arccos x*_max`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::design::{
    azimuthal_design, information_matrix, product_design, DesignPoint, MarginalDesign, SphereDesign,
};
use crate::orthopoly::{poly_roots, PolySpec};
use crate::{Error, Result};

/// `arccos` of the largest root of `P_{d+1}`.
pub fn support_bound(d: usize) -> f64 {
    let roots = poly_roots(&PolySpec::legendre(d + 1)).expect("Legendre roots always converge");
    let top = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top.abs().min(1.0).acos()
}

/// Random search for designs close to `M = I` with polar angles confined to
/// `[z* + margin, π − z* − margin]`.
///
/// Half of the candidates are products of a random polar factor with a
/// uniform azimuthal factor; the rest are unstructured point sets. The best
/// `refine` candidates are then improved by a shrinking random walk.
#[derive(Debug, Clone)]
pub struct ConstrainedSearch {
    pub d: usize,
    pub candidates: usize,
    pub margin: f64,
    pub refine: usize,
    pub refine_steps: usize,
    pub seed: u64,
}

impl ConstrainedSearch {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            candidates: 10_000,
            margin: 0.05,
            refine: 16,
            refine_steps: 2_000,
            seed: 0x0b0d_0000,
        }
    }

    /// The admissible polar interval.
    pub fn window(&self) -> (f64, f64) {
        let z = support_bound(self.d);
        (z + self.margin, PI - z - self.margin)
    }

    pub fn run(&self) -> Result<SearchOutcome> {
        let (lo, hi) = self.window();
        if lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "empty polar window [{lo}, {hi}]"
            )));
        }
        let d = self.d;
        let mut scored: Vec<(f64, usize, SphereDesign)> = (0..self.candidates)
            .into_par_iter()
            .map(|i| {
                let mut rng = self.stream(i as u64);
                let xi = if i % 2 == 0 {
                    random_product(&mut rng, d, lo, hi)
                } else {
                    random_scatter(&mut rng, d, lo, hi)
                };
                (distance(&xi, d), i, xi)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        scored.truncate(self.refine.max(1));

        let refined: Vec<(f64, usize, SphereDesign)> = scored
            .into_par_iter()
            .map(|(score, i, xi)| {
                let mut rng = self.stream(self.candidates as u64 + i as u64);
                let (xi, score) = refine(xi, score, d, lo, hi, self.refine_steps, &mut rng);
                (score, i, xi)
            })
            .collect();
        let (best_distance, _, best_design) = refined
            .into_iter()
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("at least one candidate");
        Ok(SearchOutcome {
            candidates_evaluated: self.candidates,
            best_distance,
            best_design,
            window: (lo, hi),
        })
    }

    fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub candidates_evaluated: usize,
    /// Smallest `‖M − I‖_∞` found.
    pub best_distance: f64,
    pub best_design: SphereDesign,
    pub window: (f64, f64),
}

fn distance(xi: &SphereDesign, d: usize) -> f64 {
    information_matrix(xi, d).distance_to_identity()
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn random_product(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> SphereDesign {
    let k = rng.random_range(d + 1..=2 * d + 2);
    let points = (0..k).map(|_| rng.random_range(lo..=hi)).collect();
    let mu = MarginalDesign::new(points, random_weights(rng, k)).expect("valid marginal");
    let nu = azimuthal_design(-PI, 2 * d + 1).expect("valid phase");
    product_design(&mu, &nu)
}

fn random_scatter(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> SphereDesign {
    let p = (d + 1) * (d + 1);
    let n = rng.random_range(p..=3 * p);
    let weights = random_weights(rng, n);
    let points = weights
        .into_iter()
        .map(|weight| DesignPoint {
            theta: rng.random_range(lo..=hi),
            phi: rng.random_range(-PI..PI),
            weight,
        })
        .collect();
    SphereDesign::new(points).expect("valid random design")
}

fn refine(
    mut xi: SphereDesign,
    mut score: f64,
    d: usize,
    lo: f64,
    hi: f64,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> (SphereDesign, f64) {
    let mut scale = 0.2;
    for _ in 0..steps {
        let mut points = xi.points().to_vec();
        for p in points.iter_mut() {
            p.theta = (p.theta + scale * rng.random_range(-1.0..1.0)).clamp(lo, hi);
            p.phi += scale * rng.random_range(-1.0..1.0);
            p.weight *= (scale * rng.random_range(-1.0..1.0)).exp();
        }
        let total: f64 = points.iter().map(|p| p.weight).sum();
        for p in points.iter_mut() {
            p.weight /= total;
        }
        let Ok(trial) = SphereDesign::new(points) else {
            continue;
        };
        let s = distance(&trial, d);
        if s < score {
            xi = trial;
            score = s;
        } else {
            scale = (scale * 0.995).max(1e-4);
        }
    }
    (xi, score)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;

    #[test]
    fn closed_form_bounds() {
        assert!((support_bound(1) - (1.0 / 3f64.sqrt()).acos()).abs() < 1e-14);
        assert!((support_bound(2) - 0.6f64.sqrt().acos()).abs() < 1e-14);
        assert!((support_bound(1) - 0.95532).abs() < 1e-5);
        assert!((support_bound(2) - 0.68472).abs() < 1e-5);
        for d in 1..8 {
            assert!(support_bound(d + 1) < support_bound(d));
        }
    }

    #[test]
    fn gauss_rule_reaches_bound() {
        for d in 1..=7 {
            let rule = gauss_rule(d + 1).unwrap();
            let top = rule.nodes().iter().fold(0.0f64, |m, x| m.max(x.abs()));
            assert!((top - support_bound(d).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn small_search_stays_away_from_identity() {
        let search = ConstrainedSearch {
            candidates: 200,
            refine: 2,
            refine_steps: 200,
            ..ConstrainedSearch::new(1)
        };
        let out = search.run().unwrap();
        assert!(out.best_distance > 1e-3);
        let (lo, hi) = out.window;
        assert!(out
            .best_design
            .points()
            .iter()
            .all(|p| p.theta >= lo && p.theta <= hi));
    }
}
