// Fit a synthetic surface on an optimal design, then compare the Monte
// Carlo covariance of the estimates with sigma^2/n times the inverse
// information matrix.

use std::error::Error;
use std::f64::consts::PI;

use sphdesign::design::{azimuthal_design, polar_from_rule, product_design};
use sphdesign::harmonics::SphericalAngle;
use sphdesign::quadrature::gauss_rule;
use sphdesign::regression::{
    fit, monte_carlo_covariance, synthesize_radius, theoretical_covariance, CoefficientVector,
    RadiusSample,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let d = 2;
    let xi = product_design(
        &polar_from_rule(&gauss_rule(3)?),
        &azimuthal_design(-PI, 5)?,
    );

    let mut truth = CoefficientVector::zeros(d);
    truth.set(0, 0, 3.0)?;
    truth.set(1, 0, 0.4)?;
    truth.set(2, -2, -0.15)?;
    let samples = xi
        .points()
        .iter()
        .map(|p| {
            let a = SphericalAngle::new(p.theta, p.phi)?;
            RadiusSample::new(a, synthesize_radius(&truth, a))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let c = fit(&samples, d)?;
    let err = c
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!(
        "noiseless fit on {} points: max coefficient error {err:.1e}",
        samples.len()
    );

    let (n, sigma) = (180, 1.0);
    let emp = monte_carlo_covariance(&xi, d, sigma, n, 2000, 42)?;
    let theory = theoretical_covariance(&xi, d, sigma, n);
    let rel = (&emp - &theory).norm() / theory.norm();
    println!("Monte Carlo, n = {n}, 2000 replications: relative Frobenius error {rel:.3}");
    println!(
        "diagonal x n: {:.3?}",
        emp.diagonal()
            .iter()
            .map(|v| v * n as f64)
            .collect::<Vec<_>>()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
