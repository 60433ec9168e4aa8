// Equal-weight quadrature rules of degree 2d for d = 1..7 and the uniform
// designs they give.

use std::error::Error;
use std::f64::consts::PI;

use sphdesign::design::{azimuthal_design, information_matrix, polar_from_rule, product_design};
use sphdesign::quadrature::{equal_weight_rule, verify_degree};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 1..=7 {
        let rule = equal_weight_rule(d)?;
        let check = verify_degree(&rule, 2 * d);
        let positive: Vec<String> = rule
            .nodes()
            .iter()
            .filter(|x| **x >= 0.0)
            .map(|x| format!("{x:.3}"))
            .collect();
        println!(
            "d = {d}: {:>2} nodes, residual {:.1e}, x >= 0: {}",
            rule.len(),
            check.max_residual,
            positive.join(" ")
        );
        let xi = product_design(&polar_from_rule(&rule), &azimuthal_design(-PI, 2 * d + 1)?);
        let dist = information_matrix(&xi, d).distance_to_identity();
        println!(
            "        uniform design with {} points, ||M - I|| = {dist:.1e}",
            xi.len()
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
