// Closed-form optimal designs of degree 1 and 2 built from the four
// Jacobi-type quadrature rules, with their information matrices checked.

use std::error::Error;
use std::f64::consts::PI;

use sphdesign::design::{
    azimuthal_design, information_matrix, merge_poles, polar_from_rule, product_design,
    SphereDesign,
};
use sphdesign::quadrature::{gauss_rule, lobatto_rule, radau_rule, FixedEnd, QuadratureRule};

fn show(name: &str, rule: &QuadratureRule, xi: &SphereDesign, d: usize) {
    println!("{name}");
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        println!("  theta = {:>10.6}  (x = {x:>9.6})  w = {w:.6}", x.acos());
    }
    let m = information_matrix(xi, d);
    println!(
        "  {} points, ||M - I|| = {:.2e}",
        xi.len(),
        m.distance_to_identity()
    );
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Degree 1: Radau rule fixed at +1, three azimuths, poles merged.
    let rule = radau_rule(2, FixedEnd::PlusOne)?;
    let xi = product_design(&polar_from_rule(&rule), &azimuthal_design(-PI, 3)?);
    show("d = 1, Radau(+1), t = 3", &rule, &xi, 1);
    let merged = merge_poles(&xi);
    println!("  merged:");
    for p in merged.points() {
        println!("    ({:.6}, {:>9.6})  w = {:.6}", p.theta, p.phi, p.weight);
    }

    // Degree 2 from each of the four rule families, t = 5.
    let nu = azimuthal_design(-PI, 5)?;
    let rules = [
        ("d = 2, Gauss r = 3", gauss_rule(3)?),
        ("d = 2, Lobatto r = 4", lobatto_rule(4)?),
        ("d = 2, Radau(+1) r = 3", radau_rule(3, FixedEnd::PlusOne)?),
        ("d = 2, Radau(-1) r = 3", radau_rule(3, FixedEnd::MinusOne)?),
    ];
    for (name, rule) in &rules {
        let xi = product_design(&polar_from_rule(rule), &nu);
        show(name, rule, &xi, 2);
    }
    let lobatto = product_design(&polar_from_rule(&rules[1].1), &nu);
    println!(
        "Lobatto design after merging poles: {} points",
        merge_poles(&lobatto).len()
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
