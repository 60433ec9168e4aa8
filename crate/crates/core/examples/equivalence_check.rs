// Grid check of the equivalence inequality for an optimal design and for
// a non-optimal equal-height design.

use std::error::Error;
use std::f64::consts::PI;

use sphdesign::criteria::{equivalence_check, GridResolution, LevelSelector};
use sphdesign::design::{azimuthal_design, equal_height_design, polar_from_rule, product_design};
use sphdesign::quadrature::gauss_rule;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = GridResolution::default();
    let d = 2;
    let xi = product_design(
        &polar_from_rule(&gauss_rule(d + 1)?),
        &azimuthal_design(-PI, 5)?,
    );
    for sel in LevelSelector::all_subsets(d) {
        let r = equivalence_check(&xi, d, &sel, -1.0, grid)?;
        println!(
            "levels {:?}: max {:.10} bound {:.10} holds {}",
            sel.levels(),
            r.max_lhs,
            r.bound,
            r.holds
        );
    }
    let eh = equal_height_design(3, 7)?;
    let r = equivalence_check(&eh, 1, &LevelSelector::full(1), -1.0, grid)?;
    println!(
        "equal-height (3, 7), d = 1: max {:.6} bound {:.6} at theta {:.4}: holds {}",
        r.max_lhs,
        r.bound,
        r.argmax.theta(),
        r.holds
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
