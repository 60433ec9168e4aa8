// Efficiencies of the uniform grid and equal-height designs for degrees 1-4.

use std::error::Error;

use sphdesign::criteria::tables::{table2, table3};
use sphdesign::criteria::{efficiency, Criterion};
use sphdesign::design::equal_height_design;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{}", table2()?.to_markdown());
    println!("{}", table3()?.to_markdown());

    // A single design under a custom criterion list.
    let xi = equal_height_design(5, 11)?;
    for name in ["D", "A", "E", "psi:-1:4", "psi:0:9", "phi:-1:1,2"] {
        let c = Criterion::parse(name, 2)?;
        println!("{:<16} {:.6}", c.label(), efficiency(&xi, 2, &c)?);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
