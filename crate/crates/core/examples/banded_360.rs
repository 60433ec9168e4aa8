// Degree-7 comparison of a 360-point equal-height design with a 360-point
// exact design built on the 23-node equal-weight rule.

use std::error::Error;

use sphdesign::criteria::tables::{reference_banded_design, table4};
use sphdesign::design::{equal_height_design, information_matrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{}", table4()?.to_markdown());
    for (name, xi) in [
        ("equal-height 10 x 36", equal_height_design(10, 36)?),
        ("banded 15x8 + 16x15", reference_banded_design()?),
    ] {
        let eig = information_matrix(&xi, 7).eigen();
        println!(
            "{name:<22} {} points, eigenvalues of M in [{:.4}, {:.4}]",
            xi.len(),
            eig.min(),
            eig.max()
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
