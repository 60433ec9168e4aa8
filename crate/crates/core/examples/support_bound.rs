// How far from the poles an optimal design must reach, and a random search
// that stays inside the bound.

use std::error::Error;

use sphdesign::criteria::{support_bound, ConstrainedSearch};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for d in 1..=7 {
        let z = support_bound(d);
        println!("d = {d}: z* = {z:.6} rad ({:.2} deg)", z.to_degrees());
    }
    for d in 1..=2 {
        let search = ConstrainedSearch {
            candidates: 2_000,
            refine: 4,
            refine_steps: 500,
            ..ConstrainedSearch::new(d)
        };
        let out = search.run()?;
        println!(
            "d = {d}: best ||M - I|| over {} designs in [{:.3}, {:.3}] is {:.4}",
            out.candidates_evaluated, out.window.0, out.window.1, out.best_distance
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
