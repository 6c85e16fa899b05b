//! Empirical cluster averages ∑f(gap)/(ℓ+1) against the limiting functional.
//!
//! cargo run --release --example density_ladder

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::density::{empirical_vs_limit, TestFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = BoundarySymbol::from_trig(1.0, &[(2, 1.0)], &[(1, 0.5)])?;
    for spec in ["x", "x*bump(6)", "x^2*bump(6)"] {
        let f = TestFunction::parse(spec)?;
        let r = empirical_vs_limit(&sigma, &f, &[50, 100, 200, 400])?;
        println!("f = {spec}: limit {:.8}", r.limit);
        for i in 0..r.ells.len() {
            println!(
                "  ℓ = {:>3}  empirical {:.8}  deviation {:.3e}",
                r.ells[i], r.empirical[i], r.deviations[i]
            );
        }
    }
    Ok(())
}
