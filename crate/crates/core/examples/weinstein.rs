//! Geodesic averaging of a thin boundary potential against the Robin limit.
//!
//! The averaged potential predicts clusters at σ/2; the Robin limit sits at σ.
//!
//! cargo run --release --example weinstein

use std::f64::consts::PI;

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::density::{geodesic_average, weinstein_comparison, TestFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = BoundarySymbol::from_trig(1.0, &[(2, 0.6)], &[(1, 0.3)])?;
    for spec in ["x", "x*bump(4)", "x^3*bump(4)"] {
        let w = weinstein_comparison(&sigma, &TestFunction::parse(spec)?)?;
        println!(
            "f = {spec:<12} naive {:.10}  correct {:.10}  check {:.1e}",
            w.naive, w.correct, w.substitution_check
        );
    }
    let even = sigma.even_part();
    println!("\ngeodesic averages, θ = π/3");
    for phi in [0.0, 0.5, 1.0] {
        let lim = 2.0 * even.value(phi + PI / 2.0) / (PI * (PI / 3.0).sin());
        for eps in [0.1, 0.01, 0.001] {
            let g = geodesic_average(PI / 3.0, phi, &sigma, eps)?;
            println!("  φ = {phi:.1} ε = {eps:<6} average {g:.8}  limit {lim:.8}");
        }
    }
    Ok(())
}
