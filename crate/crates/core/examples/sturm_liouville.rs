//! 1D Robin and thin-step problems on [0, 1]: gaps from the Neumann values.
//!
//! cargo run --release --example sturm_liouville

use robin_clusters::sl1d::{eigenvalue_table, Sl1dProblem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let modes = [1, 2, 5, 10, 50, 100];
    let robin = eigenvalue_table(&Sl1dProblem::robin(1.0), &modes)?;
    println!("Robin σ = 1");
    for r in &robin {
        println!("  n = {:>3}  λ = {:.10}  gap {:.8}", r.n, r.lambda, r.gap);
    }
    for eps in [0.1, 0.05, 0.025] {
        let step = eigenvalue_table(&Sl1dProblem::step(1.0, eps), &modes)?;
        println!("step σ = 1, ε = {eps}");
        for r in &step {
            println!("  n = {:>3}  μ = {:.10}  gap {:.8}", r.n, r.lambda, r.gap);
        }
    }
    Ok(())
}
