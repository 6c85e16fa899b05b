//! Gap spectra of the cluster matrices for σ = 1 + cos 2φ along an ℓ ladder.
//!
//! cargo run --release --example cluster_spectrum

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::cluster::{cluster_trace, gap_spectra};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = BoundarySymbol::from_trig(1.0, &[(2, 1.0)], &[])?;
    let ladder = [10, 40, 160, 640];
    for s in gap_spectra(&sigma, &ladder)? {
        let max = s.gaps.iter().cloned().fold(f64::MIN, f64::max);
        let min = s.gaps.iter().cloned().fold(f64::MAX, f64::min);
        println!(
            "ℓ = {:>4}: {} gaps in [{min:.6}, {max:.6}], trace/(ℓ+1) = {:.6}",
            s.ell,
            s.gaps.len(),
            cluster_trace(&sigma, s.ell) / (s.ell as f64 + 1.0)
        );
    }
    Ok(())
}
