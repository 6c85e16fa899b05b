//! Full Galerkin spectrum of the hemisphere Robin problem, with each cluster
//! compared against the cluster matrices of smoothed σ∓.
//!
//! cargo run --release --example galerkin_sandwich

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::cluster::sandwich_spectra;
use robin_clusters::galerkin::robin_spectrum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = BoundarySymbol::from_trig(1.0, &[(2, 1.0)], &[])?;
    let spec = robin_spectrum(&sigma, 24)?;
    println!(
        "L = 24: {} eigenvalues, trusted ℓ <= {}",
        spec.eigenvalues.len(),
        spec.trusted_ell
    );
    for ell in 4..=8 {
        let gaps = spec.cluster_gaps(ell)?;
        let (lo, hi) = sandwich_spectra(&sigma, ell, 0.2)?;
        println!("ℓ = {ell}");
        for k in 0..gaps.len() {
            println!(
                "  k = {}  {:.6} <= {:.6} <= {:.6}",
                k + 1,
                lo.gaps[k],
                gaps[k],
                hi.gaps[k]
            );
        }
    }
    Ok(())
}
