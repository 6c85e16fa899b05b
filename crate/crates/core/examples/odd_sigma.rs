//! Odd σ: exact Robin eigenfunctions at ℓ(ℓ+1), checked against the
//! Galerkin multiplicity.
//!
//! cargo run --release --example odd_sigma

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::galerkin::{
    odd_eigenspace_construction, robin_kernel_dimension, robin_spectrum,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sigma = BoundarySymbol::from_trig(0.0, &[(1, 1.0), (3, 1.0)], &[])?;
    for ell in [6, 10, 20] {
        let c = odd_eigenspace_construction(&sigma, ell)?;
        let kernel = robin_kernel_dimension(&sigma, ell)?;
        let worst = c.residuals.iter().cloned().fold(0.0, f64::max);
        let spec = robin_spectrum(&sigma, 2 * ell + 8)?;
        let lam = (ell * (ell + 1)) as f64;
        let hits = spec
            .eigenvalues
            .iter()
            .filter(|v| (*v - lam).abs() < 1e-6)
            .count();
        println!(
            "ℓ = {ell:>2}: constructed {} (kernel {kernel}), worst residual {worst:.1e}, Galerkin multiplicity at {lam} = {hits}",
            c.dimension
        );
    }
    Ok(())
}
