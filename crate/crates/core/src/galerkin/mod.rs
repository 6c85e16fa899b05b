//! Galerkin solvers for the hemisphere Robin Laplacian and cluster counting.

mod harmonic;
mod odd;
mod orthonormal;
mod secular;

use serde::Serialize;

pub use harmonic::{
    boundary_matrix, galerkin_system, gram_matrix, robin_spectrum_harmonic, stiffness_matrix,
    BasisEntry, GalerkinBasis, GalerkinSystem, Parity,
};
pub use odd::{
    odd_eigenspace_construction, robin_kernel_dimension, HarmonicCombination, OddConstruction,
};
pub use orthonormal::{radial_block, robin_spectrum, RadialBlock, RobinSpectrum};
pub use secular::{constant_sigma_eigenvalue, constant_sigma_spectrum, SectorEigenvalue};

/// Per-cluster window statistics for Λ_ℓ = (ℓ(ℓ+1) - C√(ℓ+1), ℓ(ℓ+1) + C√(ℓ+1)).
#[derive(Debug, Clone, Serialize)]
pub struct WindowCount {
    pub ell: usize,
    /// Eigenvalues inside Λ_ℓ (windows may overlap for large C).
    pub in_window: usize,
    /// Eigenvalues whose nearest cluster point is ℓ(ℓ+1).
    pub nearest: usize,
    /// Whether every eigenvalue assigned by nearest point lies in Λ_ℓ.
    pub assigned_inside: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowReport {
    pub c: f64,
    pub counts: Vec<WindowCount>,
    /// Eigenvalues below the range cutoff outside every Λ_ℓ.
    pub stragglers: Vec<f64>,
}

fn half_width(c: f64, ell: usize) -> f64 {
    c * ((ell + 1) as f64).sqrt()
}

/// Window counts over `ells` for an ascending spectrum. Eigenvalues up to the
/// upper edge of the last window are checked for membership in some Λ_ℓ,
/// ℓ ranging over 0..=max(ells).
pub fn cluster_window_counts(
    spectrum: &[f64],
    c: f64,
    ells: std::ops::RangeInclusive<usize>,
) -> WindowReport {
    let top = *ells.end();
    let centre = |l: usize| (l * (l + 1)) as f64;
    let cutoff = centre(top) + half_width(c, top);
    let nearest_of = |v: f64| -> usize {
        let mut best = 0;
        for l in 0..=top + 1 {
            if (v - centre(l)).abs() < (v - centre(best)).abs() {
                best = l;
            }
        }
        best
    };
    let counts = ells
        .map(|ell| {
            let (lo, hi) = (
                centre(ell) - half_width(c, ell),
                centre(ell) + half_width(c, ell),
            );
            let in_window = spectrum.iter().filter(|&&v| v > lo && v < hi).count();
            let assigned: Vec<f64> = spectrum
                .iter()
                .copied()
                .filter(|&v| nearest_of(v) == ell)
                .collect();
            WindowCount {
                ell,
                in_window,
                nearest: assigned.len(),
                assigned_inside: assigned.iter().all(|&v| v > lo && v < hi),
            }
        })
        .collect();
    let stragglers = spectrum
        .iter()
        .copied()
        .filter(|&v| v <= cutoff)
        .filter(|&v| !(0..=top).any(|l| (v - centre(l)).abs() < half_width(c, l)))
        .collect();
    WindowReport {
        c,
        counts,
        stragglers,
    }
}
