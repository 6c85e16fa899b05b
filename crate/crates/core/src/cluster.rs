//! Cluster operators W_ℓ[σ] = C[x_ℓ] M[σ] C[x_ℓ] on the Neumann trace
//! space span{e^{imφ} : |m| <= ℓ, ℓ-m even}, their spectra and traces.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::BoundarySymbol;
use crate::error::{Error, Result};
use crate::harmonics::{a_squared, trace_amplitudes};
use crate::numerics::{hermitian_eigenvalues, matmul, HermitianMatrix, QuadratureRule};

/// m = -ℓ, -ℓ+2, …, ℓ.
pub fn cluster_indices(ell: usize) -> Vec<i64> {
    let l = ell as i64;
    (0..=ell as i64).map(|j| -l + 2 * j).collect()
}

#[derive(Debug, Clone)]
pub struct ClusterMatrix {
    pub ell: usize,
    pub indices: Vec<i64>,
    pub matrix: HermitianMatrix,
}

/// Entry (m', m) = A_{ℓ,m'} σ̂_{m'-m} A_{ℓ,m}.
pub fn build_cluster_matrix(sigma: &BoundarySymbol, ell: usize) -> Result<ClusterMatrix> {
    let amps = trace_amplitudes(ell)?;
    let indices = cluster_indices(ell);
    let a: Vec<f64> = indices.iter().map(|&m| amps.a(m)).collect();
    let matrix = HermitianMatrix::from_upper(indices.len(), |i, j| {
        sigma.coeff(indices[i] - indices[j]) * (a[i] * a[j])
    })?;
    Ok(ClusterMatrix {
        ell,
        indices,
        matrix,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    ClusterOperator,
    Galerkin,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapSpectrum {
    pub ell: usize,
    pub gaps: Vec<f64>,
    pub method: SpectrumMethod,
    /// Relative off-diagonal tolerance of the eigensolver.
    pub tolerance: f64,
}

pub fn gap_spectrum(sigma: &BoundarySymbol, ell: usize) -> Result<GapSpectrum> {
    let cm = build_cluster_matrix(sigma, ell)?;
    let gaps = hermitian_eigenvalues(&cm.matrix)?;
    Ok(GapSpectrum {
        ell,
        gaps,
        method: SpectrumMethod::ClusterOperator,
        tolerance: crate::numerics::JACOBI_TOL,
    })
}

/// Gap spectra for several ℓ in parallel, returned in input order.
pub fn gap_spectra(sigma: &BoundarySymbol, ells: &[usize]) -> Result<Vec<GapSpectrum>> {
    ells.par_iter().map(|&l| gap_spectrum(sigma, l)).collect()
}

/// Tr W_ℓ[σ] = σ̂₀ Σ_m A²_{ℓ,m}.
pub fn cluster_trace(sigma: &BoundarySymbol, ell: usize) -> f64 {
    let l = ell as i64;
    let sum: f64 = (-l..=l).step_by(2).map(|m| a_squared(ell, m)).sum();
    sigma.mean() * sum
}

/// σ ± ε|σ| with |σ| sampled at degree 4D, doubled until the two cluster
/// spectra agree to 1e-6. Once the degree reaches 2ℓ the cluster matrix
/// no longer sees the truncation.
pub fn sandwich_symbols(
    sigma: &BoundarySymbol,
    ell: usize,
    epsilon: f64,
) -> Result<(BoundarySymbol, BoundarySymbol)> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("sandwich needs ε > 0"));
    }
    let d = sigma.degree();
    if d == 0 {
        let a = sigma.mean().abs();
        let abs = BoundarySymbol::constant(a);
        return Ok((
            sigma.add(&abs.scaled(-epsilon)),
            sigma.add(&abs.scaled(epsilon)),
        ));
    }
    let mut deg = 4 * d;
    let mut prev: Option<(Vec<f64>, BoundarySymbol)> = None;
    loop {
        if deg > crate::boundary::MAX_DEGREE {
            return Err(Error::numerical(
                "|σ| truncation did not settle below the maximal degree",
            ));
        }
        let abs = sigma.abs_symbol(deg)?;
        let spec = gap_spectrum(&abs, ell)?.gaps;
        if let Some((p, prev_abs)) = &prev {
            let scale = spec.iter().map(|x| x.abs()).fold(1.0, f64::max);
            let diff = p
                .iter()
                .zip(&spec)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            if diff <= 1e-6 * scale {
                return Ok((
                    sigma.add(&prev_abs.scaled(-epsilon)),
                    sigma.add(&prev_abs.scaled(epsilon)),
                ));
            }
        }
        prev = Some((spec, abs));
        deg *= 2;
    }
}

/// Gap spectra of V_ℓ[σ-] and V_ℓ[σ+] with σ± = σ ± ε|σ|.
pub fn sandwich_spectra(
    sigma: &BoundarySymbol,
    ell: usize,
    epsilon: f64,
) -> Result<(GapSpectrum, GapSpectrum)> {
    let (lo, hi) = sandwich_symbols(sigma, ell, epsilon)?;
    let lower = gap_spectrum(&lo, ell)?;
    let upper = gap_spectrum(&hi, ell)?;
    if lower
        .gaps
        .iter()
        .zip(&upper.gaps)
        .any(|(a, b)| *a > *b + 1e-10 * (1.0 + b.abs()))
    {
        return Err(Error::numerical("sandwich bounds out of order"));
    }
    Ok((lower, upper))
}

/// ω(m/ℓ) on the sublattice |m| <= ℓ-2, ℓ-m even; zero elsewhere.
fn window_coeff(omega: &dyn Fn(f64) -> f64, ell: usize, m: i64) -> f64 {
    let l = ell as i64;
    if m.abs() > l - 2 || (l - m).rem_euclid(2) != 0 {
        0.0
    } else {
        omega(m as f64 / ell as f64)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModelTrace {
    pub numeric: f64,
    pub limit: f64,
}

/// Tr((C[ω_ℓ] M[σ] C[ω_ℓ]*)^k)/(ℓ+1) and its limit
/// (1/4π) ∫∫ |ω(ξ)|^{2k} σ_even(φ)^k dξ dφ.
pub fn model_operator_trace(
    omega: &dyn Fn(f64) -> f64,
    sigma: &BoundarySymbol,
    ell: usize,
    k: u32,
) -> Result<ModelTrace> {
    if k == 0 {
        return Err(Error::domain("power k must be at least 1"));
    }
    if ell < 2 {
        return Err(Error::domain("model trace needs ℓ >= 2"));
    }
    let l = ell as i64;
    let idx: Vec<i64> = (0..=(ell as i64 - 2)).map(|j| -l + 2 + 2 * j).collect();
    let w: Vec<f64> = idx.iter().map(|&m| window_coeff(omega, ell, m)).collect();
    let n = idx.len();
    let t = HermitianMatrix::from_upper(n, |i, j| sigma.coeff(idx[i] - idx[j]) * (w[i] * w[j]))?;
    let mut p = t.as_slice().to_vec();
    for _ in 1..k {
        p = matmul(n, &p, t.as_slice());
    }
    let tr: f64 = (0..n).map(|i| p[i * n + i].re).sum();
    let numeric = tr / (ell as f64 + 1.0);

    let even = sigma.even_part();
    let gl = QuadratureRule::gauss_legendre(400)?;
    let xi_part = gl.integrate(|xi| omega(xi).abs().powi(2 * k as i32));
    let nphi = (8 * even.degree() * k as usize).max(64);
    let phi_part =
        QuadratureRule::uniform_periodic(nphi)?.integrate(|phi| even.value(phi).powi(k as i32));
    let limit = xi_part * phi_part / (4.0 * PI);
    Ok(ModelTrace { numeric, limit })
}

/// Hilbert–Schmidt norm of M[σ]C[ω_ℓ] - C[ω_ℓ]M[σ] compressed to |m| <= ℓ+D.
pub fn commutator_hs_norm(omega: &dyn Fn(f64) -> f64, sigma: &BoundarySymbol, ell: usize) -> f64 {
    let d = sigma.degree() as i64;
    let r = ell as i64 + d;
    let w: Vec<f64> = (-r..=r).map(|m| window_coeff(omega, ell, m)).collect();
    let mut s = 0.0;
    for (i, mp) in (-r..=r).enumerate() {
        for (j, m) in (-r..=r).enumerate() {
            let k = mp - m;
            if k.abs() > d {
                continue;
            }
            let z: Complex64 = sigma.coeff(k) * (w[j] - w[i]);
            s += z.norm_sqr();
        }
    }
    s.sqrt()
}

/// Smooth bump exp(1 - 1/(1-t²)) on (-1, 1), zero outside, peak 1 at 0.
pub fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

/// CSV rows (ell, k, gap) for a set of gap spectra; k counts from 1.
pub fn gap_rows(spectra: &[GapSpectrum]) -> Vec<(usize, usize, f64)> {
    spectra
        .iter()
        .flat_map(|s| {
            s.gaps
                .iter()
                .enumerate()
                .map(move |(k, &g)| (s.ell, k + 1, g))
        })
        .collect()
}
