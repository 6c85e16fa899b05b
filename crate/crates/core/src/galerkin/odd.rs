//! Exact Robin eigenfunctions at λ = ℓ(ℓ+1) for odd σ.
//!
//! For odd σ of degree d, σ·e^{imφ} only contains frequencies m+k with k odd,
//! i.e. frequencies carried by Dirichlet-type harmonics of degree ℓ. Given a
//! Neumann-type trace e^{imφ} with |m| <= ℓ-d-1 one picks F_N with that
//! trace and F_D with normal derivative -σ e^{imφ}; then F = F_N + F_D lies
//! in the degree-ℓ eigenspace and satisfies the Robin condition exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::BoundarySymbol;
use crate::error::{Error, Result};
use crate::harmonics::{b_amplitude, b_from_recurrence, normalized_legendre, trace_coefficient};
use crate::numerics::{hermitian_eigenvalues, numerical_rank, HermitianMatrix};

/// F = Σ_m c_m Y_ℓ^m.
#[derive(Debug, Clone, Serialize)]
pub struct HarmonicCombination {
    pub ell: usize,
    /// (m, Re c_m, Im c_m), ascending m.
    pub coeffs: Vec<(i64, f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OddConstruction {
    pub ell: usize,
    pub degree: usize,
    pub dimension: usize,
    /// Trace frequency m of each constructed function.
    pub frequencies: Vec<i64>,
    /// ‖σF + ∂_nF‖_{L²(∂Ω)} / ‖σ e^{imφ}‖_{L²(∂Ω)} per function.
    pub residuals: Vec<f64>,
    pub functions: Vec<HarmonicCombination>,
}

/// Equator trace coefficient of Y_ℓ^m straight from the Legendre recurrence.
fn recurrence_trace(ell: usize, m: i64) -> f64 {
    let mm = m.unsigned_abs() as usize;
    if mm > ell {
        return 0.0;
    }
    let v = 2f64.sqrt() * normalized_legendre(ell, mm, 0.0);
    if m < 0 && mm % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Fourier coefficients of σ·(trace of F) + ∂_nF, traces and normal
/// derivatives taken from the recurrence rather than the closed forms.
fn boundary_residual_coeffs(
    sigma: &BoundarySymbol,
    ell: usize,
    coeffs: &BTreeMap<i64, Complex64>,
) -> BTreeMap<i64, Complex64> {
    let d = sigma.degree() as i64;
    let mut out: BTreeMap<i64, Complex64> = BTreeMap::new();
    for (&mp, &c) in coeffs {
        let t = recurrence_trace(ell, mp);
        for k in -d..=d {
            *out.entry(mp + k).or_default() += sigma.coeff(k) * c * t;
        }
        *out.entry(mp).or_default() += c * b_from_recurrence(ell, mp);
    }
    out
}

pub fn odd_eigenspace_construction(sigma: &BoundarySymbol, ell: usize) -> Result<OddConstruction> {
    if sigma.is_zero() || !sigma.is_odd() {
        return Err(Error::domain("construction needs a nonzero odd σ"));
    }
    let d = sigma.degree();
    if ell <= d {
        return Err(Error::domain(format!(
            "need ℓ > degree(σ) = {d}, got ℓ = {ell}"
        )));
    }
    let top = (ell - d - 1) as i64;
    let sigma_norm =
        (2.0 * PI * sigma.pairs().iter().map(|(_, z)| z.norm_sqr()).sum::<f64>()).sqrt();
    let di = d as i64;

    let mut frequencies = Vec::new();
    let mut residuals = Vec::new();
    let mut functions = Vec::new();
    let mut m = -top;
    while m <= top {
        let mut coeffs: BTreeMap<i64, Complex64> = BTreeMap::new();
        coeffs.insert(m, Complex64::new(1.0 / trace_coefficient(ell, m), 0.0));
        for k in -di..=di {
            let s = sigma.coeff(k);
            if s.re == 0.0 && s.im == 0.0 {
                continue;
            }
            let b = b_amplitude(ell, m + k);
            if b == 0.0 || !b.is_finite() {
                return Err(Error::numerical(format!(
                    "vanishing normal-derivative amplitude at m = {}",
                    m + k
                )));
            }
            *coeffs.entry(m + k).or_default() -= s / b;
        }
        let r = boundary_residual_coeffs(sigma, ell, &coeffs);
        let norm = (2.0 * PI * r.values().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        residuals.push(norm / sigma_norm);
        frequencies.push(m);
        functions.push(HarmonicCombination {
            ell,
            coeffs: coeffs.iter().map(|(&k, z)| (k, z.re, z.im)).collect(),
        });
        m += 2;
    }
    Ok(OddConstruction {
        ell,
        degree: d,
        dimension: frequencies.len(),
        frequencies,
        residuals,
        functions,
    })
}

/// dim{F ∈ span(Y_ℓ^m) : σF + ∂_nF = 0 on the equator}, as 2ℓ+1 minus the
/// numerical rank of the boundary-condition map.
pub fn robin_kernel_dimension(sigma: &BoundarySymbol, ell: usize) -> Result<usize> {
    let l = ell as i64;
    let d = sigma.degree() as i64;
    let cols: Vec<i64> = (-l..=l).collect();
    let rows: Vec<i64> = (-l - d..=l + d).collect();
    let (nr, nc) = (rows.len(), cols.len());
    let mut map = vec![Complex64::new(0.0, 0.0); nr * nc];
    for (j, &mp) in cols.iter().enumerate() {
        let t = recurrence_trace(ell, mp);
        let b = b_from_recurrence(ell, mp);
        for (i, &n) in rows.iter().enumerate() {
            let mut v = sigma.coeff(n - mp) * t;
            if n == mp {
                v += b;
            }
            map[i * nc + j] = v;
        }
    }
    let gram = HermitianMatrix::from_upper(nc, |a, b| {
        (0..nr)
            .map(|i| map[i * nc + a].conj() * map[i * nc + b])
            .sum()
    })?;
    let sv: Vec<f64> = hermitian_eigenvalues(&gram)?
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    Ok(nc - numerical_rank(&sv, smax, 1e-8))
}
