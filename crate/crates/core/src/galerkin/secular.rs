//! Constant σ: separation of variables.
//!
//! With σ constant each e^{imφ} sector decouples. The eigenfunction is the
//! Legendre function P_ν^{-m}(cos θ) regular at the pole; the Robin condition
//! at the equator reduces to
//!
//! ```text
//! tan(π(ν+m)/2) = (σ/2) γ(ν-m) γ(ν+m),   γ(x) = Γ(x/2+1/2)/Γ(x/2+1),
//! ```
//!
//! m = |m|, λ = ν(ν+1). For σ > 0 there is one root in each interval
//! (m+2j, m+2j+1), j >= 0; at σ = 0 it sits at the left end.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::gamma_ratio;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SectorEigenvalue {
    pub m: i64,
    pub branch: usize,
    pub nu: f64,
    pub lambda: f64,
    /// Parent Neumann cluster |m| + 2·branch.
    pub cluster: usize,
    /// |sin - (σ/2)γγ cos| at the root.
    pub residual: f64,
}

/// Secular function in t = ν - (m+2j) ∈ [0, 1], sign-normalized.
fn secular(sigma: f64, m: usize, j: usize, t: f64) -> Result<f64> {
    let nu = (m + 2 * j) as f64 + t;
    let g = gamma_ratio(nu - m as f64)? * gamma_ratio(nu + m as f64)?;
    let h = std::f64::consts::FRAC_PI_2 * t;
    Ok(h.sin() - 0.5 * sigma * g * h.cos())
}

pub fn constant_sigma_eigenvalue(sigma: f64, m: i64, branch: usize) -> Result<SectorEigenvalue> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::domain("separated solve needs constant σ >= 0"));
    }
    let mm = m.unsigned_abs() as usize;
    let cluster = mm + 2 * branch;
    if sigma == 0.0 {
        let nu = cluster as f64;
        return Ok(SectorEigenvalue {
            m,
            branch,
            nu,
            lambda: nu * (nu + 1.0),
            cluster,
            residual: 0.0,
        });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (flo, fhi) = (
        secular(sigma, mm, branch, lo)?,
        secular(sigma, mm, branch, hi)?,
    );
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::numerical(format!(
            "no sign change on branch (m={m}, j={branch})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if secular(sigma, mm, branch, mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let nu = cluster as f64 + t;
    Ok(SectorEigenvalue {
        m,
        branch,
        nu,
        lambda: nu * (nu + 1.0),
        cluster,
        residual: secular(sigma, mm, branch, t)?.abs(),
    })
}

/// All sector eigenvalues whose parent cluster is <= ell_max, sorted by λ.
pub fn constant_sigma_spectrum(sigma: f64, ell_max: usize) -> Result<Vec<SectorEigenvalue>> {
    let mut out = Vec::new();
    let l = ell_max as i64;
    for m in -l..=l {
        let mut j = 0;
        while m.unsigned_abs() as usize + 2 * j <= ell_max {
            out.push(constant_sigma_eigenvalue(sigma, m, j)?);
            j += 1;
        }
    }
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(out)
}
