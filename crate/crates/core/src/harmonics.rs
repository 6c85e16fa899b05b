//! Equator trace data of hemisphere spherical harmonics.
//!
//! Hemisphere harmonics are normalized in `L²` of the upper hemisphere:
//! `Y_ℓ^m(θ, φ) = √((2ℓ+1)/(2π) · (ℓ-m)!/(ℓ+m)!) P_ℓ^m(cos θ) e^{imφ}`,
//! which is `√2` times the full-sphere harmonic. `P_ℓ^m` carries the
//! Condon–Shortley phase, so `P_1^1(x) = -√(1-x²)`.
//!
//! On the equator, `Y_ℓ^m = (-1)^{(ℓ+m)/2} A_{ℓ,m}/√(2π) · e^{imφ}` when
//! `ℓ-m` is even, and `∂Y_ℓ^m/∂n = B_{ℓ,m} e^{imφ}` when `ℓ-m` is odd.
//! Both coefficients include the `1/√(2π)` of the angular factor.
//!
//! The sign `(-1)^{(ℓ+m)/2}` is dropped everywhere spectra are concerned;
//! conjugating by that diagonal unitary leaves every spectrum unchanged.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{log_gamma, log_half_ratio_asymptotic};

/// γ(x) = Γ(x/2 + 1/2) / Γ(x/2 + 1).
///
/// For x < 30 this is the exponential of a log-Gamma difference. Beyond
/// that the two log-Gammas are large and nearly equal, so the ratio is
/// taken from the Stirling series of the difference instead.
pub fn gamma_ratio(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma_ratio needs x >= 0, got {x}")));
    }
    let y = 0.5 * x;
    if y >= 15.0 {
        Ok(log_half_ratio_asymptotic(y).exp())
    } else {
        Ok((log_gamma(y + 0.5)? - log_gamma(y + 1.0)?).exp())
    }
}

fn gr(x: f64) -> f64 {
    gamma_ratio(x).expect("nonnegative argument")
}

/// A_{ℓ,m}² = (2ℓ+1)/π · γ(ℓ-m) γ(ℓ+m) for ℓ-m even, zero otherwise.
pub fn a_squared(ell: usize, m: i64) -> f64 {
    let l = ell as i64;
    if m.abs() > l || (l - m).rem_euclid(2) != 0 {
        return 0.0;
    }
    // fixed factor order keeps A_{ℓ,-m} = A_{ℓ,m} bit for bit
    let (lo, hi) = ((l - m.abs()) as f64, (l + m.abs()) as f64);
    (2.0 * ell as f64 + 1.0) / PI * gr(lo) * gr(hi)
}

/// B_{ℓ,m} = -√((2ℓ+1)/(2π) (ℓ-m)!/(ℓ+m)!) P_ℓ^m'(0) for ℓ-m odd, zero otherwise.
pub fn b_amplitude(ell: usize, m: i64) -> f64 {
    let l = ell as i64;
    if m.abs() > l || (l - m).rem_euclid(2) == 0 {
        return 0.0;
    }
    if m < 0 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return sign * b_amplitude(ell, -m);
    }
    let lf = ell as f64;
    let mf = m as f64;
    let lg = |x: f64| log_gamma(x).expect("positive argument");
    let log_norm =
        0.5 * ((2.0 * lf + 1.0).ln() - (2.0 * PI).ln() + lg(lf - mf + 1.0) - lg(lf + mf + 1.0));
    let log_deriv = (mf + 1.0) * std::f64::consts::LN_2 - 0.5 * PI.ln() + lg((lf + mf) / 2.0 + 1.0)
        - lg((lf - mf + 1.0) / 2.0);
    // sin(π(m+ℓ)/2) with m+ℓ odd
    let s = if ((l + m - 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    -s * (log_norm + log_deriv).exp()
}

/// Signed equator trace coefficient of `Y_ℓ^m`: (-1)^{(ℓ+m)/2} A_{ℓ,m}/√(2π).
pub fn trace_coefficient(ell: usize, m: i64) -> f64 {
    let a2 = a_squared(ell, m);
    if a2 == 0.0 {
        return 0.0;
    }
    let half = (ell as i64 + m) / 2;
    let sign = if half.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    sign * (a2 / (2.0 * PI)).sqrt()
}

/// Trace amplitudes of one cluster, indexed by m ∈ [-ℓ, ℓ].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceAmplitudes {
    pub ell: usize,
    /// A_{ℓ,m} at position m+ℓ.
    pub a: Vec<f64>,
    /// B_{ℓ,m} at position m+ℓ.
    pub b: Vec<f64>,
}

impl TraceAmplitudes {
    pub fn a(&self, m: i64) -> f64 {
        self.at(&self.a, m)
    }

    pub fn b(&self, m: i64) -> f64 {
        self.at(&self.b, m)
    }

    fn at(&self, v: &[f64], m: i64) -> f64 {
        let l = self.ell as i64;
        if m.abs() > l {
            0.0
        } else {
            v[(m + l) as usize]
        }
    }
}

pub fn trace_amplitudes(ell: usize) -> Result<TraceAmplitudes> {
    let l = ell as i64;
    let a: Vec<f64> = (-l..=l).map(|m| a_squared(ell, m).sqrt()).collect();
    let b: Vec<f64> = (-l..=l).map(|m| b_amplitude(ell, m)).collect();
    if a.iter().chain(&b).any(|v| !v.is_finite()) {
        return Err(Error::numerical(format!(
            "non-finite trace amplitude at ℓ={ell}"
        )));
    }
    Ok(TraceAmplitudes { ell, a, b })
}

/// Full-sphere orthonormal Legendre functions λ_ℓ^m(x) for ℓ = m..=lmax,
/// normalized so that λ_ℓ^m(cos θ) e^{imφ} is orthonormal on the sphere.
///
/// Three-term recurrence in ℓ on normalized values; stable for large m
/// where unnormalized `P_ℓ^m` overflows.
pub fn normalized_legendre_column(m: usize, lmax: usize, x: f64) -> Vec<f64> {
    if lmax < m {
        return vec![];
    }
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    let sx = (1.0 - x * x).max(0.0).sqrt();
    for k in 1..=m {
        let kf = k as f64;
        pmm *= -((2.0 * kf + 1.0) / (2.0 * kf)).sqrt() * sx;
    }
    let mut out = Vec::with_capacity(lmax - m + 1);
    out.push(pmm);
    if lmax == m {
        return out;
    }
    let mf = m as f64;
    let p1 = x * (2.0 * mf + 3.0).sqrt() * pmm;
    out.push(p1);
    let (mut a2, mut a1) = (pmm, p1);
    for l in m + 2..=lmax {
        let lf = l as f64;
        let c = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let d =
            (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
        let p = c * (x * a1 - d * a2);
        out.push(p);
        a2 = a1;
        a1 = p;
    }
    out
}

/// λ_ℓ^m(x) for 0 <= m <= ℓ (see [`normalized_legendre_column`]).
pub fn normalized_legendre(ell: usize, m: usize, x: f64) -> f64 {
    if m > ell {
        return 0.0;
    }
    *normalized_legendre_column(m, ell, x)
        .last()
        .expect("non-empty")
}

/// d/dx λ_ℓ^m(x) for |x| < 1, from
/// (1-x²) λ_ℓ' = -ℓ x λ_ℓ + √((2ℓ+1)(ℓ²-m²)/(2ℓ-1)) λ_{ℓ-1}.
pub fn normalized_legendre_derivative(ell: usize, m: usize, x: f64) -> f64 {
    if m > ell {
        return 0.0;
    }
    let col = normalized_legendre_column(m, ell, x);
    let lf = ell as f64;
    let mf = m as f64;
    let cur = col[ell - m];
    let prev = if ell > m { col[ell - m - 1] } else { 0.0 };
    let c = if ell > m {
        ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt()
    } else {
        0.0
    };
    (-lf * x * cur + c * prev) / (1.0 - x * x)
}

/// Associated Legendre function P_ℓ^m(x), Condon–Shortley phase, any |m| <= ℓ.
///
/// Evaluated through the normalized recurrence and rescaled in log space;
/// fails with a numerical error when the unnormalized value overflows.
pub fn legendre_p_at(ell: usize, m: i64, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!(
            "legendre_p_at needs |x| <= 1, got {x}"
        )));
    }
    let mm = m.unsigned_abs() as usize;
    if mm > ell {
        return Ok(0.0);
    }
    let lam = normalized_legendre(ell, mm, x);
    let lf = ell as f64;
    let mf = mm as f64;
    let log_fact = log_gamma(lf + mf + 1.0)? - log_gamma(lf - mf + 1.0)?;
    let base = (4.0 * PI / (2.0 * lf + 1.0)).ln();
    let value = if m >= 0 {
        lam * (0.5 * (base + log_fact)).exp()
    } else {
        let sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
        sign * lam * (0.5 * (base - log_fact)).exp()
    };
    if !value.is_finite() {
        return Err(Error::numerical(format!(
            "P_{ell}^{m}({x}) overflows double precision"
        )));
    }
    Ok(value)
}

/// A_{ℓ,m} recomputed from the Legendre recurrence: |Y_ℓ^m(π/2, ·)|·√(2π).
pub fn amplitude_from_recurrence(ell: usize, m: i64) -> f64 {
    let mm = m.unsigned_abs() as usize;
    if mm > ell {
        return 0.0;
    }
    // hemisphere factor √2 times √(2π)
    2.0 * PI.sqrt() * normalized_legendre(ell, mm, 0.0).abs()
}

/// B_{ℓ,m} recomputed from the recurrence: P_ℓ^m'(0) = (ℓ+m) P_{ℓ-1}^m(0).
pub fn b_from_recurrence(ell: usize, m: i64) -> f64 {
    let mm = m.unsigned_abs() as usize;
    if mm > ell {
        return 0.0;
    }
    let d = normalized_legendre_derivative(ell, mm, 0.0);
    // ∂_θ at θ = π/2 is -d/dx; hemisphere factor √2
    let v = -(2.0f64).sqrt() * d;
    if m < 0 && mm % 2 == 1 {
        -v
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    X,
    Y,
    Z,
}

/// Fourier coefficients of x_ℓ, y_ℓ or z_ℓ, indexed by m ∈ [-ℓ, ℓ].
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence {
    pub ell: usize,
    pub kind: SymbolKind,
    pub coeffs: Vec<f64>,
}

impl SymbolSequence {
    pub fn coeff(&self, m: i64) -> f64 {
        let l = self.ell as i64;
        if m.abs() > l {
            0.0
        } else {
            self.coeffs[(m + l) as usize]
        }
    }
}

/// Coefficient (2/√π)(1-(m/ℓ)²)^{-1/4} of z_ℓ, on |m| <= ℓ-2 with ℓ-m even.
pub fn z_coefficient(ell: usize, m: i64) -> f64 {
    let l = ell as i64;
    if m.abs() > l - 2 || (l - m).rem_euclid(2) != 0 {
        return 0.0;
    }
    let r = m as f64 / ell as f64;
    2.0 / PI.sqrt() * (1.0 - r * r).powf(-0.25)
}

pub fn symbol(ell: usize, kind: SymbolKind) -> Result<SymbolSequence> {
    if kind == SymbolKind::Z && ell < 1 {
        return Err(Error::domain("z symbol needs ℓ >= 1"));
    }
    let l = ell as i64;
    let coeffs = (-l..=l)
        .map(|m| match kind {
            SymbolKind::X => a_squared(ell, m).sqrt(),
            SymbolKind::Y => a_squared(ell, m),
            SymbolKind::Z => z_coefficient(ell, m),
        })
        .collect();
    Ok(SymbolSequence { ell, kind, coeffs })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AmplitudeDiagnostics {
    pub sum_a2: f64,
    pub sup_a2: f64,
    pub l1_deviation: f64,
}

/// Sum and sup of A² over one cluster, and the ℓ¹ distance of A² from
/// (4/π)(1-(m/ℓ)²)^{-1/2} over |m| <= ℓ-1.
pub fn lemma_b2_diagnostics(ell: usize) -> Result<AmplitudeDiagnostics> {
    if ell < 2 {
        return Err(Error::domain("amplitude diagnostics need ℓ >= 2"));
    }
    let l = ell as i64;
    let mut sum = 0.0;
    let mut sup: f64 = 0.0;
    let mut dev = 0.0;
    for m in (-l..=l).step_by(2) {
        let a2 = a_squared(ell, m);
        sum += a2;
        sup = sup.max(a2);
        if m.abs() <= l - 1 {
            let r = m as f64 / ell as f64;
            dev += (a2 - 4.0 / PI / (1.0 - r * r).sqrt()).abs();
        }
    }
    Ok(AmplitudeDiagnostics {
        sum_a2: sum,
        sup_a2: sup,
        l1_deviation: dev,
    })
}

/// sup_m |Σ_{k≠ℓ, k<=k_max} A_{k,m}² / (k(k+1) - λ)|, the Fourier
/// coefficients of the equator restriction of the reduced resolvent.
pub fn resolvent_coefficient_bound(ell: usize, lambda: f64, k_max: usize) -> Result<f64> {
    let lf = ell as f64;
    if !(lambda >= lf * lf && lambda <= (lf + 1.0) * (lf + 1.0)) {
        return Err(Error::domain(format!(
            "λ = {lambda} outside [ℓ², (ℓ+1)²] for ℓ = {ell}"
        )));
    }
    if k_max < 4 * ell {
        return Err(Error::domain("k_max must be at least 4ℓ"));
    }
    for k in 0..=k_max {
        if k == ell {
            continue;
        }
        let ev = (k * (k + 1)) as f64;
        if (ev - lambda).abs() <= 1e-12 * ev.max(1.0) {
            return Err(Error::domain(format!(
                "λ = {lambda} hits the Neumann eigenvalue k(k+1) with k = {k}"
            )));
        }
    }
    let km = k_max as i64;
    let mut sup: f64 = 0.0;
    for m in -km..=km {
        let mut s = 0.0;
        let start = m.unsigned_abs() as usize;
        for k in (start..=k_max).step_by(2) {
            if k == ell {
                continue;
            }
            s += a_squared(k, m) / ((k * (k + 1)) as f64 - lambda);
        }
        sup = sup.max(s.abs());
    }
    Ok(sup)
}
