//! The Robin coefficient σ on the equator as a real trigonometric
//! polynomial `σ(φ) = Σ_{|k|<=D} σ̂_k e^{ikφ}` with `σ̂_k = (1/2π)∫σ e^{-ikφ}dφ`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harmonics::SymbolSequence;
use crate::numerics::HermitianMatrix;

pub const MAX_DEGREE: usize = 512;
const SYMMETRY_TOL: f64 = 1e-12;

/// Fourier coefficients σ̂_k, k ∈ [-D, D], with σ̂_{-k} = conj(σ̂_k) exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySymbol {
    degree: usize,
    coeffs: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl BoundarySymbol {
    /// Builds σ from (k, σ̂_k) pairs. Missing partners are filled in by
    /// symmetry; given partners must be conjugate to within 1e-12 and are
    /// then averaged. Repeated k values add up.
    pub fn from_coeffs(pairs: &[(i64, Complex64)]) -> Result<Self> {
        let d = pairs
            .iter()
            .map(|(k, _)| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        if d > MAX_DEGREE {
            return Err(Error::input(format!("degree {d} exceeds {MAX_DEGREE}")));
        }
        let mut raw = vec![c(0.0, 0.0); 2 * d + 1];
        let mut seen = vec![false; 2 * d + 1];
        for &(k, v) in pairs {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::input(format!("coefficient {k} is not finite")));
            }
            let i = (k + d as i64) as usize;
            raw[i] += v;
            seen[i] = true;
        }
        let scale = raw.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let mut coeffs = vec![c(0.0, 0.0); 2 * d + 1];
        for k in 0..=d as i64 {
            let ip = (k + d as i64) as usize;
            let im = (-k + d as i64) as usize;
            let (p, q) = (raw[ip], raw[im]);
            let v = match (seen[ip], seen[im]) {
                (true, true) => {
                    if (p - q.conj()).norm() > SYMMETRY_TOL * scale {
                        return Err(Error::input(format!(
                            "coefficients at ±{k} are not conjugate (σ must be real)"
                        )));
                    }
                    0.5 * (p + q.conj())
                }
                (true, false) => p,
                (false, true) => q.conj(),
                (false, false) => c(0.0, 0.0),
            };
            if k == 0 {
                coeffs[ip] = c(v.re, 0.0);
                if seen[ip] && v.im.abs() > SYMMETRY_TOL * scale {
                    return Err(Error::input("σ̂₀ must be real"));
                }
            } else {
                coeffs[ip] = v;
                coeffs[im] = v.conj();
            }
        }
        Ok(BoundarySymbol { degree: d, coeffs }.trimmed())
    }

    /// σ(φ) = c0 + Σ_k (a_k cos kφ + b_k sin kφ).
    pub fn from_trig(c0: f64, cos: &[(usize, f64)], sin: &[(usize, f64)]) -> Result<Self> {
        let mut pairs = vec![(0i64, c(c0, 0.0))];
        for &(k, a) in cos {
            if k == 0 {
                pairs.push((0, c(a, 0.0)));
            } else {
                pairs.push((k as i64, c(0.5 * a, 0.0)));
            }
        }
        for &(k, b) in sin {
            if k > 0 {
                pairs.push((k as i64, c(0.0, -0.5 * b)));
            }
        }
        Self::from_coeffs(&pairs)
    }

    pub fn constant(value: f64) -> Self {
        BoundarySymbol {
            degree: 0,
            coeffs: vec![c(value, 0.0)],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    fn trimmed(mut self) -> Self {
        while self.degree > 0 {
            let top = self.coeffs[2 * self.degree];
            if top.re != 0.0 || top.im != 0.0 {
                break;
            }
            self.coeffs.remove(2 * self.degree);
            self.coeffs.remove(0);
            self.degree -= 1;
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// σ̂_k, zero outside [-D, D].
    pub fn coeff(&self, k: i64) -> Complex64 {
        let d = self.degree as i64;
        if k.abs() > d {
            c(0.0, 0.0)
        } else {
            self.coeffs[(k + d) as usize]
        }
    }

    pub fn mean(&self) -> f64 {
        self.coeff(0).re
    }

    /// (k, σ̂_k) for every stored k, ascending.
    pub fn pairs(&self) -> Vec<(i64, Complex64)> {
        let d = self.degree as i64;
        (-d..=d).map(|k| (k, self.coeff(k))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// True when every nonzero coefficient sits at an odd index.
    pub fn is_odd(&self) -> bool {
        self.pairs()
            .iter()
            .all(|(k, v)| k % 2 != 0 || (v.re == 0.0 && v.im == 0.0))
    }

    /// True when every nonzero coefficient sits at an even index.
    pub fn is_even(&self) -> bool {
        self.pairs()
            .iter()
            .all(|(k, v)| k % 2 == 0 || (v.re == 0.0 && v.im == 0.0))
    }

    /// Σ σ̂_k e^{ikφ}; the imaginary residue must stay below 1e-12.
    pub fn evaluate(&self, phi: f64) -> Result<f64> {
        let d = self.degree as i64;
        let mut s = c(0.0, 0.0);
        let scale: f64 = self.coeffs.iter().map(|z| z.norm()).sum::<f64>().max(1.0);
        for k in -d..=d {
            s += self.coeff(k) * Complex64::from_polar(1.0, k as f64 * phi);
        }
        if s.im.abs() > SYMMETRY_TOL * scale {
            return Err(Error::numerical(format!(
                "σ({phi}) has imaginary part {}: symmetry violated",
                s.im
            )));
        }
        Ok(s.re)
    }

    /// Real-valued evaluation without the residue check, by pairing ±k.
    pub fn value(&self, phi: f64) -> f64 {
        let mut s = self.coeff(0).re;
        for k in 1..=self.degree as i64 {
            let z = self.coeff(k) * Complex64::from_polar(1.0, k as f64 * phi);
            s += 2.0 * z.re;
        }
        s
    }

    /// ½(σ(φ) + σ(φ+π)): keeps even-index coefficients.
    pub fn even_part(&self) -> Self {
        self.filter(|k| k % 2 == 0)
    }

    /// ½(σ(φ) - σ(φ+π)): keeps odd-index coefficients.
    pub fn odd_part(&self) -> Self {
        self.filter(|k| k % 2 != 0)
    }

    pub fn split(&self) -> EvenOddSplit {
        EvenOddSplit {
            even: self.even_part(),
            odd: self.odd_part(),
        }
    }

    fn filter(&self, keep: impl Fn(i64) -> bool) -> Self {
        let d = self.degree as i64;
        let coeffs = (-d..=d)
            .map(|k| if keep(k) { self.coeff(k) } else { c(0.0, 0.0) })
            .collect();
        BoundarySymbol {
            degree: self.degree,
            coeffs,
        }
        .trimmed()
    }

    pub fn scaled(&self, a: f64) -> Self {
        BoundarySymbol {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|z| z * a).collect(),
        }
        .trimmed()
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.degree.max(other.degree) as i64;
        let coeffs = (-d..=d).map(|k| self.coeff(k) + other.coeff(k)).collect();
        BoundarySymbol {
            degree: d as usize,
            coeffs,
        }
        .trimmed()
    }

    /// σ(φ - φ₀): σ̂_k ↦ σ̂_k e^{-ikφ₀}.
    pub fn shifted(&self, phi0: f64) -> Self {
        let d = self.degree as i64;
        let coeffs = (-d..=d)
            .map(|k| self.coeff(k) * Complex64::from_polar(1.0, -(k as f64) * phi0))
            .collect();
        BoundarySymbol {
            degree: self.degree,
            coeffs,
        }
    }

    /// max |σ| over a uniform grid of n points.
    pub fn sup_on_grid(&self, n: usize) -> f64 {
        (0..n)
            .map(|j| self.value(-PI + 2.0 * PI * j as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Samples σ on the uniform grid φ_j = -π + 2πj/n.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| self.value(-PI + 2.0 * PI * j as f64 / n as f64))
            .collect()
    }

    /// |σ| truncated to the given degree via sampling on 16·degree points.
    pub fn abs_symbol(&self, degree: usize) -> Result<Self> {
        let n = (16 * degree).max(64);
        let v: Vec<f64> = self.samples(n).into_iter().map(f64::abs).collect();
        from_samples(&v, degree)
    }

    pub fn to_spec(&self) -> SigmaSpec {
        SigmaSpec::Coeffs {
            coeffs: self
                .pairs()
                .into_iter()
                .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
                .map(|(k, v)| (k, v.re, v.im))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddSplit {
    pub even: BoundarySymbol,
    pub odd: BoundarySymbol,
}

/// Fourier coefficients from samples on φ_j = -π + 2πj/N by the trapezoid
/// rule, truncated to degree D. Requires N >= 4D + 4.
pub fn from_samples(values: &[f64], degree: usize) -> Result<BoundarySymbol> {
    let n = values.len();
    if degree > MAX_DEGREE {
        return Err(Error::input(format!(
            "degree {degree} exceeds {MAX_DEGREE}"
        )));
    }
    if n < 4 * degree + 4 {
        return Err(Error::input(format!(
            "{n} samples alias degree {degree}: need at least {}",
            4 * degree + 4
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("samples must be finite"));
    }
    let nf = n as f64;
    let coeff = |k: i64| -> Complex64 {
        let mut s = c(0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let phi = -PI + 2.0 * PI * j as f64 / nf;
            s += v * Complex64::from_polar(1.0, -(k as f64) * phi);
        }
        s / nf
    };
    let mut pairs = Vec::with_capacity(2 * degree + 1);
    for k in 0..=degree as i64 {
        let p = coeff(k);
        if k == 0 {
            pairs.push((0, c(p.re, 0.0)));
        } else {
            let q = coeff(-k);
            let v = 0.5 * (p + q.conj());
            pairs.push((k, v));
            pairs.push((-k, v.conj()));
        }
    }
    BoundarySymbol::from_coeffs(&pairs)
}

/// M[σ] compressed to span{e^{imφ} : m ∈ indices}: entry (m', m) = σ̂_{m'-m}.
pub fn multiplication_matrix(s: &BoundarySymbol, indices: &[i64]) -> HermitianMatrix {
    HermitianMatrix::from_upper(indices.len(), |i, j| s.coeff(indices[i] - indices[j]))
        .expect("finite coefficients")
}

/// C[a] on the given indices: diagonal with the symbol's coefficients.
pub fn convolution_matrix(sym: &SymbolSequence, indices: &[i64]) -> HermitianMatrix {
    let diag: Vec<f64> = indices.iter().map(|&m| sym.coeff(m)).collect();
    HermitianMatrix::diagonal(&diag)
}

/// JSON form of σ: `{"type":"coeffs","coeffs":[[k,re,im],…]}` or
/// `{"type":"samples","values":[…],"degree":D}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SigmaSpec {
    Coeffs { coeffs: Vec<(i64, f64, f64)> },
    Samples { values: Vec<f64>, degree: usize },
}

impl SigmaSpec {
    pub fn to_symbol(&self) -> Result<BoundarySymbol> {
        match self {
            SigmaSpec::Coeffs { coeffs } => {
                let pairs: Vec<(i64, Complex64)> =
                    coeffs.iter().map(|&(k, re, im)| (k, c(re, im))).collect();
                BoundarySymbol::from_coeffs(&pairs)
            }
            SigmaSpec::Samples { values, degree } => from_samples(values, *degree),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("sigma JSON: {e}")))
    }

    /// Inline JSON when the argument starts with `{`, otherwise a file path.
    pub fn from_arg(arg: &str) -> Result<Self> {
        let t = arg.trim_start();
        if t.starts_with('{') {
            Self::parse(t)
        } else {
            let text = std::fs::read_to_string(Path::new(arg))
                .map_err(|e| Error::input(format!("sigma file {arg}: {e}")))?;
            Self::parse(&text)
        }
    }
}
