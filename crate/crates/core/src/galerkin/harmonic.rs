//! Galerkin system over restrictions of sphere harmonics to the hemisphere.
//!
//! Neumann-type functions (ℓ-m even) are multiplied by (-1)^{(ℓ+m)/2} so that
//! their equator trace is `+A_{ℓ,m}/√(2π) e^{imφ}`. With that phase the
//! boundary block of a single degree coincides with the cluster matrix.
//!
//! The Gram matrix of this basis degrades quickly with L_max (cross-parity
//! overlaps make it nearly singular from L_max ≈ 10 on), so this route is a
//! small-L_max reference; production solves use [`super::robin_spectrum`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::boundary::BoundarySymbol;
use crate::error::{Error, Result};
use crate::harmonics::{a_squared, b_amplitude, normalized_legendre_column};
use crate::numerics::{generalized_eigen, HermitianMatrix, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasisEntry {
    pub ell: usize,
    pub m: i64,
    pub parity: Parity,
}

impl BasisEntry {
    fn new(ell: usize, m: i64) -> Self {
        let parity = if (ell as i64 - m).rem_euclid(2) == 0 {
            Parity::Neumann
        } else {
            Parity::Dirichlet
        };
        BasisEntry { ell, m, parity }
    }

    /// Phase (-1)^{(ℓ+m)/2} on Neumann-type entries, 1 otherwise.
    fn phase(&self) -> f64 {
        match self.parity {
            Parity::Neumann if ((self.ell as i64 + self.m) / 2).rem_euclid(2) == 1 => -1.0,
            _ => 1.0,
        }
    }

    /// Equator trace coefficient after the phase adjustment.
    pub fn trace(&self) -> f64 {
        match self.parity {
            Parity::Neumann => (a_squared(self.ell, self.m) / (2.0 * PI)).sqrt(),
            Parity::Dirichlet => 0.0,
        }
    }

    /// Normal-derivative coefficient ∂_n = ∂_θ at the equator.
    pub fn normal_derivative(&self) -> f64 {
        match self.parity {
            Parity::Neumann => 0.0,
            Parity::Dirichlet => b_amplitude(self.ell, self.m),
        }
    }
}

/// All (ℓ, m) with ℓ <= L_max, |m| <= ℓ; (L_max+1)² entries.
#[derive(Debug, Clone)]
pub struct GalerkinBasis {
    pub lmax: usize,
    pub entries: Vec<BasisEntry>,
}

impl GalerkinBasis {
    pub fn new(lmax: usize) -> Self {
        let mut entries = Vec::with_capacity((lmax + 1) * (lmax + 1));
        for ell in 0..=lmax {
            for m in -(ell as i64)..=ell as i64 {
                entries.push(BasisEntry::new(ell, m));
            }
        }
        GalerkinBasis { lmax, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub basis: GalerkinBasis,
    pub gram: HermitianMatrix,
    pub stiffness: HermitianMatrix,
    pub boundary: HermitianMatrix,
}

/// √2 λ_ℓ^{|m|}(x) with the (-1)^m factor for negative odd m and the
/// Neumann phase: the x-factor of the basis function at nodes `x`.
fn radial_values(e: &BasisEntry, cols: &[Vec<f64>]) -> Vec<f64> {
    let mm = e.m.unsigned_abs() as usize;
    let neg = if e.m < 0 && mm % 2 == 1 { -1.0 } else { 1.0 };
    let s = 2f64.sqrt() * neg * e.phase();
    cols.iter().map(|c| s * c[e.ell - mm]).collect()
}

/// Gram matrix: δ_{mm'} 2π ∫₀¹ u(x) v(x) dx. Same-parity blocks are exactly
/// the identity; cross-parity entries use Gauss–Legendre with
/// ⌈(ℓ+ℓ')/2⌉ + |m| + 2 nodes, exact for the polynomial integrand.
pub fn gram_matrix(basis: &GalerkinBasis) -> Result<HermitianMatrix> {
    if basis.lmax > 60 {
        return Err(Error::domain("gram matrix limited to L_max <= 60"));
    }
    let n = basis.len();
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        g[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        let u = basis.entries[i];
        for j in i + 1..n {
            let v = basis.entries[j];
            if u.m != v.m || u.parity == v.parity {
                continue;
            }
            let val = cross_overlap(&u, &v)?;
            g[i * n + j] = Complex64::new(val, 0.0);
            g[j * n + i] = Complex64::new(val, 0.0);
        }
    }
    HermitianMatrix::from_general(n, &g)
}

fn cross_overlap(u: &BasisEntry, v: &BasisEntry) -> Result<f64> {
    let mm = u.m.unsigned_abs() as usize;
    let nodes = (u.ell + v.ell).div_ceil(2) + mm + 2;
    let rule = QuadratureRule::gauss_legendre(nodes)?;
    let (x, w) = rule.mapped(0.0, 1.0);
    let lmax = u.ell.max(v.ell);
    let cols: Vec<Vec<f64>> = x
        .iter()
        .map(|&t| normalized_legendre_column(mm, lmax, t))
        .collect();
    let fu = radial_values(u, &cols);
    let fv = radial_values(v, &cols);
    Ok(2.0
        * PI
        * fu.iter()
            .zip(&fv)
            .zip(&w)
            .map(|((a, b), c)| a * b * c)
            .sum::<f64>())
}

/// Stiffness by Green's identity: entry (i, j) = ∫∇ψ_j·∇ψ̄_i
/// = ℓ_j(ℓ_j+1) G_ij + 2π (∂_n ψ_j)(trace ψ_i) δ_{m_i m_j}.
///
/// Both assembly directions are formed; the matrix is rejected if they
/// differ by more than 1e-9 relative, then symmetrized.
pub fn stiffness_matrix(basis: &GalerkinBasis, gram: &HermitianMatrix) -> Result<HermitianMatrix> {
    let n = basis.len();
    let mut k = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let u = basis.entries[i];
        for j in 0..n {
            let v = basis.entries[j];
            let lv = (v.ell * (v.ell + 1)) as f64;
            let mut val = lv * gram.get(i, j).re;
            if u.m == v.m {
                val += 2.0 * PI * v.normal_derivative() * u.trace();
            }
            k[i * n + j] = Complex64::new(val, 0.0);
        }
    }
    let norm = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            dev = dev.max((k[i * n + j] - k[j * n + i]).norm());
        }
    }
    if dev > 1e-9 * norm.max(1.0) {
        return Err(Error::numerical(format!(
            "stiffness assembly inconsistent: Hermiticity deviation {dev:e}"
        )));
    }
    HermitianMatrix::from_general(n, &k)
}

/// Boundary form: 2π σ̂_{m_i - m_j} trace_i trace_j on Neumann × Neumann pairs.
pub fn boundary_matrix(basis: &GalerkinBasis, sigma: &BoundarySymbol) -> Result<HermitianMatrix> {
    let e = &basis.entries;
    HermitianMatrix::from_upper(basis.len(), |i, j| {
        let (u, v) = (e[i], e[j]);
        if u.parity != Parity::Neumann || v.parity != Parity::Neumann {
            return Complex64::new(0.0, 0.0);
        }
        sigma.coeff(u.m - v.m) * (2.0 * PI * u.trace() * v.trace())
    })
}

pub fn galerkin_system(sigma: &BoundarySymbol, lmax: usize) -> Result<GalerkinSystem> {
    let basis = GalerkinBasis::new(lmax);
    let gram = gram_matrix(&basis)?;
    let stiffness = stiffness_matrix(&basis, &gram)?;
    let boundary = boundary_matrix(&basis, sigma)?;
    Ok(GalerkinSystem {
        basis,
        gram,
        stiffness,
        boundary,
    })
}

/// Generalized eigenvalues of (stiffness + boundary, gram) in the harmonic
/// basis. Fails with "gram matrix not positive definite" once the Gram
/// matrix is numerically singular.
pub fn robin_spectrum_harmonic(sigma: &BoundarySymbol, lmax: usize) -> Result<Vec<f64>> {
    let sys = galerkin_system(sigma, lmax)?;
    let a = sys.stiffness.add(&sys.boundary)?;
    generalized_eigen(&a, &sys.gram)
}
