//! Production Galerkin solver in an orthonormal basis.
//!
//! The span of hemisphere-restricted harmonics with ℓ <= L is, for each |m|,
//! `(1-x²)^{|m|/2} P(x)` with deg P <= L-|m|, times cos mφ or sin mφ
//! (x = cos θ). Taking P from polynomials orthonormal for the weight
//! `(1-x²)^m` on [0,1] makes the mass matrix the identity, so the
//! generalized problem becomes a standard symmetric one. Angular modes only
//! couple through the boundary term, which splits the matrix into blocks
//! indexed by connected components of the σ-coupling graph.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::boundary::BoundarySymbol;
use crate::error::{Error, Result};
use crate::numerics::{symmetric_eigenvalues, QuadratureRule, SymmetricMatrix};

/// Orthonormal radial factors for one |m| on Gauss nodes, plus values at x = 0
/// and the (real, symmetric) stiffness block.
#[derive(Debug, Clone)]
pub struct RadialBlock {
    pub m: usize,
    /// q_j(0), j = 0..=L-m.
    pub at_equator: Vec<f64>,
    /// Row-major (L-m+1)² stiffness ∫ (1-x²)|f'|² + m² f²/(1-x²) dx.
    pub stiffness: Vec<f64>,
}

impl RadialBlock {
    pub fn len(&self) -> usize {
        self.at_equator.len()
    }

    pub fn is_empty(&self) -> bool {
        self.at_equator.is_empty()
    }
}

/// Three-term recurrence coefficients of the orthonormal polynomials for
/// weight (1-x²)^m on [0,1], by Lanczos with full reorthogonalization.
fn recurrence(m: usize, count: usize, x: &[f64], w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let nq = x.len();
    let wt: Vec<f64> = x
        .iter()
        .zip(w)
        .map(|(&t, &g)| g * (1.0 - t * t).powi(m as i32))
        .collect();
    let dot = |a: &[f64], b: &[f64]| -> f64 { (0..nq).map(|i| wt[i] * a[i] * b[i]).sum() };
    let mut alpha = Vec::with_capacity(count);
    // beta[0] is the norm of the constant; beta[j] couples q_{j-1}, q_j.
    let mut beta = Vec::with_capacity(count);
    let c0 = wt.iter().sum::<f64>().sqrt();
    beta.push(c0);
    let mut qs: Vec<Vec<f64>> = vec![vec![1.0 / c0; nq]];
    for j in 0..count {
        let qj = &qs[j];
        let xq: Vec<f64> = (0..nq).map(|i| x[i] * qj[i]).collect();
        let a = dot(&xq, qj);
        alpha.push(a);
        if j + 1 == count {
            break;
        }
        let mut r: Vec<f64> = (0..nq).map(|i| xq[i] - a * qj[i]).collect();
        if j > 0 {
            let b = beta[j];
            for (ri, qp) in r.iter_mut().zip(&qs[j - 1]) {
                *ri -= b * qp;
            }
        }
        for _ in 0..2 {
            for q in &qs {
                let c = dot(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let b = dot(&r, &r).sqrt();
        if !(b > 1e-300) {
            return Err(Error::numerical("Lanczos breakdown in radial basis"));
        }
        beta.push(b);
        qs.push(r.iter().map(|v| v / b).collect());
    }
    Ok((alpha, beta))
}

/// Values and derivatives of q_0..q_{n-1} at `t` from the recurrence.
fn eval_polys(alpha: &[f64], beta: &[f64], t: f64, vals: &mut [f64], ders: &mut [f64]) {
    let n = vals.len();
    vals[0] = 1.0 / beta[0];
    ders[0] = 0.0;
    if n == 1 {
        return;
    }
    vals[1] = (t - alpha[0]) * vals[0] / beta[1];
    ders[1] = vals[0] / beta[1];
    for j in 1..n - 1 {
        vals[j + 1] = ((t - alpha[j]) * vals[j] - beta[j] * vals[j - 1]) / beta[j + 1];
        ders[j + 1] = ((t - alpha[j]) * ders[j] + vals[j] - beta[j] * ders[j - 1]) / beta[j + 1];
    }
}

pub fn radial_block(m: usize, lmax: usize) -> Result<RadialBlock> {
    if m > lmax {
        return Err(Error::domain("radial block needs m <= L_max"));
    }
    let n = lmax - m + 1;
    let rule = QuadratureRule::gauss_legendre(lmax + 12)?;
    let (x, w) = rule.mapped(0.0, 1.0);
    let (alpha, beta) = recurrence(m, n, &x, &w)?;
    let mut at_equator = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    eval_polys(&alpha, &beta, 0.0, &mut at_equator, &mut scratch);

    // K = Σ_nodes g (D Dᵀ + E Eᵀ) with
    // D_j = (1-x²)^{(m-1)/2}(-m x q_j + (1-x²) q_j'), E_j = m (1-x²)^{(m-1)/2} q_j.
    let mf = m as f64;
    let mut k = vec![0.0; n * n];
    let mut vals = vec![0.0; n];
    let mut ders = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for (&t, &g) in x.iter().zip(&w) {
        eval_polys(&alpha, &beta, t, &mut vals, &mut ders);
        let s = 1.0 - t * t;
        let pw = s.powf((mf - 1.0) / 2.0);
        for j in 0..n {
            d[j] = pw * (-mf * t * vals[j] + s * ders[j]);
            e[j] = mf * pw * vals[j];
        }
        for i in 0..n {
            let (di, ei) = (g * d[i], g * e[i]);
            for j in i..n {
                k[i * n + j] += di * d[j] + ei * e[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            k[i * n + j] = k[j * n + i];
        }
    }
    Ok(RadialBlock {
        m,
        at_equator,
        stiffness: k,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Angular {
    Cos(usize),
    Sin(usize),
}

impl Angular {
    fn m(self) -> usize {
        match self {
            Angular::Cos(m) | Angular::Sin(m) => m,
        }
    }

    fn norm(self) -> f64 {
        match self {
            Angular::Cos(0) => 1.0 / (2.0 * PI).sqrt(),
            _ => 1.0 / PI.sqrt(),
        }
    }
}

/// ∫ σ Φ_a Φ_b dφ for normalized real angular modes.
fn angular_integral(sigma: &BoundarySymbol, a: Angular, b: Angular) -> f64 {
    let re = |k: i64| sigma.coeff(k).re;
    let im = |k: i64| sigma.coeff(k).im;
    let raw = match (a, b) {
        (Angular::Cos(p), Angular::Cos(q)) => {
            let (p, q) = (p as i64, q as i64);
            PI * (re(p - q) + re(p + q))
        }
        (Angular::Sin(p), Angular::Sin(q)) => {
            let (p, q) = (p as i64, q as i64);
            PI * (re(p - q) - re(p + q))
        }
        (Angular::Cos(p), Angular::Sin(q)) => {
            let (p, q) = (p as i64, q as i64);
            -PI * (im(p + q) + im(q - p))
        }
        (Angular::Sin(_), Angular::Cos(_)) => return angular_integral(sigma, b, a),
    };
    raw * a.norm() * b.norm()
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Full Galerkin spectrum at truncation L_max.
#[derive(Debug, Clone)]
pub struct RobinSpectrum {
    pub lmax: usize,
    /// Ascending, (L_max+1)² values.
    pub eigenvalues: Vec<f64>,
    /// Clusters ℓ <= trusted_ell are considered converged.
    pub trusted_ell: usize,
}

impl RobinSpectrum {
    /// Sorted eigenvalues with indices ℓ(ℓ+1)/2 .. ℓ(ℓ+1)/2+ℓ: the ℓ-th
    /// cluster when every lower cluster holds its ℓ'+1 members.
    pub fn cluster_window(&self, ell: usize) -> Result<Vec<f64>> {
        if ell > self.trusted_ell {
            return Err(Error::domain(format!(
                "cluster ℓ={ell} beyond trusted range ℓ <= {}",
                self.trusted_ell
            )));
        }
        let start = ell * (ell + 1) / 2;
        Ok(self.eigenvalues[start..start + ell + 1].to_vec())
    }

    /// Window eigenvalues minus ℓ(ℓ+1).
    pub fn cluster_gaps(&self, ell: usize) -> Result<Vec<f64>> {
        let c = (ell * (ell + 1)) as f64;
        Ok(self.cluster_window(ell)?.iter().map(|v| v - c).collect())
    }

    /// Largest eigenvalue belonging to the trusted clusters.
    pub fn trusted_cutoff(&self) -> f64 {
        let t = self.trusted_ell;
        self.eigenvalues[(t + 1) * (t + 2) / 2 - 1]
    }
}

/// Robin spectrum of the hemisphere truncated to degrees <= L_max.
pub fn robin_spectrum(sigma: &BoundarySymbol, lmax: usize) -> Result<RobinSpectrum> {
    if lmax < 4 + 2 * sigma.degree() {
        return Err(Error::domain(format!(
            "L_max = {lmax} below 4 + 2·degree(σ) = {}",
            4 + 2 * sigma.degree()
        )));
    }
    let blocks: Vec<RadialBlock> = (0..=lmax)
        .into_par_iter()
        .map(|m| radial_block(m, lmax))
        .collect::<Result<_>>()?;

    let mut nodes = vec![Angular::Cos(0)];
    for m in 1..=lmax {
        nodes.push(Angular::Cos(m));
        nodes.push(Angular::Sin(m));
    }
    let nn = nodes.len();
    let mut coupling = vec![0.0; nn * nn];
    let mut parent: Vec<usize> = (0..nn).collect();
    for a in 0..nn {
        for b in a..nn {
            let v = angular_integral(sigma, nodes[a], nodes[b]);
            coupling[a * nn + b] = v;
            coupling[b * nn + a] = v;
            if v != 0.0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..nn {
        let r = find(&mut parent, a);
        comps.entry(r).or_default().push(a);
    }
    let comps: Vec<Vec<usize>> = comps.into_values().collect();

    let parts: Vec<Vec<f64>> = comps
        .par_iter()
        .map(|members| {
            let offsets: Vec<usize> = members
                .iter()
                .scan(0, |acc, &a| {
                    let o = *acc;
                    *acc += blocks[nodes[a].m()].len();
                    Some(o)
                })
                .collect();
            let dim: usize = members.iter().map(|&a| blocks[nodes[a].m()].len()).sum();
            let mut mat = SymmetricMatrix::zeros(dim);
            for (ia, &a) in members.iter().enumerate() {
                let ba = &blocks[nodes[a].m()];
                let oa = offsets[ia];
                let na = ba.len();
                for i in 0..na {
                    for j in i..na {
                        mat.set(oa + i, oa + j, ba.stiffness[i * na + j]);
                    }
                }
                for (ib, &b) in members.iter().enumerate().skip(ia) {
                    let c = coupling[a * nn + b];
                    if c == 0.0 {
                        continue;
                    }
                    let bb = &blocks[nodes[b].m()];
                    let ob = offsets[ib];
                    for i in 0..na {
                        let qi = ba.at_equator[i] * c;
                        let j0 = if ia == ib { i } else { 0 };
                        for j in j0..bb.len() {
                            mat.add_to(oa + i, ob + j, qi * bb.at_equator[j]);
                        }
                    }
                }
            }
            symmetric_eigenvalues(&mat)
        })
        .collect::<Result<_>>()?;

    let mut eigenvalues: Vec<f64> = parts.into_iter().flatten().collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    Ok(RobinSpectrum {
        lmax,
        eigenvalues,
        trusted_ell: lmax / 2,
    })
}
