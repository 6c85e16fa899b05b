use num_complex::Complex64;

use super::matrix::{HermitianMatrix, SymmetricMatrix};
use crate::error::{Error, Result};

pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 30;

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// unitary matrix of eigenvectors (column k belongs to `values[k]`), row-major.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Complex64>,
    pub sweeps: usize,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }
}

fn off_norm_real(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn off_norm_complex(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (t, c, t * c)
}

/// Cyclic Jacobi on a real symmetric matrix stored row-major in `a`.
/// Returns the number of sweeps; `v` accumulates rotations when present.
fn jacobi_real(a: &mut [f64], n: usize, mut v: Option<&mut [f64]>) -> Result<usize> {
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        if off_norm_real(a, n) <= JACOBI_TOL * norm {
            return Ok(sweep);
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let (t, c, s) = rotation(app, aqq, apq);
                let tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = akp - s * (akq + tau * akp);
                    let nq = akq + s * (akp - tau * akq);
                    a[k * n + p] = np;
                    a[p * n + k] = np;
                    a[k * n + q] = nq;
                    a[q * n + k] = nq;
                }
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp - s * (vkq + tau * vkp);
                        v[k * n + q] = vkq + s * (vkp - tau * vkq);
                    }
                }
            }
        }
    }
    Err(Error::numerical(format!(
        "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (dim {n})"
    )))
}

fn jacobi_complex(a: &mut [Complex64], n: usize, mut v: Option<&mut [Complex64]>) -> Result<usize> {
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for sweep in 0..=JACOBI_MAX_SWEEPS {
        if off_norm_complex(a, n) <= JACOBI_TOL * norm {
            return Ok(sweep);
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[p * n + q];
                let mag = b.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = b / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let (t, c, s) = rotation(app, aqq, mag);
                // R = [[c, s e^{ia}], [-s e^{-ia}, c]] on rows/cols (p, q)
                let r_pq = phase * s;
                let r_qp = -phase.conj() * s;
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = akp * c + akq * r_qp;
                    let nq = akp * r_pq + akq * c;
                    a[k * n + p] = np;
                    a[p * n + k] = np.conj();
                    a[k * n + q] = nq;
                    a[q * n + k] = nq.conj();
                }
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c + vkq * r_qp;
                        v[k * n + q] = vkp * r_pq + vkq * c;
                    }
                }
            }
        }
    }
    Err(Error::numerical(format!(
        "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (dim {n})"
    )))
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    idx
}

/// Full eigen-decomposition by cyclic Jacobi. Real input takes a real
/// rotation path with identical convergence criteria.
pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<Eigen> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::input("hermitian_eigen needs dim >= 1"));
    }
    if !m.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let (diag, vecs, sweeps) = if m.is_real() {
        let mut a = m.real_part();
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        let sweeps = jacobi_real(&mut a, n, Some(&mut v))?;
        let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        let vecs: Vec<Complex64> = v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        (diag, vecs, sweeps)
    } else {
        let mut a = m.as_slice().to_vec();
        let mut v = HermitianMatrix::identity(n).as_slice().to_vec();
        let sweeps = jacobi_complex(&mut a, n, Some(&mut v))?;
        let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        (diag, v, sweeps)
    };
    let order = sorted_order(&diag);
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + new_col] = vecs[r * n + old_col];
        }
    }
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

/// Eigenvalues only, by cyclic Jacobi (no eigenvector accumulation).
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::input("hermitian_eigenvalues needs dim >= 1"));
    }
    if !m.is_finite() {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let mut vals: Vec<f64> = if m.is_real() {
        let mut a = m.real_part();
        jacobi_real(&mut a, n, None)?;
        (0..n).map(|i| a[i * n + i]).collect()
    } else {
        let mut a = m.as_slice().to_vec();
        jacobi_complex(&mut a, n, None)?;
        (0..n).map(|i| a[i * n + i].re).collect()
    };
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Lower Cholesky factor of a Hermitian positive definite matrix.
/// Returns the factor and the smallest pivot (diagonal of L).
pub fn cholesky(g: &HermitianMatrix) -> Result<(Vec<Complex64>, f64)> {
    let n = g.dim();
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let mut d = g.get(j, j).re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::numerical("gram matrix not positive definite"));
        }
        let ljj = d.sqrt();
        min_pivot = min_pivot.min(ljj);
        l[j * n + j] = Complex64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = g.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok((l, min_pivot))
}

/// Solves L X = B in place for lower-triangular L; B is n×n row-major.
fn forward_solve(l: &[Complex64], b: &mut [Complex64], n: usize) {
    for col in 0..n {
        for i in 0..n {
            let mut s = b[i * n + col];
            for k in 0..i {
                s -= l[i * n + k] * b[k * n + col];
            }
            b[i * n + col] = s / l[i * n + i];
        }
    }
}

/// Eigenvalues of A c = λ G c via G = L L*, reduction to L⁻¹ A L⁻*.
pub fn generalized_eigen(a: &HermitianMatrix, g: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    if g.dim() != n {
        return Err(Error::Dimension(format!("A is {n}, G is {}", g.dim())));
    }
    let (l, _) = cholesky(g)?;
    let mut y = a.as_slice().to_vec();
    forward_solve(&l, &mut y, n);
    // y = L⁻¹A; (L⁻¹A)* = A L⁻*, so L⁻¹ (L⁻¹A)* = L⁻¹ A L⁻*
    let mut z = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            z[i * n + j] = y[j * n + i].conj();
        }
    }
    forward_solve(&l, &mut z, n);
    let c = HermitianMatrix::from_general(n, &z)?;
    hermitian_eigenvalues(&c)
}

/// Eigenvalues of a real symmetric matrix by Householder reduction to
/// tridiagonal form and implicit-shift QL. Used for the large Galerkin
/// blocks where eigenvectors are not needed.
pub fn symmetric_eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(vec![]);
    }
    if m.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::input("matrix has non-finite entries"));
    }
    let mut a = m.as_slice().to_vec();
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder tridiagonalization (lower triangle). Returns diagonal d and
/// sub-diagonal e with e[i] coupling i-1 and i (e[0] = 0).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut p = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                // p = A_l u / h using the lower triangle row by row
                for x in p.iter_mut().take(l + 1) {
                    *x = 0.0;
                }
                for j in 0..=l {
                    let uj = a[i * n + j];
                    let row = &a[j * n..j * n + j];
                    let mut acc = 0.0;
                    for (k, &ajk) in row.iter().enumerate() {
                        acc += ajk * a[i * n + k];
                        p[k] += ajk * uj;
                    }
                    p[j] += acc + a[j * n + j] * uj;
                }
                let mut f = 0.0;
                for j in 0..=l {
                    p[j] /= h;
                    f += p[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    p[j] -= hh * a[i * n + j];
                }
                for j in 0..=l {
                    let fj = a[i * n + j];
                    let gj = p[j];
                    for k in 0..=j {
                        a[j * n + k] -= fj * p[k] + gj * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    e[0] = 0.0;
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues left in d.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::numerical("tridiagonal QL did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Number of entries with |λ| > rel_tol · scale.
pub fn numerical_rank(eigenvalues: &[f64], scale: f64, rel_tol: f64) -> usize {
    let cut = rel_tol * scale;
    eigenvalues.iter().filter(|v| v.abs() > cut).count()
}

#[derive(Debug, Clone, Copy)]
pub struct TraceBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// |Tr f(A) - Tr f(B)| against sup|f'| · ‖A - B‖_{S₁}; f(x) = Σ c_k x^k.
pub fn trace_difference_bound_check(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    f: &[f64],
    range: (f64, f64),
) -> Result<TraceBound> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("{} vs {}", a.dim(), b.dim())));
    }
    let ea = hermitian_eigenvalues(a)?;
    let eb = hermitian_eigenvalues(b)?;
    let tr_a: f64 = ea.iter().map(|&x| poly_eval(f, x)).sum();
    let tr_b: f64 = eb.iter().map(|&x| poly_eval(f, x)).sum();
    let lhs = (tr_a - tr_b).abs();
    let df = poly_derivative(f);
    let (lo, hi) = range;
    let grid = 10_000;
    let sup = (0..=grid)
        .map(|i| poly_eval(&df, lo + (hi - lo) * i as f64 / grid as f64).abs())
        .fold(0.0, f64::max);
    let s1: f64 = hermitian_eigenvalues(&a.sub(b)?)?
        .iter()
        .map(|x| x.abs())
        .sum();
    let rhs = sup * s1;
    Ok(TraceBound {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9),
    })
}
