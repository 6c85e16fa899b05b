//! One-dimensional companion problems on [0, 1].
//!
//! Robin: `-u'' = λu`, `-u'(0) + σu(0) = 0`, `u'(1) = 0`.
//! Step:  `-u'' + (σ/ε)χ_{(0,ε)} u = μu`, `u'(0) = u'(1) = 0`.
//!
//! Modes are numbered from n = 1; the n-th mode of either problem sits near
//! the Neumann eigenvalue π²(n-1)², and gaps are measured from it.
//!
//! Robin roots: with `u = cos(k(1-x))` the condition at 0 reads
//! `F(k) = k sin k - σ cos k = 0`. For σ >= 0 mode n has
//! k ∈ [π(n-1), π(n-1)+π/2); for σ < 0 and n >= 2, k ∈ (π(n-1)-π/2, π(n-1)],
//! and mode 1 is negative, λ = -κ² with κ tanh κ = -σ.
//!
//! Step roots: the Neumann-at-0 solution is continued in closed form across
//! both constant pieces. Its oscillation angle at x = 1 fixes the mode index
//! (it equals π/2 + (n-1)π at the n-th eigenvalue), and the matching
//! Wronskian at x = ε gives the secular function.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Sl1dVariant {
    Robin,
    Step { epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl1dProblem {
    pub sigma: f64,
    #[serde(flatten)]
    pub variant: Sl1dVariant,
}

impl Sl1dProblem {
    pub fn robin(sigma: f64) -> Self {
        Sl1dProblem {
            sigma,
            variant: Sl1dVariant::Robin,
        }
    }

    pub fn step(sigma: f64, epsilon: f64) -> Self {
        Sl1dProblem {
            sigma,
            variant: Sl1dVariant::Step { epsilon },
        }
    }

    pub fn eigenvalue(&self, n: usize) -> Result<f64> {
        match self.variant {
            Sl1dVariant::Robin => robin_eigenvalue(self.sigma, n),
            Sl1dVariant::Step { epsilon } => step_eigenvalue(self.sigma, epsilon, n),
        }
    }

    /// Normalized secular residual at a candidate eigenvalue.
    pub fn residual(&self, lambda: f64) -> f64 {
        match self.variant {
            Sl1dVariant::Robin => robin_residual(self.sigma, lambda),
            Sl1dVariant::Step { epsilon } => step_residual(self.sigma, epsilon, lambda),
        }
    }
}

/// π²(n-1)², the n-th Neumann eigenvalue.
pub fn neumann_eigenvalue(n: usize) -> f64 {
    let k = PI * (n as f64 - 1.0);
    k * k
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn robin_eigenvalue(sigma: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("modes are numbered from 1"));
    }
    if !sigma.is_finite() {
        return Err(Error::domain("σ must be finite"));
    }
    if sigma == 0.0 {
        return Ok(neumann_eigenvalue(n));
    }
    if sigma < 0.0 && n == 1 {
        let g = |k: f64| k * k.tanh() + sigma;
        let hi = sigma.abs() + 1.0;
        if !(g(hi) > 0.0) {
            return Err(Error::numerical("negative Robin mode not bracketed"));
        }
        let kappa = bisect(0.0, hi, g);
        return Ok(-kappa * kappa);
    }
    let base = PI * (n as f64 - 1.0);
    // G(t) = (-1)^{n-1} F(base + t)
    let g = |t: f64| (base + t) * t.sin() - sigma * t.cos();
    let (lo, hi) = if sigma > 0.0 {
        (0.0, FRAC_PI_2)
    } else {
        (-FRAC_PI_2, 0.0)
    };
    if g(lo).signum() == g(hi).signum() {
        return Err(Error::numerical(format!("Robin mode {n} not bracketed")));
    }
    let k = base + bisect(lo, hi, g);
    Ok(k * k)
}

/// |k sin k - σ cos k|/max(k + |σ|, 1) for λ = k² >= 0;
/// |κ tanh κ + σ|/max(κ + |σ|, 1) for λ = -κ².
pub fn robin_residual(sigma: f64, lambda: f64) -> f64 {
    if lambda >= 0.0 {
        let k = lambda.sqrt();
        (k * k.sin() - sigma * k.cos()).abs() / (k + sigma.abs()).max(1.0)
    } else {
        let kappa = (-lambda).sqrt();
        (kappa * kappa.tanh() + sigma).abs() / (kappa + sigma.abs()).max(1.0)
    }
}

/// Value and derivative at distance h of the solution of -u'' = s u with
/// u(0) = 1, u'(0) = 0.
fn neumann_solution(s: f64, h: f64) -> (f64, f64) {
    if s > 0.0 {
        let w = s.sqrt();
        ((w * h).cos(), -w * (w * h).sin())
    } else if s < 0.0 {
        let w = (-s).sqrt();
        ((w * h).cosh(), w * (w * h).sinh())
    } else {
        (1.0, 0.0)
    }
}

/// Matching Wronskian at x = ε and its scale: with w = √max(|μ|, 1) the
/// ratio is the sine of the angle between (u, u'/w) of the two pieces.
fn step_wronskian(sigma: f64, eps: f64, mu: f64) -> (f64, f64) {
    let (ul, dl) = neumann_solution(mu - sigma / eps, eps);
    // right piece is the Neumann solution in 1-x, so its x-derivative flips sign
    let (ur, dr) = neumann_solution(mu, 1.0 - eps);
    let dr = -dr;
    let w = mu.abs().max(1.0).sqrt();
    let scale = w * ul.hypot(dl / w) * ur.hypot(dr / w);
    (ul * dr - dl * ur, scale)
}

pub fn step_residual(sigma: f64, eps: f64, mu: f64) -> f64 {
    let (w, scale) = step_wronskian(sigma, eps, mu);
    w.abs() / scale
}

/// Angle θ of (u, u') = r(sin θ, cos θ) carried across a piece of length h
/// where -u'' = s u.
fn advance_angle(theta: f64, s: f64, h: f64) -> f64 {
    if s > 0.0 {
        // in (u, u'/w) the angle turns uniformly at rate w
        let w = s.sqrt();
        let k = (theta / PI).round();
        let r = theta - k * PI;
        let psi = k * PI + (w * r.tan()).atan() + w * h;
        let k2 = (psi / PI).round();
        let r2 = psi - k2 * PI;
        k2 * PI + (r2.tan() / w).atan()
    } else {
        // u has at most one zero here, so the angle moves by less than π
        let (u0, d0) = theta.sin_cos();
        let (u1, d1) = if s < 0.0 {
            let w = (-s).sqrt();
            let t = (w * h).tanh();
            (u0 + d0 / w * t, u0 * w * t + d0)
        } else {
            (u0 + h * d0, d0)
        };
        let mut delta = u1.atan2(d1) - u0.atan2(d0);
        if delta > PI {
            delta -= 2.0 * PI;
        } else if delta <= -PI {
            delta += 2.0 * PI;
        }
        theta + delta
    }
}

/// Oscillation angle at x = 1 of the Neumann-at-0 solution.
fn step_angle(sigma: f64, eps: f64, mu: f64) -> f64 {
    let th = advance_angle(FRAC_PI_2, mu - sigma / eps, eps);
    advance_angle(th, mu, 1.0 - eps)
}

pub fn step_eigenvalue(sigma: f64, eps: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("modes are numbered from 1"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("ε must lie in (0, 1), got {eps}")));
    }
    if !sigma.is_finite() {
        return Err(Error::domain("σ must be finite"));
    }
    if sigma == 0.0 {
        return Ok(neumann_eigenvalue(n));
    }
    // 0 <= potential <= σ/ε (or reversed) moves each eigenvalue by at most σ/ε
    let base = neumann_eigenvalue(n);
    let v = sigma / eps;
    let mut lo = base + v.min(0.0) - 1.0;
    let mut hi = base + v.max(0.0) + 1.0;
    let target = FRAC_PI_2 + (n as f64 - 1.0) * PI;
    let f = |mu: f64| step_angle(sigma, eps, mu) - target;
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::numerical(format!("step mode {n} not bracketed")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // final polish on the Wronskian sign when the angle bracket straddles it
    let (wl, _) = step_wronskian(sigma, eps, lo);
    let (wh, _) = step_wronskian(sigma, eps, hi);
    if wl.signum() != wh.signum() {
        let g = |mu: f64| step_wronskian(sigma, eps, mu).0;
        return Ok(bisect(lo, hi, g));
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sl1dRow {
    pub n: usize,
    pub lambda: f64,
    /// λ - π²(n-1)².
    pub gap: f64,
    pub residual: f64,
}

/// Eigenvalue table for the given modes, in input order.
pub fn eigenvalue_table(problem: &Sl1dProblem, modes: &[usize]) -> Result<Vec<Sl1dRow>> {
    modes
        .par_iter()
        .map(|&n| {
            let lambda = problem.eigenvalue(n)?;
            Ok(Sl1dRow {
                n,
                lambda,
                gap: lambda - neumann_eigenvalue(n),
                residual: problem.residual(lambda),
            })
        })
        .collect()
}
