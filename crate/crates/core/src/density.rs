//! Limiting cluster densities: the limit functional of the normalized gap
//! counting measure, the density ρ(σ; y), and the geodesic-average
//! comparison with its factor-of-two discrepancy.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundarySymbol;
use crate::cluster::{bump, gap_spectra};
use crate::error::{Error, Result};
use crate::numerics::QuadratureRule;

/// Test function f with f(0) = 0.
///
/// `coeffs[i]` multiplies `x^{i+1}`. The bump variant multiplies the
/// polynomial by `exp(1 - 1/(1-(x/R)²))`, which is supported on |x| < R.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunction {
    Polynomial { coeffs: Vec<f64> },
    BumpPolynomial { coeffs: Vec<f64>, radius: f64 },
}

impl TestFunction {
    pub fn monomial(power: usize) -> Self {
        let mut coeffs = vec![0.0; power.max(1)];
        coeffs[power.max(1) - 1] = 1.0;
        TestFunction::Polynomial { coeffs }
    }

    pub fn bump_monomial(power: usize, radius: f64) -> Self {
        let mut coeffs = vec![0.0; power.max(1)];
        coeffs[power.max(1) - 1] = 1.0;
        TestFunction::BumpPolynomial { coeffs, radius }
    }

    fn coeffs(&self) -> &[f64] {
        match self {
            TestFunction::Polynomial { coeffs } | TestFunction::BumpPolynomial { coeffs, .. } => {
                coeffs
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = x * self.coeffs().iter().rev().fold(0.0, |acc, &c| acc * x + c);
        match self {
            TestFunction::Polynomial { .. } => p,
            TestFunction::BumpPolynomial { radius, .. } => p * bump(x / radius),
        }
    }

    pub fn support_radius(&self) -> Option<f64> {
        match self {
            TestFunction::Polynomial { .. } => None,
            TestFunction::BumpPolynomial { radius, .. } => Some(*radius),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs().iter().any(|c| !c.is_finite()) {
            return Err(Error::input("test function coefficients must be finite"));
        }
        if let TestFunction::BumpPolynomial { radius, .. } = self {
            if !(*radius > 0.0) || !radius.is_finite() {
                return Err(Error::input("bump radius must be positive"));
            }
        }
        Ok(())
    }

    /// Parses `x`, `x^k` or `poly(c1,c2,…)`, optionally followed by `*bump(R)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let (poly, radius) = match s.find("*bump(") {
            Some(i) => {
                let rest = &s[i + 6..];
                let r = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::input(format!("f spec `{spec}`: unclosed bump(")))?;
                let r: f64 = r
                    .parse()
                    .map_err(|_| Error::input(format!("f spec `{spec}`: bad bump radius")))?;
                (&s[..i], Some(r))
            }
            None => (s.as_str(), None),
        };
        let coeffs = if poly == "x" {
            vec![1.0]
        } else if let Some(k) = poly.strip_prefix("x^") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::input(format!("f spec `{spec}`: bad power")))?;
            if k == 0 {
                return Err(Error::input("f must vanish at 0: power must be >= 1"));
            }
            let mut c = vec![0.0; k];
            c[k - 1] = 1.0;
            c
        } else if let Some(inner) = poly.strip_prefix("poly(").and_then(|r| r.strip_suffix(')')) {
            inner
                .split(',')
                .map(|t| {
                    t.parse::<f64>().map_err(|_| {
                        Error::input(format!("f spec `{spec}`: bad coefficient `{t}`"))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            return Err(Error::input(format!(
                "f spec `{spec}`: expected x, x^k or poly(c1,…) with optional *bump(R)"
            )));
        };
        let f = match radius {
            Some(radius) => TestFunction::BumpPolynomial { coeffs, radius },
            None => TestFunction::Polynomial { coeffs },
        };
        f.validate()?;
        Ok(f)
    }
}

/// (1/4π) ∫∫ f(c σ_e(φ) / (π √(1-ξ²))) dξ dφ with ξ = sin t.
fn limit_integral(even: &BoundarySymbol, f: &TestFunction, c: f64) -> Result<f64> {
    f.validate()?;
    if even.is_zero() {
        return Ok(0.0);
    }
    if let TestFunction::Polynomial { coeffs } = f {
        if coeffs.iter().skip(1).any(|&x| x != 0.0) {
            return Err(Error::input(
                "polynomial test functions of degree >= 2 have no finite limit; use *bump(R)",
            ));
        }
    }
    let gl = QuadratureRule::gauss_legendre(24)?;
    // inner ξ-integral with 1/√(1-ξ²) = cosh τ: 2∫ f(±|a| cosh τ)/cosh²τ dτ
    let inner = |a: f64| -> f64 {
        if a == 0.0 {
            return 0.0;
        }
        match f.support_radius() {
            None => PI * f.coeffs().first().copied().unwrap_or(0.0) * a,
            Some(r) => {
                let aa = a.abs();
                if aa >= r {
                    return 0.0;
                }
                let top = (r / aa).acosh();
                let sg = a.signum();
                2.0 * adaptive_gl(
                    &gl,
                    &|tau: f64| {
                        let ch = tau.cosh();
                        f.eval(sg * aa * ch) / (ch * ch)
                    },
                    0.0,
                    top,
                )
            }
        }
    };
    let outer = |phi: f64| inner(c * even.value(phi) / PI);
    // the outer integrand is only Hölder at zeros of σ_even, so split there
    let n = (32 * (even.degree() + 1)).max(256);
    let mut cuts = periodic_roots(&|p| even.value(p), n);
    let total = if cuts.is_empty() {
        adaptive_gl(&gl, &outer, -PI, PI)
    } else {
        cuts.push(cuts[0] + 2.0 * PI);
        cuts.windows(2)
            .map(|w| adaptive_gl(&gl, &outer, w[0], w[1]))
            .sum()
    };
    let total = total / (4.0 * PI);
    if !total.is_finite() {
        return Err(Error::numerical(
            "limit functional quadrature produced a non-finite value",
        ));
    }
    Ok(total)
}

/// (1/4π) ∫_{-π}^{π} ∫_{-1}^{1} f(4σ_even(φ)/(π√(1-ξ²))) dξ dφ.
pub fn limit_functional(sigma: &BoundarySymbol, f: &TestFunction) -> Result<f64> {
    limit_integral(&sigma.even_part(), f, 4.0)
}

/// Roots of g on [-π, π) located by sign changes on a grid, then bisection.
fn periodic_roots(g: &dyn Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let mut roots = Vec::new();
    for j in 0..n {
        let a = -PI + h * j as f64;
        let b = a + h;
        let (ga, gb) = (g(a), g(b));
        if ga == 0.0 {
            roots.push(a);
            continue;
        }
        if ga * gb < 0.0 {
            let (mut lo, mut hi, mut glo) = (a, b, ga);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm < 0.0) == (glo < 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Break {
    Singular,
    Kink,
    Critical,
}

/// Recursive interval halving until the one-panel and two-panel rules agree.
fn adaptive_gl(gl: &QuadratureRule, g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    fn step(
        gl: &QuadratureRule,
        g: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = gl.integrate_on(a, m, g);
        let right = gl.integrate_on(m, b, g);
        let both = left + right;
        if depth == 0 || (both - whole).abs() <= tol || m <= a || m >= b {
            return both;
        }
        step(gl, g, a, m, left, tol, depth - 1) + step(gl, g, m, b, right, tol, depth - 1)
    }
    let whole = gl.integrate_on(a, b, g);
    let tol = 1e-12 * gl.integrate_on(a, b, |x| g(x).abs());
    step(gl, g, a, b, whole, tol, 24)
}

/// ρ(σ; y): density of the limiting gap distribution.
///
/// ρ(σ;y) = 1/(2π|y|³) ∫ a(φ)² (1 - a(φ)²/y²)_+^{-1/2} dφ with
/// a = 4(σ_even)_±/π, the sign chosen by the sign of y. Each arc where
/// a < |y| is integrated with an endpoint substitution that removes the
/// inverse square-root singularity.
pub fn rho_density(sigma: &BoundarySymbol, y: f64) -> Result<f64> {
    if y == 0.0 || !y.is_finite() {
        return Err(Error::domain("ρ(σ; y) needs finite y ≠ 0"));
    }
    let even = sigma.even_part();
    let sgn = y.signum();
    let ay = y.abs();
    let s = |phi: f64| sgn * even.value(phi);
    let level = PI * ay / 4.0;
    let weight = |sv: f64, gap: f64| {
        // sv = s(φ), gap = level - s(φ) > 0
        if sv <= 0.0 || gap <= 0.0 {
            return 0.0;
        }
        let av = 4.0 * sv / PI;
        let lo = 4.0 * gap / (PI * ay);
        av * av / (lo * (2.0 - lo)).sqrt()
    };
    let integrand = |phi: f64| {
        let sv = s(phi);
        weight(sv, level - sv)
    };
    // near a root p of s = level the gap is s(p) - s(p + δ), summed from
    // difference identities so it keeps full relative accuracy as δ → 0
    let coeffs: Vec<(f64, Complex64)> = (1..=even.degree() as i64)
        .map(|k| (k as f64, even.coeff(k)))
        .collect();
    // gap at p + δ measured from a point p with known gap g0: zero at a
    // root of s = level, level - s(p) at a critical point
    let near_from = |p: f64, g0: f64, delta: f64| {
        let mut diff = 0.0;
        for &(k, z) in &coeffs {
            let half = (0.5 * k * delta).sin();
            let mid = k * (p + 0.5 * delta);
            diff += 4.0 * half * (z.re * mid.sin() + z.im * mid.cos());
        }
        weight(s(p + delta), g0 + sgn * diff)
    };
    let near = |p: f64, delta: f64| near_from(p, 0.0, delta);
    let slope = |phi: f64| {
        coeffs
            .iter()
            .map(|&(k, z)| {
                let (sn, cs) = (k * phi).sin_cos();
                -2.0 * k * (z.re * sn + z.im * cs)
            })
            .sum::<f64>()
    };
    let n = (32 * (even.degree() + 1)).max(256);
    let mut breaks: Vec<(f64, Break)> = periodic_roots(&|p| s(p) - level, n)
        .into_iter()
        .map(|p| (p, Break::Singular))
        .chain(periodic_roots(&s, n).into_iter().map(|p| (p, Break::Kink)))
        .chain(
            periodic_roots(&slope, n)
                .into_iter()
                .map(|p| (p, Break::Critical)),
        )
        .collect();
    breaks.sort_by(|x, y| x.0.total_cmp(&y.0));
    breaks.dedup_by(|x, y| (x.0 - y.0).abs() < 1e-14);

    // the integrand peaks sharply wherever a(φ) comes close to |y| without
    // crossing it, so every arc is refined adaptively
    let gl = QuadratureRule::gauss_legendre(24)?;
    let at = |p: f64, kind: Break, delta: f64| match kind {
        Break::Kink => integrand(p + delta),
        Break::Singular => near(p, delta),
        Break::Critical => near_from(p, level - s(p), delta),
    };
    let integral = if breaks.is_empty() {
        adaptive_gl(&gl, &integrand, -PI, PI)
    } else {
        let mut total = 0.0;
        let k = breaks.len();
        for i in 0..k {
            let (p, kp) = breaks[i];
            let (mut q, kq) = breaks[(i + 1) % k];
            if i + 1 == k {
                q += 2.0 * PI;
            }
            if q <= p {
                continue;
            }
            let mid = 0.5 * (p + q);
            if s(mid) <= 0.0 || s(mid) >= level {
                continue;
            }
            let len = q - p;
            total += match (kp == Break::Singular, kq == Break::Singular) {
                (true, true) => adaptive_gl(
                    &gl,
                    &|u: f64| {
                        let jac = len * u.sin() / 2.0;
                        if u < 0.5 * PI {
                            near(p, len * (0.5 * u).sin().powi(2)) * jac
                        } else {
                            near(q, -len * (0.5 * u).cos().powi(2)) * jac
                        }
                    },
                    0.0,
                    PI,
                ),
                (true, false) => adaptive_gl(
                    &gl,
                    &|v: f64| {
                        let t = len * v * v;
                        let g = if 2.0 * t < len {
                            near(p, t)
                        } else {
                            at(q, kq, t - len)
                        };
                        g * 2.0 * len * v
                    },
                    0.0,
                    1.0,
                ),
                (false, true) => adaptive_gl(
                    &gl,
                    &|v: f64| {
                        let t = len * v * v;
                        let g = if 2.0 * t < len {
                            near(q, -t)
                        } else {
                            at(p, kp, len - t)
                        };
                        g * 2.0 * len * v
                    },
                    0.0,
                    1.0,
                ),
                (false, false) => adaptive_gl(
                    &gl,
                    &|t: f64| {
                        if 2.0 * t < len {
                            at(p, kp, t)
                        } else {
                            at(q, kq, t - len)
                        }
                    },
                    0.0,
                    len,
                ),
            };
        }
        total
    };
    Ok(integral / (2.0 * PI * ay.powi(3)))
}

/// Empirical cluster averages against the limit along an ℓ ladder.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub ells: Vec<usize>,
    pub empirical: Vec<f64>,
    pub limit: f64,
    pub deviations: Vec<f64>,
}

pub fn empirical_vs_limit(
    sigma: &BoundarySymbol,
    f: &TestFunction,
    ladder: &[usize],
) -> Result<DensityReport> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input(
            "ℓ ladder must be non-empty and strictly increasing",
        ));
    }
    let limit = limit_functional(sigma, f)?;
    let spectra = gap_spectra(sigma, ladder)?;
    let empirical: Vec<f64> = spectra
        .iter()
        .map(|s| s.gaps.iter().map(|&g| f.eval(g)).sum::<f64>() / (s.ell as f64 + 1.0))
        .collect();
    let deviations = empirical.iter().map(|e| (e - limit).abs()).collect();
    Ok(DensityReport {
        ells: ladder.to_vec(),
        empirical,
        limit,
        deviations,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeinsteinComparison {
    pub naive: f64,
    pub correct: f64,
    pub substitution_check: f64,
}

/// Geodesic-average prediction (argument 2σ_even/(π√(1-ξ²))) against the
/// true limit (argument 4σ_even/(π√(1-ξ²))).
pub fn weinstein_comparison(
    sigma: &BoundarySymbol,
    f: &TestFunction,
) -> Result<WeinsteinComparison> {
    let even = sigma.even_part();
    let naive = limit_integral(&even, f, 2.0)?;
    let correct = limit_integral(&even, f, 4.0)?;
    let halved = limit_integral(&even.scaled(0.5), f, 4.0)?;
    Ok(WeinsteinComparison {
        naive,
        correct,
        substitution_check: (naive - halved).abs(),
    })
}

/// Average of V_ε = σ(φ)/ε·χ{θ > π/2-ε} over the reflected geodesic
/// Γ(θ, φ): two upper semicircles with normals at (θ, φ) and (θ, φ+π),
/// meeting the equator at azimuths φ ± π/2. Total length 2π.
pub fn geodesic_average(theta: f64, phi: f64, sigma: &BoundarySymbol, epsilon: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 0.5 * PI) {
        return Err(Error::domain("θ must lie in (0, π/2]"));
    }
    if !(epsilon > 0.0 && epsilon < 0.5 * theta) {
        return Err(Error::domain(
            "ε must lie in (0, θ/2) for the strip geometry",
        ));
    }
    let gl = QuadratureRule::gauss_legendre(64)?;
    let s_star = (epsilon.sin() / theta.sin()).asin();
    let (st, ct) = theta.sin_cos();
    let mut total = 0.0;
    for base in [phi, phi + PI] {
        let (sp, cp) = base.sin_cos();
        let e1 = [-sp, cp, 0.0];
        let e2 = [-ct * cp, -ct * sp, st];
        let azimuth = |s: f64| {
            let (ss, cs) = s.sin_cos();
            let x = cs * e1[0] + ss * e2[0];
            let y = cs * e1[1] + ss * e2[1];
            y.atan2(x)
        };
        let v = |s: f64| sigma.value(azimuth(s)) / epsilon;
        total += gl.integrate_on(0.0, s_star, v);
        total += gl.integrate_on(PI - s_star, PI, v);
    }
    Ok(total / (2.0 * PI))
}

/// Rows (y, ρ) on a uniform grid of `n` points from `y0` to `y1`, skipping y = 0.
pub fn rho_curve(sigma: &BoundarySymbol, y0: f64, y1: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 || !(y1 > y0) {
        return Err(Error::input("y grid needs n >= 2 and y1 > y0"));
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let y = y0 + (y1 - y0) * i as f64 / (n - 1) as f64;
        if y == 0.0 {
            continue;
        }
        rows.push((y, rho_density(sigma, y)?));
    }
    Ok(rows)
}
