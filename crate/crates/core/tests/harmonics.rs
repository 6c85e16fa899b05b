use std::f64::consts::PI;

use proptest::prelude::*;

use robin_clusters::harmonics::{
    a_squared, amplitude_from_recurrence, b_amplitude, b_from_recurrence, gamma_ratio,
    legendre_p_at, lemma_b2_diagnostics, resolvent_coefficient_bound, symbol, trace_amplitudes,
    trace_coefficient, z_coefficient, SymbolKind,
};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Monomial coefficients of the Legendre polynomial P_ℓ (explicit sum).
fn legendre_poly(ell: usize) -> Vec<f64> {
    let mut c = vec![0.0; ell + 1];
    for k in 0..=ell / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c[ell - 2 * k] = sign * binom(ell, k) * binom(2 * ell - 2 * k, ell) / 2f64.powi(ell as i32);
    }
    c
}

fn derive(c: &[f64], times: usize) -> Vec<f64> {
    let mut c = c.to_vec();
    for _ in 0..times {
        c = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &v)| k as f64 * v)
            .collect();
        if c.is_empty() {
            c.push(0.0);
        }
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

/// P_ℓ^m(x), m >= 0, Condon–Shortley, from differentiated monomials.
fn p_oracle(ell: usize, m: usize, x: f64) -> f64 {
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * (1.0 - x * x).powf(m as f64 / 2.0) * horner(&derive(&legendre_poly(ell), m), x)
}

/// √((2ℓ+1)/(2π)·(ℓ-m)!/(ℓ+m)!), hemisphere normalization.
fn hemi_norm(ell: usize, m: usize) -> f64 {
    ((2 * ell + 1) as f64 / (2.0 * PI) * factorial(ell - m) / factorial(ell + m)).sqrt()
}

#[test]
fn gamma_ratio_examples() {
    assert!((gamma_ratio(0.0).unwrap() - PI.sqrt()).abs() < 1e-14);
    assert!((gamma_ratio(2.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-14);
    let g = gamma_ratio(1000.0).unwrap();
    assert!((g - (2.0f64 / 1000.0).sqrt()).abs() < 5e-5);
    assert!(gamma_ratio(-1.0).is_err());
}

#[test]
fn gamma_ratio_against_reference_table() {
    // 25-digit reference values, both sides of the asymptotic switch
    let table = [
        (7.5, 0.4995165785643156571433854),
        (29.9, 0.2564772538447175531957831),
        (30.0, 0.2560565673438025642882511),
        (31.0, 0.251960454291466831356409),
        (1000.0, 0.04471018060939724827826222),
        (123456.0, 0.004024927088775224450348841),
        (1e6, 0.001414213208819748649756993),
    ];
    for (x, want) in table {
        let got = gamma_ratio(x).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-12,
            "γ({x}) = {got}, want {want}"
        );
    }
}

#[test]
fn trace_amplitude_examples() {
    let t0 = trace_amplitudes(0).unwrap();
    assert!((t0.a(0) - 1.0).abs() < 1e-14);

    // γ(0)γ(2) = π/2, so A² = (3/π)(π/2)
    let t1 = trace_amplitudes(1).unwrap();
    assert!((t1.a(1).powi(2) - 1.5).abs() < 1e-13);
    assert!((t1.a(-1).powi(2) - 1.5).abs() < 1e-13);
    assert_eq!(t1.a(0), 0.0);

    let b10 = -(3.0 / (2.0 * PI)).sqrt();
    assert!((t1.b(0) - b10).abs() < 1e-14);
    assert!((b_from_recurrence(1, 0) - b10).abs() < 1e-14);
}

#[test]
fn legendre_examples() {
    assert!((legendre_p_at(2, 0, 0.0).unwrap() + 0.5).abs() < 1e-14);
    assert!((legendre_p_at(1, 1, 0.0).unwrap() + 1.0).abs() < 1e-14);
    // (-1)^4 (2³/√π) Γ(9/2)/Γ(2)
    let gamma_9_2 = 105.0 * PI.sqrt() / 16.0;
    let closed = 8.0 / PI.sqrt() * gamma_9_2;
    assert!((legendre_p_at(5, 3, 0.0).unwrap() - closed).abs() < 1e-10 * closed);
    assert!(legendre_p_at(3, 1, 1.5).is_err());
}

#[test]
fn legendre_matches_explicit_polynomials() {
    for ell in 0..=12 {
        for m in 0..=ell {
            for &x in &[-0.83, -0.4, 0.0, 0.17, 0.5, 0.9] {
                let want = p_oracle(ell, m, x);
                let got = legendre_p_at(ell, m as i64, x).unwrap();
                let scale = want.abs().max(1e-3);
                assert!(
                    (got - want).abs() < 1e-10 * scale,
                    "P_{ell}^{m}({x}): {got} vs {want}"
                );
                if m > 0 {
                    let neg = legendre_p_at(ell, -(m as i64), x).unwrap();
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    let want_neg = sign * factorial(ell - m) / factorial(ell + m) * want;
                    assert!((neg - want_neg).abs() < 1e-10 * want_neg.abs().max(1e-12));
                }
            }
        }
    }
}

#[test]
fn amplitudes_match_explicit_polynomials() {
    for ell in 0..=14 {
        for m in 0..=ell {
            let t = hemi_norm(ell, m) * p_oracle(ell, m, 0.0);
            let d = -hemi_norm(ell, m)
                * horner(&derive(&legendre_poly(ell), m + 1), 0.0)
                * if m % 2 == 0 { 1.0 } else { -1.0 };
            let mi = m as i64;
            if (ell - m) % 2 == 0 {
                let a = (2.0 * PI).sqrt() * t.abs();
                assert!(
                    (a_squared(ell, mi).sqrt() - a).abs() < 1e-12 * a,
                    "A_{ell},{m}"
                );
                assert!((trace_coefficient(ell, mi) - t).abs() < 1e-12 * t.abs());
                assert_eq!(b_amplitude(ell, mi), 0.0);
            } else {
                assert!(
                    (b_amplitude(ell, mi) - d).abs() < 1e-12 * d.abs(),
                    "B_{ell},{m}"
                );
                assert_eq!(a_squared(ell, mi), 0.0);
            }
        }
    }
}

#[test]
fn gamma_formula_matches_recurrence_up_to_200() {
    for ell in 0..=200usize {
        let l = ell as i64;
        for m in (-l..=l).step_by(2) {
            let a = a_squared(ell, m).sqrt();
            let r = amplitude_from_recurrence(ell, m);
            assert!((a - r).abs() <= 1e-9 * a, "ℓ={ell} m={m}: {a} vs {r}");
        }
        for m in (-l + 1..l).step_by(2) {
            let b = b_amplitude(ell, m);
            let r = b_from_recurrence(ell, m);
            assert!((b - r).abs() <= 1e-9 * b.abs(), "ℓ={ell} m={m}: {b} vs {r}");
        }
    }
}

#[test]
fn amplitudes_finite_at_2000() {
    let t = trace_amplitudes(2000).unwrap();
    assert!(t.a.iter().chain(&t.b).all(|v| v.is_finite()));
    assert!(t.a(2000) > 0.0 && t.b(1999) != 0.0);
}

#[test]
fn symbol_examples() {
    let y = symbol(2, SymbolKind::Y).unwrap();
    assert_eq!(y.coeff(0), a_squared(2, 0));
    assert_eq!(y.coeff(2), a_squared(2, 2));
    assert_eq!(y.coeff(-2), a_squared(2, -2));
    assert_eq!(y.coeff(1), 0.0);
    assert_eq!(y.coeff(-1), 0.0);

    let z = symbol(2, SymbolKind::Z).unwrap();
    for m in -2..=2 {
        let want = if m == 0 { 2.0 / PI.sqrt() } else { 0.0 };
        assert!((z.coeff(m) - want).abs() < 1e-15);
    }
    assert!(symbol(0, SymbolKind::Z).is_err());

    let x = symbol(4, SymbolKind::X).unwrap();
    assert_eq!(x.coeffs, trace_amplitudes(4).unwrap().a);
}

#[test]
fn lemma_diagnostics_examples() {
    let d = lemma_b2_diagnostics(2).unwrap();
    let want = a_squared(2, 0) + 2.0 * a_squared(2, 2);
    assert!((d.sum_a2 - want).abs() < 1e-14);

    let d = lemma_b2_diagnostics(400).unwrap();
    let r = d.sum_a2 / 400.0;
    assert!((1.9..=2.1).contains(&r), "ΣA²/ℓ = {r}");

    let ratios: Vec<f64> = [100usize, 200, 400, 800]
        .iter()
        .map(|&l| lemma_b2_diagnostics(l).unwrap().l1_deviation / (l as f64).powf(2.0 / 3.0))
        .collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 2.0, "ratios {ratios:?}");
    assert!(lemma_b2_diagnostics(1).is_err());
}

#[test]
fn sup_amplitude_grows_like_sqrt_ell() {
    let ratios: Vec<f64> = [100usize, 200, 400, 800]
        .iter()
        .map(|&l| lemma_b2_diagnostics(l).unwrap().sup_a2 / (l as f64).sqrt())
        .collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 1.1, "ratios {ratios:?}");
}

#[test]
fn z_symbol_close_to_x_symbol_in_hilbert_schmidt() {
    let ratios: Vec<f64> = [100usize, 200, 400, 800]
        .iter()
        .map(|&ell| {
            let l = ell as i64;
            let s: f64 = (-l..=l)
                .map(|m| (a_squared(ell, m).sqrt() - z_coefficient(ell, m)).powi(2))
                .sum();
            s / (ell as f64).powf(2.0 / 3.0)
        })
        .collect();
    let (lo, hi) = ratios
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo.max(1e-12) < 3.0 && hi < 10.0, "ratios {ratios:?}");
}

#[test]
fn resolvent_examples() {
    let v = resolvent_coefficient_bound(2, 6.5, 50).unwrap();
    assert!(v.is_finite() && v > 0.0);
    assert!(resolvent_coefficient_bound(2, 30.0, 50).is_err());
    assert!(resolvent_coefficient_bound(10, 111.0, 20).is_err());

    let mut scaled = Vec::new();
    for ell in [50usize, 100, 200] {
        let lambda = (ell * (ell + 1)) as f64 + 1.0;
        let a = resolvent_coefficient_bound(ell, lambda, 8 * ell).unwrap();
        let b = resolvent_coefficient_bound(ell, lambda, 16 * ell).unwrap();
        assert!((a - b).abs() <= 0.01 * b, "ℓ={ell}: truncation {a} vs {b}");
        let lf = ell as f64;
        scaled.push(b * lf.sqrt() / lf.ln());
    }
    let (lo, hi) = scaled
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    assert!(hi / lo < 2.0, "scaled {scaled:?}");
}

proptest! {
    #[test]
    fn amplitude_parity_and_symmetry(ell in 0usize..600, mr in 0.0f64..1.0) {
        let l = ell as i64;
        let m = ((mr * (2 * l + 1) as f64) as i64 - l).clamp(-l, l);
        let a2 = a_squared(ell, m);
        let b = b_amplitude(ell, m);
        if (l - m) % 2 == 0 {
            prop_assert!(a2 > 0.0);
            prop_assert_eq!(b, 0.0);
        } else {
            prop_assert_eq!(a2, 0.0);
            prop_assert!(b != 0.0 && b.is_finite());
        }
        prop_assert_eq!(a2, a_squared(ell, -m));
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((b_amplitude(ell, -m) - sign * b).abs() <= 1e-15 * b.abs());
    }
}
