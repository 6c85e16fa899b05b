use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use robin_clusters::boundary::{multiplication_matrix, BoundarySymbol};
use robin_clusters::cluster::{
    build_cluster_matrix, bump, cluster_indices, cluster_trace, commutator_hs_norm, gap_rows,
    gap_spectra, gap_spectrum, model_operator_trace, sandwich_spectra,
};
use robin_clusters::harmonics::{a_squared, lemma_b2_diagnostics};
use robin_clusters::numerics::{matmul, QuadratureRule};

fn sym(c0: f64, cos: &[(usize, f64)], sin: &[(usize, f64)]) -> BoundarySymbol {
    BoundarySymbol::from_trig(c0, cos, sin).unwrap()
}

fn sup_abs(s: &BoundarySymbol) -> f64 {
    (0..8192)
        .map(|j| s.value(-PI + 2.0 * PI * j as f64 / 8192.0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn constant_sigma_gives_diagonal() {
    let ell = 9;
    let w = build_cluster_matrix(&BoundarySymbol::constant(1.0), ell).unwrap();
    assert_eq!(w.indices, cluster_indices(ell));
    for (i, &m) in w.indices.iter().enumerate() {
        for j in 0..w.indices.len() {
            let want = if i == j { a_squared(ell, m) } else { 0.0 };
            assert!((w.matrix.get(i, j) - want).norm() < 1e-15);
        }
    }
}

#[test]
fn odd_sigma_gives_zero_matrix() {
    let w = build_cluster_matrix(&sym(0.0, &[(1, 2.0)], &[]), 10).unwrap();
    assert_eq!(w.matrix.frobenius_norm(), 0.0);
    let g = gap_spectrum(&sym(0.0, &[(1, 1.0), (3, 1.0)], &[(5, 0.3)]), 10).unwrap();
    assert!(g.gaps.iter().all(|&x| x == 0.0));
}

#[test]
fn two_by_two_example() {
    let s = sym(1.0, &[(2, 1.0)], &[]);
    let w = build_cluster_matrix(&s, 1).unwrap();
    // (3/2)[[1, 1/2], [1/2, 1]]
    assert!((w.matrix.get(0, 0).re - 1.5).abs() < 1e-13);
    assert!((w.matrix.get(0, 1).re - 0.75).abs() < 1e-13);
    let (a, b, c) = (
        w.matrix.get(0, 0).re,
        w.matrix.get(0, 1).re,
        w.matrix.get(1, 1).re,
    );
    let mid = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let g = gap_spectrum(&s, 1).unwrap();
    assert!((g.gaps[0] - (mid - rad)).abs() < 1e-13 && (g.gaps[1] - (mid + rad)).abs() < 1e-13);
    assert!((g.gaps[0] - 0.75).abs() < 1e-13 && (g.gaps[1] - 2.25).abs() < 1e-13);
}

#[test]
fn gap_spectrum_examples() {
    let g = gap_spectrum(&BoundarySymbol::constant(1.0), 1).unwrap();
    assert_eq!(g.gaps.len(), 2);
    assert!(g.gaps.iter().all(|&x| (x - 1.5).abs() < 1e-13));
    let z = gap_spectrum(&BoundarySymbol::zero(), 6).unwrap();
    assert_eq!(z.gaps, vec![0.0; 7]);
}

#[test]
fn trace_examples() {
    let ell = 400;
    let t = cluster_trace(&BoundarySymbol::constant(1.0), ell);
    let direct: f64 = (-400i64..=400).map(|m| a_squared(ell, m)).sum();
    assert!((t - direct).abs() < 1e-10 * direct);
    assert!((0.95..=1.05).contains(&(t / (2.0 * ell as f64))));
    assert_eq!(cluster_trace(&sym(0.0, &[(1, 2.0)], &[]), 30), 0.0);
    assert_eq!(cluster_trace(&sym(0.0, &[(2, 1.0)], &[(4, 1.0)]), 30), 0.0);
}

#[test]
fn sandwich_nonnegative_sigma_scales() {
    let s = sym(1.0, &[(2, 1.0)], &[]);
    let eps = 0.1;
    let (lo, hi) = sandwich_spectra(&s, 5, eps).unwrap();
    let base = gap_spectrum(&s, 5).unwrap();
    for k in 0..6 {
        assert!(lo.gaps[k] <= hi.gaps[k]);
        assert!(
            (lo.gaps[k] - (1.0 - eps) * base.gaps[k]).abs() < 1e-5 * (1.0 + base.gaps[k].abs())
        );
        assert!(
            (hi.gaps[k] - (1.0 + eps) * base.gaps[k]).abs() < 1e-5 * (1.0 + base.gaps[k].abs())
        );
    }
}

#[test]
fn sandwich_sign_changing_sigma() {
    let s = sym(0.2, &[(2, 1.0)], &[(1, 0.5)]);
    let base = gap_spectrum(&s, 8).unwrap();
    for eps in [0.2, 0.05, 1e-4] {
        let (lo, hi) = sandwich_spectra(&s, 8, eps).unwrap();
        for k in 0..9 {
            assert!(lo.gaps[k] <= base.gaps[k] + 1e-9);
            assert!(base.gaps[k] <= hi.gaps[k] + 1e-9);
        }
        if eps < 1e-3 {
            for k in 0..9 {
                assert!((hi.gaps[k] - lo.gaps[k]).abs() < 1e-2);
            }
        }
    }
    assert!(sandwich_spectra(&s, 8, 0.0).is_err());
}

#[test]
fn model_trace_examples() {
    let omega = |x: f64| bump(x / 0.9);
    let ell = 200;
    let one = BoundarySymbol::constant(1.0);
    let r = model_operator_trace(&omega, &one, ell, 1).unwrap();
    let l = ell as i64;
    let direct: f64 = (-l + 2..=l - 2)
        .step_by(2)
        .map(|m| omega(m as f64 / ell as f64).powi(2))
        .sum::<f64>()
        / (ell as f64 + 1.0);
    assert!((r.numeric - direct).abs() < 1e-12);
    let half_int = 0.5
        * QuadratureRule::gauss_legendre(400)
            .unwrap()
            .integrate(|x| omega(x).powi(2));
    assert!((r.numeric - half_int).abs() < 0.02 * half_int);

    let r = model_operator_trace(&omega, &sym(0.0, &[(2, 1.0)], &[(4, 0.3)]), 50, 1).unwrap();
    assert_eq!(r.numeric, 0.0);

    let s = sym(1.0, &[(2, 1.0)], &[]);
    let r = model_operator_trace(&omega, &s, 300, 2).unwrap();
    assert!((r.numeric - r.limit).abs() <= 0.05 * r.limit.abs(), "{r:?}");
    assert!(model_operator_trace(&omega, &s, 300, 0).is_err());
}

/// Dense ‖M C - C M‖_HS on |m| <= ℓ + D with C = diag(ω(m/ℓ)) on the sublattice.
fn commutator_oracle(omega: &dyn Fn(f64) -> f64, s: &BoundarySymbol, ell: usize) -> f64 {
    let r = ell as i64 + s.degree() as i64;
    let idx: Vec<i64> = (-r..=r).collect();
    let n = idx.len();
    let m = multiplication_matrix(s, &idx);
    let mut c = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, &k) in idx.iter().enumerate() {
        let on = k.abs() <= ell as i64 - 2 && (ell as i64 - k).rem_euclid(2) == 0;
        if on {
            c[i * n + i] = Complex64::new(omega(k as f64 / ell as f64), 0.0);
        }
    }
    let mc = matmul(n, m.as_slice(), &c);
    let cm = matmul(n, &c, m.as_slice());
    mc.iter()
        .zip(&cm)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[test]
fn commutator_examples() {
    let omega = |x: f64| bump(x / 0.9);
    assert_eq!(
        commutator_hs_norm(&omega, &BoundarySymbol::constant(3.0), 50),
        0.0
    );
    assert_eq!(
        commutator_hs_norm(&|_| 0.0, &sym(1.0, &[(2, 1.0)], &[]), 50),
        0.0
    );

    let s = sym(0.5, &[(2, 1.0), (1, 0.4)], &[(3, 0.2)]);
    for ell in [6, 17, 40] {
        let a = commutator_hs_norm(&omega, &s, ell);
        let b = commutator_oracle(&omega, &s, ell);
        assert!((a - b).abs() < 1e-12 * b.max(1.0), "ℓ={ell}: {a} vs {b}");
    }

    let c2 = sym(0.0, &[(2, 1.0)], &[]);
    let norms: Vec<f64> = [100, 200, 400, 800]
        .iter()
        .map(|&l| commutator_hs_norm(&omega, &c2, l))
        .collect();
    let (lo, hi) = norms
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(lo > 0.0 && hi < 1.0, "{norms:?}");
    assert!(norms.windows(2).all(|w| w[1] <= w[0] * 1.05), "{norms:?}");
}

#[test]
fn gap_rows_layout() {
    let sp = gap_spectra(&BoundarySymbol::constant(1.0), &[1, 2]).unwrap();
    let rows = gap_rows(&sp);
    assert_eq!(rows.len(), 5);
    assert_eq!((rows[0].0, rows[0].1), (1, 1));
    assert_eq!((rows[4].0, rows[4].1), (2, 3));
}

#[test]
fn operator_norm_ladder() {
    let s = sym(1.0, &[(2, 1.0)], &[(1, 0.3)]);
    let sup = sup_abs(&s);
    let mut ratios = Vec::new();
    for ell in [50, 100, 200, 400] {
        let g = gap_spectrum(&s, ell).unwrap();
        let top = g.gaps.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let bound = sup * lemma_b2_diagnostics(ell).unwrap().sup_a2;
        assert!(top <= bound * (1.0 + 1e-9));
        ratios.push(top / (ell as f64).sqrt());
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 1.5, "{ratios:?}");
}

fn arb_symbol() -> impl Strategy<Value = BoundarySymbol> {
    (0usize..=6).prop_flat_map(|d| {
        (
            -2.0f64..2.0,
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d),
        )
            .prop_map(|(c0, cs)| {
                let mut pairs = vec![(0i64, Complex64::new(c0, 0.0))];
                for (k, (re, im)) in cs.into_iter().enumerate() {
                    pairs.push((k as i64 + 1, Complex64::new(re, im)));
                }
                BoundarySymbol::from_coeffs(&pairs).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_part_gives_same_matrix(s in arb_symbol(), ell in 0usize..30) {
        let a = build_cluster_matrix(&s, ell).unwrap();
        let b = build_cluster_matrix(&s.even_part(), ell).unwrap();
        prop_assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn shift_invariance(s in arb_symbol(), ell in 0usize..30, phi0 in -PI..PI) {
        let a = gap_spectrum(&s, ell).unwrap();
        let b = gap_spectrum(&s.shifted(phi0), ell).unwrap();
        for (x, y) in a.gaps.iter().zip(&b.gaps) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn scaling(s in arb_symbol(), ell in 0usize..30, c in 0.01f64..10.0) {
        let a = gap_spectrum(&s, ell).unwrap();
        let b = gap_spectrum(&s.scaled(c), ell).unwrap();
        for (x, y) in a.gaps.iter().zip(&b.gaps) {
            prop_assert!((c * x - y).abs() <= 1e-10 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn trace_and_norm_bound(s in arb_symbol(), ell in 2usize..60) {
        let g = gap_spectrum(&s, ell).unwrap();
        prop_assert_eq!(g.gaps.len(), ell + 1);
        let sum: f64 = g.gaps.iter().sum();
        let t = cluster_trace(&s, ell);
        let scale = ell as f64 * sup_abs(&s).max(1.0);
        prop_assert!((sum - t).abs() <= 1e-9 * scale);
        let bound = sup_abs(&s) * lemma_b2_diagnostics(ell).unwrap().sup_a2;
        for x in &g.gaps {
            prop_assert!(x.abs() <= bound * (1.0 + 1e-3) + 1e-12);
        }
    }
}
