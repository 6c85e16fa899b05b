use std::f64::consts::PI;

use proptest::prelude::*;

use robin_clusters::boundary::BoundarySymbol;
use robin_clusters::cluster::build_cluster_matrix;
use robin_clusters::galerkin::{
    boundary_matrix, cluster_window_counts, constant_sigma_eigenvalue, constant_sigma_spectrum,
    galerkin_system, gram_matrix, odd_eigenspace_construction, radial_block,
    robin_kernel_dimension, robin_spectrum, robin_spectrum_harmonic, stiffness_matrix,
    GalerkinBasis, Parity,
};
use robin_clusters::numerics::{cholesky, symmetric_eigenvalues, SymmetricMatrix};

fn sym(c0: f64, cos: &[(usize, f64)], sin: &[(usize, f64)]) -> BoundarySymbol {
    BoundarySymbol::from_trig(c0, cos, sin).unwrap()
}

fn idx(ell: usize, m: i64) -> usize {
    ell * ell + (m + ell as i64) as usize
}

/// P_ℓ and P_ℓ' by Bonnet's recurrence.
fn legendre(ell: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    let (mut d0, mut d1) = (0.0, 1.0);
    if ell == 0 {
        return (1.0, 0.0);
    }
    for n in 1..ell {
        let nf = n as f64;
        let p2 = ((2.0 * nf + 1.0) * x * p1 - nf * p0) / (nf + 1.0);
        let d2 = d0 + (2.0 * nf + 1.0) * p1;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
    }
    (p1, d1)
}

/// Radial factor of the m = 0 basis function of degree ℓ: √2 · phase · λ_ℓ.
fn u0(ell: usize, x: f64) -> (f64, f64) {
    let phase = if ell % 2 == 0 && (ell / 2) % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let c = phase * 2f64.sqrt() * ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt();
    let (p, d) = legendre(ell, x);
    (c * p, c * d)
}

fn simpson(f: impl Fn(f64) -> f64) -> f64 {
    let n = 20000;
    let h = 1.0 / n as f64;
    let mut s = f(0.0) + f(1.0);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn gram_examples() {
    let basis = GalerkinBasis::new(6);
    assert_eq!(basis.len(), 49);
    let g = gram_matrix(&basis).unwrap();
    for i in 0..basis.len() {
        assert!((g.get(i, i).re - 1.0).abs() < 1e-13);
    }
    let a = g.get(idx(0, 0), idx(1, 0)).re;
    assert!((a - 3f64.sqrt() / 2.0).abs() < 1e-14, "{a}");
    assert!(g.get(idx(0, 0), idx(2, 0)).norm() < 1e-14);
    // different m never overlap
    assert_eq!(g.get(idx(3, 1), idx(4, 2)).norm(), 0.0);
}

#[test]
fn gram_and_stiffness_match_quadrature_at_m0() {
    let l = 8;
    let basis = GalerkinBasis::new(l);
    let g = gram_matrix(&basis).unwrap();
    let k = stiffness_matrix(&basis, &g).unwrap();
    for a in 0..=l {
        for b in 0..=l {
            let gram = 2.0 * PI * simpson(|x| u0(a, x).0 * u0(b, x).0);
            let stiff = 2.0 * PI * simpson(|x| (1.0 - x * x) * u0(a, x).1 * u0(b, x).1);
            let (i, j) = (idx(a, 0), idx(b, 0));
            assert!(
                (g.get(i, j).re - gram).abs() < 1e-11,
                "G({a},{b}) {} vs {gram}",
                g.get(i, j).re
            );
            assert!(
                (k.get(i, j).re - stiff).abs() < 1e-9 * stiff.abs().max(1.0),
                "K({a},{b}) {} vs {stiff}",
                k.get(i, j).re
            );
        }
    }
    // the constant has no gradient
    assert!(k.get(idx(1, 0), idx(0, 0)).norm() < 1e-13);
}

#[test]
fn same_parity_blocks_are_diagonal() {
    let basis = GalerkinBasis::new(7);
    let g = gram_matrix(&basis).unwrap();
    let k = stiffness_matrix(&basis, &g).unwrap();
    let e = &basis.entries;
    for i in 0..e.len() {
        for j in 0..e.len() {
            if e[i].parity != e[j].parity {
                continue;
            }
            let want = if i == j {
                (e[i].ell * (e[i].ell + 1)) as f64
            } else {
                0.0
            };
            assert!(
                (k.get(i, j).re - want).abs() < 1e-10,
                "{:?} {:?}",
                e[i],
                e[j]
            );
            let gw = if i == j { 1.0 } else { 0.0 };
            assert!((g.get(i, j).re - gw).abs() < 1e-12);
        }
    }
}

#[test]
fn boundary_block_is_cluster_matrix() {
    let s = sym(0.4, &[(1, 0.7), (2, -0.3)], &[(1, 0.2), (3, 0.5)]);
    let basis = GalerkinBasis::new(9);
    let b = boundary_matrix(&basis, &s).unwrap();
    for ell in [2, 5, 9] {
        let c = build_cluster_matrix(&s, ell).unwrap();
        for (p, &mp) in c.indices.iter().enumerate() {
            for (q, &mq) in c.indices.iter().enumerate() {
                let got = b.get(idx(ell, mp), idx(ell, mq));
                assert!(
                    (got - c.matrix.get(p, q)).norm() < 1e-12,
                    "ℓ={ell} ({mp},{mq})"
                );
            }
        }
    }
    for (i, e) in basis.entries.iter().enumerate() {
        if e.parity == Parity::Dirichlet {
            for j in 0..basis.len() {
                assert_eq!(b.get(i, j).norm(), 0.0);
            }
        }
    }
}

#[test]
fn gram_pivot_at_small_truncation() {
    for l in [2, 4, 6] {
        let g = gram_matrix(&GalerkinBasis::new(l)).unwrap();
        let (_, pivot) = cholesky(&g).unwrap();
        assert!(pivot > 1e-8, "L={l}: {pivot}");
    }
    assert!(gram_matrix(&GalerkinBasis::new(61)).is_err());
}

#[test]
fn zero_sigma_gives_neumann_clusters() {
    let l = 20;
    let sp = robin_spectrum(&BoundarySymbol::zero(), l).unwrap();
    assert_eq!(sp.eigenvalues.len(), (l + 1) * (l + 1));
    assert_eq!(sp.trusted_ell, l / 2);
    for ell in 0..=sp.trusted_ell {
        let gaps = sp.cluster_gaps(ell).unwrap();
        assert_eq!(gaps.len(), ell + 1);
        for g in gaps {
            assert!(g.abs() < 1e-9 * (1.0 + (ell * ell) as f64), "ℓ={ell}: {g}");
        }
    }
    assert!(sp.cluster_window(sp.trusted_ell + 1).is_err());
    let top = sp.trusted_ell;
    assert!((sp.trusted_cutoff() - (top * (top + 1)) as f64).abs() < 1e-8);
}

#[test]
fn truncation_too_small_is_rejected() {
    let s = sym(1.0, &[(3, 1.0)], &[]);
    assert!(robin_spectrum(&s, 9).is_err());
    assert!(robin_spectrum(&s, 10).is_ok());
}

#[test]
fn radial_block_reproduces_neumann_eigenvalues() {
    let l = 10;
    for m in [0usize, 1, 3] {
        let b = radial_block(m, l).unwrap();
        let n = b.len();
        assert_eq!(n, l - m + 1);
        let mut a = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                assert!((b.stiffness[i * n + j] - b.stiffness[j * n + i]).abs() < 1e-10);
                a.set(i, j, b.stiffness[i * n + j]);
            }
        }
        let ev = symmetric_eigenvalues(&a).unwrap();
        let mut ell = m;
        while ell <= l {
            let want = (ell * (ell + 1)) as f64;
            assert!(
                ev.iter().any(|v| (v - want).abs() < 1e-9 * want.max(1.0)),
                "m={m} ℓ={ell}: {ev:?}"
            );
            ell += 2;
        }
    }
    assert!(radial_block(5, 4).is_err());
}

#[test]
fn routes_agree_at_small_truncation() {
    let s = sym(0.8, &[(1, 0.5)], &[(1, 0.3)]);
    let l = 6;
    let harmonic = robin_spectrum_harmonic(&s, l).unwrap();
    let ortho = robin_spectrum(&s, l).unwrap().eigenvalues;
    assert_eq!(harmonic.len(), ortho.len());
    for (a, b) in harmonic.iter().zip(&ortho) {
        assert!((a - b).abs() < 1e-7 * b.abs().max(1.0), "{a} vs {b}");
    }
    let sys = galerkin_system(&s, 3).unwrap();
    assert_eq!(sys.basis.len(), 16);
}

#[test]
fn spectrum_decreases_with_truncation() {
    let s = sym(1.0, &[(2, 1.0)], &[(1, 0.4)]);
    let coarse = robin_spectrum(&s, 10).unwrap().eigenvalues;
    let mid = robin_spectrum(&s, 16).unwrap().eigenvalues;
    let fine = robin_spectrum(&s, 24).unwrap().eigenvalues;
    for k in 0..coarse.len() {
        assert!(mid[k] <= coarse[k] + 1e-9 * coarse[k].abs().max(1.0));
    }
    for k in 0..mid.len() {
        assert!(fine[k] <= mid[k] + 1e-9 * mid[k].abs().max(1.0));
    }
}

#[test]
fn constant_sigma_matches_separation_of_variables() {
    let c = 1.5;
    let top = 8;
    let sectors = constant_sigma_spectrum(c, top).unwrap();
    assert_eq!(sectors.len(), (top + 1) * (top + 2) / 2);
    let sp = robin_spectrum(&BoundarySymbol::constant(c), 40).unwrap();
    for (k, s) in sectors.iter().enumerate() {
        assert!(s.residual < 1e-12);
        let g = sp.eigenvalues[k];
        assert!(
            (g - s.lambda).abs() < 1e-8 * s.lambda.max(1.0),
            "k={k}: {g} vs {}",
            s.lambda
        );
    }
}

#[test]
fn secular_examples() {
    let z = constant_sigma_eigenvalue(0.0, 3, 1).unwrap();
    assert_eq!((z.nu, z.lambda, z.cluster), (5.0, 30.0, 5));
    assert!(constant_sigma_eigenvalue(-1.0, 0, 0).is_err());
    // the gap grows with σ and stays inside the branch interval
    let mut last = 0.0;
    for c in [0.1, 0.5, 1.0, 4.0, 20.0] {
        let e = constant_sigma_eigenvalue(c, 2, 1).unwrap();
        assert!(e.nu > 4.0 && e.nu < 5.0 && e.nu > last);
        last = e.nu;
    }
    let a = constant_sigma_eigenvalue(0.7, 3, 0).unwrap();
    let b = constant_sigma_eigenvalue(0.7, -3, 0).unwrap();
    assert_eq!(a.lambda, b.lambda);
}

#[test]
fn odd_sigma_eigenfunctions() {
    let s = sym(0.0, &[(1, 1.0), (3, 1.0)], &[]);
    let ell = 10;
    let odd = odd_eigenspace_construction(&s, ell).unwrap();
    assert_eq!(odd.degree, 3);
    assert_eq!(odd.frequencies, vec![-6, -4, -2, 0, 2, 4, 6]);
    assert_eq!(odd.dimension, 7);
    assert!(
        odd.residuals.iter().all(|&r| r < 1e-12),
        "{:?}",
        odd.residuals
    );
    assert!(robin_kernel_dimension(&s, ell).unwrap() >= odd.dimension);

    // the functions lie in the Galerkin space, so ℓ(ℓ+1) is an exact Ritz value
    let sp = robin_spectrum(&s, 24).unwrap();
    let lam = (ell * (ell + 1)) as f64;
    let hits = sp
        .eigenvalues
        .iter()
        .filter(|v| (*v - lam).abs() < 1e-8 * lam)
        .count();
    assert!(hits >= odd.dimension, "{hits}");

    assert!(odd_eigenspace_construction(&s, 3).is_err());
    assert!(odd_eigenspace_construction(&sym(1.0, &[(1, 1.0)], &[]), 10).is_err());
}

#[test]
fn kernel_dimension_examples() {
    let two_cos = sym(0.0, &[(1, 2.0)], &[]);
    assert_eq!(robin_kernel_dimension(&two_cos, 6).unwrap(), 5);
    let odd = odd_eigenspace_construction(&two_cos, 6).unwrap();
    assert_eq!(odd.dimension, 5);
    // σ = 0: Neumann harmonics of degree ℓ
    assert_eq!(
        robin_kernel_dimension(&BoundarySymbol::zero(), 7).unwrap(),
        8
    );
}

#[test]
fn window_count_examples() {
    let spectrum = [0.0, 2.1, 2.2, 4.0, 6.0, 6.5, 6.9];
    let r = cluster_window_counts(&spectrum, 1.0, 0..=2);
    let counts: Vec<usize> = r.counts.iter().map(|c| c.in_window).collect();
    assert_eq!(counts, vec![1, 2, 3]);
    assert_eq!(r.counts[1].nearest, 3);
    assert!(!r.counts[1].assigned_inside);
    assert!(r.counts[2].assigned_inside);
    assert_eq!(r.stragglers, vec![4.0]);
}

#[test]
fn galerkin_clusters_fill_their_windows() {
    let s = sym(1.0, &[(2, 1.0)], &[]);
    let sp = robin_spectrum(&s, 30).unwrap();
    let r = cluster_window_counts(&sp.eigenvalues, 4.0, 1..=12);
    for c in &r.counts {
        assert_eq!(c.nearest, c.ell + 1, "ℓ={}", c.ell);
        assert!(c.assigned_inside);
    }
    assert!(r.stragglers.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn spectrum_is_monotone_in_sigma(c0 in 0.0f64..2.0, c1 in -1.0f64..1.0, shift in 0.0f64..1.0) {
        let s = sym(c0, &[(1, c1)], &[]);
        let t = sym(c0 + shift, &[(1, c1)], &[]);
        let a = robin_spectrum(&s, 8).unwrap().eigenvalues;
        let b = robin_spectrum(&t, 8).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(*y >= *x - 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn boundary_matrix_is_hermitian(c0 in -1.0f64..1.0, re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let s = sym(c0, &[(2, re)], &[(1, im)]);
        let basis = GalerkinBasis::new(5);
        let b = boundary_matrix(&basis, &s).unwrap();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                prop_assert!((b.get(i, j) - b.get(j, i).conj()).norm() < 1e-14);
            }
        }
    }
}
