mod common;

use common::*;
use sketchopt::linalg::*;
use sketchopt::Error;

#[test]
fn matmul_identity_and_hand_case() {
    let m = uniform_matrix(3, 4, 1);
    assert_eq!(matmul(&DenseMatrix::identity(3), &m).unwrap(), m);
    let p = matmul(
        &DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]),
        &DenseMatrix::from_rows(&[[0.0], [1.0]]),
    )
    .unwrap();
    assert_eq!(p.data(), &[2.0, 4.0]);
}

#[test]
fn matmul_matches_triple_loop() {
    let a = uniform_matrix(5, 4, 2);
    let b = uniform_matrix(4, 3, 3);
    let p = matmul(&a, &b).unwrap();
    assert!(max_abs_diff(p.data(), naive_matmul(&a, &b).data()) < 1e-12);
}

#[test]
fn matmul_large_and_transposed_variants() {
    let a = uniform_matrix(67, 45, 4);
    let b = uniform_matrix(45, 38, 5);
    let naive = naive_matmul(&a, &b);
    assert!(max_abs_diff(matmul(&a, &b).unwrap().data(), naive.data()) < 1e-12);
    let at = a.transpose();
    assert!(max_abs_diff(matmul_tn(&at, &b).unwrap().data(), naive.data()) < 1e-12);
    let bt = b.transpose();
    assert!(max_abs_diff(matmul_nt(&a, &bt).unwrap().data(), naive.data()) < 1e-12);
    assert!(max_abs_diff(gram(&a).data(), naive_matmul(&at, &a).data()) < 1e-12);
}

#[test]
fn matmul_dimension_mismatch() {
    let err = matmul(&DenseMatrix::zeros(2, 3), &DenseMatrix::zeros(2, 3)).unwrap_err();
    assert!(matches!(err, Error::DimensionMismatch { .. }));
}

#[test]
fn least_squares_matches_normal_equations() {
    let a = uniform_matrix(50, 8, 6);
    let b = gaussian_vector(50, 6);
    let x = qr_least_squares(&a, &b).unwrap();
    let inv = naive_inverse(&naive_matmul(&a.transpose(), &a));
    let oracle = inv.matvec(&a.tr_matvec(&b).unwrap()).unwrap();
    assert!(max_abs_diff(&x, &oracle) < 1e-8);
}

#[test]
fn least_squares_normal_residual_and_optimality() {
    let a = gaussian_matrix(200, 12, 7);
    let b = gaussian_vector(200, 7);
    let p = LsProblem::new(a.clone(), b.clone()).unwrap();
    let g = p.gradient(p.x_star()).unwrap();
    assert!(norm(&g) <= 1e-8 * norm(&a.tr_matvec(&b).unwrap()));
    let f0 = p.objective(p.x_star()).unwrap();
    for j in 0..12 {
        for s in [1e-4, -1e-4] {
            let mut x = p.x_star().to_vec();
            x[j] += s;
            assert!(p.objective(&x).unwrap() >= f0 - 1e-10);
        }
    }
}

#[test]
fn rank_deficient_problem_is_rejected() {
    let mut a = uniform_matrix(30, 4, 8);
    for i in 0..30 {
        let v = a.get(i, 1);
        a.set(i, 3, 3.0 * v);
    }
    assert!(matches!(LsProblem::new(a, vec![1.0; 30]), Err(Error::RankDeficient { .. })));
}

#[test]
fn cholesky_reconstruction_and_solve() {
    let g = uniform_matrix(20, 6, 9);
    let m = gram(&g);
    let f = cholesky(&m).unwrap();
    let l = f.lower();
    for i in 0..6 {
        assert!(l.get(i, i) > 0.0);
        for j in (i + 1)..6 {
            assert_eq!(l.get(i, j), 0.0);
        }
    }
    let max_diag = m.diagonal().into_iter().fold(0.0, f64::max);
    assert!(max_abs_diff(f.reconstruct().data(), m.data()) <= 1e-10 * max_diag);

    let v = gaussian_vector(6, 9);
    let y = cholesky_solve(&f, &v).unwrap();
    let oracle = naive_inverse(&m).matvec(&v).unwrap();
    assert!(max_abs_diff(&y, &oracle) < 1e-8);
    let r: Vec<f64> = m.matvec(&y).unwrap().iter().zip(&v).map(|(a, b)| a - b).collect();
    assert!(norm(&r) <= 1e-8 * norm(&v));
}

#[test]
fn cholesky_roundtrip_larger() {
    let g = gaussian_matrix(300, 80, 10);
    let m = gram(&g);
    let f = cholesky(&m).unwrap();
    let rel = {
        let r = f.reconstruct();
        let diff: Vec<f64> = r.data().iter().zip(m.data()).map(|(a, b)| a - b).collect();
        norm(&diff) / m.frobenius_norm()
    };
    assert!(rel < 1e-10);
}

/// Roots of det(M − λI) by sign-change scan plus bisection.
fn char_poly_roots(m: &DenseMatrix) -> Vec<f64> {
    let n = m.rows();
    let radius = (0..n).map(|i| m.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
    let p = |lam: f64| {
        let mut s = m.clone();
        for i in 0..n {
            s.set(i, i, m.get(i, i) - lam);
        }
        determinant(&s)
    };
    let steps = 40_000;
    let h = 2.0 * radius / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -radius;
    let mut p0 = p(x0);
    for k in 1..=steps {
        let x1 = -radius + k as f64 * h;
        let p1 = p(x1);
        if p0 == 0.0 {
            roots.push(x0);
        } else if p0 * p1 < 0.0 {
            let (mut lo, mut hi, mut plo) = (x0, x1, p0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let pm = p(mid);
                if pm * plo > 0.0 {
                    lo = mid;
                    plo = pm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        p0 = p1;
    }
    roots
}

#[test]
fn eigenvalues_match_characteristic_polynomial() {
    for seed in 0..5 {
        let m = symmetric_matrix(8, 100 + seed);
        let ev = sym_eigenvalues(&m).unwrap();
        let roots = char_poly_roots(&m);
        assert_eq!(roots.len(), 8, "seed {seed}");
        assert!(max_abs_diff(&ev, &roots) < 1e-8, "seed {seed}");
    }
}

#[test]
fn eigenvalue_trace_identity() {
    for (k, n) in [1usize, 2, 3, 17, 64, 130, 200].into_iter().enumerate() {
        let m = symmetric_matrix(n, 200 + k as u64);
        let ev = sym_eigenvalues(&m).unwrap();
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        let tr = m.trace();
        assert!((ev.iter().sum::<f64>() - tr).abs() <= 1e-8 * tr.abs().max(1.0));
        // Frobenius norm is also spectral: Σλ² = ‖M‖_F².
        let fro = m.frobenius_norm().powi(2);
        assert!((ev.iter().map(|v| v * v).sum::<f64>() - fro).abs() <= 1e-8 * fro);
    }
}

#[test]
fn eigenvalues_of_spd_are_positive() {
    let m = gram(&gaussian_matrix(100, 40, 11));
    let ev = sym_eigenvalues(&m).unwrap();
    assert!(ev.iter().all(|&v| v > 0.0));
}

#[test]
fn prediction_error_pythagoras() {
    let a = gaussian_matrix(120, 10, 12);
    let b = gaussian_vector(120, 12);
    let p = LsProblem::new(a, b).unwrap();
    let x = gaussian_vector(10, 13);
    let lhs = prediction_error_sq(&p, &x).unwrap();
    let rhs = 2.0 * p.objective(&x).unwrap() - p.opt_residual_sq();
    assert!(lhs >= 0.0);
    assert!((lhs - rhs).abs() <= 1e-8 * lhs);
    assert!(prediction_error_sq(&p, p.x_star()).unwrap() < 1e-20);
}
