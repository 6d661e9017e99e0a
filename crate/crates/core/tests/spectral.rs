mod common;

use common::*;
use num_complex::Complex64;
use sketchopt::linalg::{orthonormal_columns, DenseMatrix};
use sketchopt::rng::RngStream;
use sketchopt::sketch::{sketch, EmbeddingKind};
use sketchopt::spectral::*;

fn valid_grid(steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..steps {
        for j in (i + 1)..steps {
            let (g, x) = (i as f64 / steps as f64, j as f64 / steps as f64);
            if g + x < 1.0 {
                out.push((g, x));
            }
        }
    }
    out
}

#[test]
fn mp_normalization_and_moments() {
    for k in 1..=9 {
        let rho = k as f64 / 10.0;
        let s = DensitySpec::mp(rho).unwrap();
        assert!((s.integrate(|_| 1.0).unwrap() - 1.0).abs() < 1e-8, "rho {rho}");
        assert!((s.integrate(|x| x).unwrap() - 1.0).abs() < 1e-8, "rho {rho}");
        let inv = s.integrate(|x| 1.0 / x).unwrap();
        assert!((inv - 1.0 / (1.0 - rho)).abs() < 1e-8, "rho {rho}");
    }
}

#[test]
fn srht_normalization_on_grid() {
    for (g, x) in valid_grid(20) {
        for s in [DensitySpec::srht(g, x).unwrap(), DensitySpec::srht_rescaled(g, x).unwrap()] {
            assert!((s.integrate(|_| 1.0).unwrap() - 1.0).abs() < 1e-8, "({g}, {x})");
        }
    }
}

#[test]
fn srht_mean_equals_xi() {
    // E[C_S] = ξ I, so the limiting law has mean ξ and the rescaled one mean 1.
    for (g, x) in valid_grid(10) {
        let m = DensitySpec::srht(g, x).unwrap().integrate(|t| t).unwrap();
        assert!((m - x).abs() < 1e-8, "({g}, {x})");
        let r = DensitySpec::srht_rescaled(g, x).unwrap().integrate(|t| t).unwrap();
        assert!((r - 1.0).abs() < 1e-8);
    }
}

#[test]
fn rescaled_support_lies_inside_mp_support() {
    for (g, x) in valid_grid(40) {
        let (lo, hi) = DensitySpec::srht_rescaled(g, x).unwrap().support_edges();
        let (a, b) = mp_edges(g / x);
        assert!(lo >= a - 1e-14 && hi <= b + 1e-14, "({g}, {x})");
        let rho = g / x;
        let (elo, ehi) = (
            ((1.0 - g).sqrt() - ((1.0 - x) * rho).sqrt()).powi(2),
            ((1.0 - g).sqrt() + ((1.0 - x) * rho).sqrt()).powi(2),
        );
        assert!((lo - elo).abs() < 1e-12 && (hi - ehi).abs() < 1e-12);
    }
}

#[test]
fn density_vanishes_at_edges_and_outside() {
    for s in [
        DensitySpec::mp(0.5).unwrap(),
        DensitySpec::srht(0.2, 0.4).unwrap(),
        DensitySpec::srht_rescaled(0.3, 0.5).unwrap(),
    ] {
        let (lo, hi) = s.support_edges();
        assert_eq!(s.density_eval(lo).unwrap(), 0.0);
        assert_eq!(s.density_eval(hi).unwrap(), 0.0);
        assert_eq!(s.density_eval(lo - 0.1).unwrap(), 0.0);
        assert_eq!(s.density_eval(hi + 0.1).unwrap(), 0.0);
        assert!(s.density_eval(0.5 * (lo + hi)).unwrap() > 0.0);
    }
}

#[test]
fn atom_regime_is_rejected() {
    assert!(DensitySpec::srht(0.5, 0.6).unwrap().density_eval(0.5).is_err());
    assert!(DensitySpec::srht(0.4, 0.6).unwrap().cdf_eval(0.5).is_err());
}

#[test]
fn stieltjes_inversion_on_grid() {
    let (g, xi) = (0.2, 0.4);
    let s = DensitySpec::srht(g, xi).unwrap();
    let (lo, hi) = s.support_edges();
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        // Grid spanning the support plus a margin on each side.
        let x = lo - 0.05 + (hi - lo + 0.1) * (k as f64 + 0.5) / 200.0;
        if x <= 0.0 || x >= 1.0 {
            continue;
        }
        let m = stieltjes_mh(g, xi, Complex64::new(x, 1e-6)).unwrap();
        worst = worst.max((m.im / std::f64::consts::PI - s.density_eval(x).unwrap()).abs());
    }
    assert!(worst <= 1e-3, "max deviation {worst}");
}

#[test]
fn stieltjes_on_negative_axis_matches_definition() {
    for (g, xi) in [(0.2, 0.4), (0.1, 0.7), (0.3, 0.35)] {
        let s = DensitySpec::srht(g, xi).unwrap();
        for z in [-10.0, -1.0, -0.3] {
            let m = stieltjes_mh(g, xi, Complex64::new(z, 0.0)).unwrap();
            let q = s.integrate(|x| 1.0 / (x - z)).unwrap();
            assert!(m.im.abs() < 1e-12 && m.re > 0.0);
            assert!((m.re - q).abs() < 1e-6, "({g}, {xi}) z={z}");
        }
    }
}

#[test]
fn stieltjes_tail() {
    let z = -1e4;
    let m = stieltjes_mh(0.2, 0.4, Complex64::new(z, 0.0)).unwrap();
    assert!((m.re + 1.0 / z).abs() <= 1e-3 * (1.0 / z).abs());
}

#[test]
fn quantile_sample_has_small_ks() {
    let s = DensitySpec::mp(0.5).unwrap();
    let n = 400;
    let eig: Vec<f64> = (0..n).map(|i| s.quantile((i as f64 + 0.5) / n as f64).unwrap()).collect();
    let es = empirical_spectrum(&DenseMatrix::from_diag(&eig), 1.0).unwrap();
    assert!(ks_distance(&es, &s).unwrap() <= 1.0 / n as f64 + 1e-9);
}

#[test]
fn identity_sketch_gives_unit_spectrum() {
    let u = orthonormal_columns(&gaussian_matrix(64, 5, 1)).unwrap();
    let (sk, _) = sketch(EmbeddingKind::Identity, &u, &[0.0; 64], 64, &RngStream::new(0, 0)).unwrap();
    let es = empirical_spectrum(&sk.hessian(), 1.0).unwrap();
    assert!(es.eigenvalues.iter().all(|v| (v - 1.0).abs() < 1e-12));
}

#[test]
fn mp_density_point_value_and_median() {
    let s = DensitySpec::mp(0.5).unwrap();
    assert!((s.density_eval(1.0).unwrap() - 1.75f64.sqrt() / std::f64::consts::PI).abs() < 1e-14);

    let med = s.quantile(0.5).unwrap();
    let (n, d, m) = (4096, 800, 1600);
    let u = orthonormal_columns(&gaussian_matrix(n, d, 3)).unwrap();
    let (sk, _) = sketch(EmbeddingKind::Gaussian, &u, &vec![0.0; n], m, &RngStream::new(3, 9)).unwrap();
    let es = empirical_spectrum(&sk.hessian(), 1.0).unwrap();
    let emp = 0.5 * (es.eigenvalues[d / 2 - 1] + es.eigenvalues[d / 2]);
    assert!((emp - med).abs() < 0.02, "median {emp} vs {med}");

    // Histogram of the same sample near x = 1.
    let width = 0.1;
    let count = es.eigenvalues.iter().filter(|&&v| (v - 1.0).abs() < width / 2.0).count();
    let hist = count as f64 / (d as f64 * width);
    assert!((hist - s.density_eval(1.0).unwrap()).abs() < 0.05);
}

#[test]
fn cdf_is_monotone_on_grid() {
    let s = DensitySpec::srht_rescaled(0.2, 0.4).unwrap();
    let (lo, hi) = s.support_edges();
    let xs: Vec<f64> = (0..=500).map(|k| lo - 0.1 + (hi - lo + 0.2) * k as f64 / 500.0).collect();
    let c = s.cdf_grid(&xs).unwrap();
    assert!(c.windows(2).all(|w| w[0] <= w[1] + 1e-15));
    assert_eq!(c[0], 0.0);
    assert!((c[500] - 1.0).abs() < 1e-6);
}
