use proptest::prelude::*;
use sketchopt::orthopoly::*;
use sketchopt::spectral::DensitySpec;

/// `0 < γ < ξ < 1` off the line `γ + ξ = 1`, where `α = c` and the family degenerates.
fn valid_grid(steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..steps {
        for j in (i + 1)..steps {
            if i + j == steps {
                continue;
            }
            out.push((i as f64 / steps as f64, j as f64 / steps as f64));
        }
    }
    out
}

#[test]
fn mp_family_is_orthogonal() {
    for rho in [0.3, 0.5, 0.7] {
        let s = DensitySpec::mp(rho).unwrap();
        for k in 0..=10 {
            for l in 0..k {
                let v = s.integrate(|x| mp_poly_eval(k, rho, x) * mp_poly_eval(l, rho, x)).unwrap();
                assert!(v.abs() < 1e-8, "rho {rho} ({k}, {l}): {v}");
            }
        }
    }
}

#[test]
fn chebyshev_moments_and_orthonormality() {
    let rho = 0.5;
    let s = DensitySpec::mp(rho).unwrap();
    for k in 0..=8 {
        let m = s.integrate(|x| chebyshev_q_eval(k, rho, x)).unwrap();
        assert!((m - (-rho.sqrt()).powi(k as i32)).abs() < 1e-7, "k {k}");
        for l in 0..=8 {
            let v = s.integrate(|x| chebyshev_q_eval(k, rho, x) * chebyshev_q_eval(l, rho, x) * x).unwrap();
            let e = if k == l { 1.0 } else { 0.0 };
            assert!((v - e).abs() < 1e-7, "({k}, {l}): {v}");
        }
    }
}

#[test]
fn gram_schmidt_identity() {
    for rho in [0.3, 0.5, 0.7] {
        let (a, b) = ((1.0 - f64::sqrt(rho)).powi(2), (1.0 + f64::sqrt(rho)).powi(2));
        for t in 0..=8 {
            for k in 0..=100 {
                let x = a + (b - a) * k as f64 / 100.0;
                let sum: f64 = (1..=t)
                    .map(|j| (-rho.sqrt()).powi(j as i32 - 1) * x * chebyshev_q_eval(j - 1, rho, x))
                    .sum();
                assert!((mp_poly_eval(t, rho, x) - (1.0 - sum)).abs() < 1e-9, "rho {rho} t {t} x {x}");
            }
        }
    }
}

#[test]
fn gaussian_loss_identity() {
    let rho = 0.5;
    let s = DensitySpec::mp(rho).unwrap();
    for t in 0..=8 {
        let v = (1.0 - rho) * s.integrate(|x| mp_poly_eval(t, rho, x).powi(2) / x).unwrap();
        assert!((v - theoretical_loss_gaussian(t, rho)).abs() < 1e-7, "t {t}");
    }
    assert_eq!(theoretical_loss_gaussian(0, 0.3), 1.0);
    assert_eq!(theoretical_loss_gaussian(3, 0.5), 0.125);
}

#[test]
fn srht_family_is_orthogonal() {
    for (g, xi) in [(0.2, 0.4), (0.1, 0.5), (0.3, 0.8)] {
        let p = srht_params(g, xi).unwrap();
        let s = DensitySpec::mp(p.tau).unwrap();
        let (lo, hi) = s.support_edges();
        assert!((lo - p.alpha).abs() < 1e-12 && (hi - p.beta).abs() < 1e-12);
        for k in 0..=6 {
            for l in 0..k {
                let v = s
                    .integrate(|x| srht_poly_unscaled(k, &p, x) * srht_poly_unscaled(l, &p, x) * x / (x - p.c))
                    .unwrap();
                assert!(v.abs() < 1e-7, "({g}, {xi}) ({k}, {l}): {v}");
            }
        }
    }
}

#[test]
fn srht_poly_normalization_and_first_degree() {
    let p = srht_params(0.2, 0.4).unwrap();
    for t in 0..=30 {
        assert!((srht_poly_eval(t, &p, 0.0) - 1.0).abs() < 1e-12);
    }
    let wc = p.omega * p.c;
    for x in [0.3, 1.0, 2.5] {
        assert!((srht_poly_eval(1, &p, x) - (1.0 - wc / (1.0 + wc) * x)).abs() < 1e-14);
    }
    assert!((srht_poly_eval(1, &p, 1.0) - 6.0 / 7.0).abs() < 1e-14);
}

#[test]
fn schedule_reproduces_the_polynomial_family() {
    // P_t from (a_t, b_t) by the solver's three-term rule equals R̄_t.
    let p = srht_params(0.25, 0.6).unwrap();
    let s = srht_coefficients(&p, 12);
    for x in [0.2, 0.9, 1.7, 4.0] {
        let (mut prev, mut cur) = (1.0, 1.0 + s.b_at(1) * x);
        assert!((cur - srht_poly_eval(1, &p, x)).abs() < 1e-12);
        for t in 2..=12 {
            let next = (s.a_at(t) + s.b_at(t) * x) * cur + (1.0 - s.a_at(t)) * prev;
            prev = cur;
            cur = next;
            assert!((cur - srht_poly_eval(t, &p, x)).abs() < 1e-10 * cur.abs().max(1.0), "t {t} x {x}");
        }
    }
}

#[test]
fn u_closed_form_matches_recursion() {
    for (g, xi) in valid_grid(10) {
        let p = srht_params(g, xi).unwrap();
        assert!((p.u(1) - (1.0 + p.omega * p.c)).abs() < 1e-12);
        for t in 0..=30 {
            let (r, c) = (p.u(t), p.u_closed_form(t));
            assert!((r - c).abs() <= 1e-10 * r.abs(), "({g}, {xi}) t {t}");
        }
    }
}

#[test]
fn coefficient_limits() {
    for (g, xi) in [(0.2, 0.4), (0.05, 0.9), (0.45, 0.5), (0.1, 0.3)] {
        let p = srht_params(g, xi).unwrap();
        let s = srht_coefficients(&p, 200);
        let (sh, sl) = (p.big_lambda_h.sqrt(), p.lambda_h.sqrt());
        let mu_h = 4.0 / (1.0 / sh + 1.0 / sl).powi(2);
        let beta_h = ((sh - sl) / (sh + sl)).powi(2);
        assert!((s.a_at(200) - (1.0 + beta_h)).abs() < 1e-6, "({g}, {xi})");
        assert!((s.b_at(200) + mu_h).abs() < 1e-6, "({g}, {xi})");
        // The larger characteristic root equals ω.
        let (x1, _) = p.characteristic_roots();
        assert!((x1 - p.omega).abs() < 1e-10 * p.omega, "({g}, {xi})");
    }
}

#[test]
fn ratio_recursion_is_stable_for_long_runs() {
    let p = srht_params(0.2, 0.4).unwrap();
    let s = srht_coefficients(&p, 1_000_000);
    let (x1, _) = p.characteristic_roots();
    let mut last = f64::NEG_INFINITY;
    for t in 1..=1_000_000 {
        let (a, b) = (s.a_at(t), s.b_at(t));
        assert!(a.is_finite() && b.is_finite());
        // v_t = η / a_t increases monotonically toward x₁.
        let v = p.eta / a;
        assert!(v >= last - 1e-15 && v <= x1 + 1e-12);
        last = v;
    }
    assert!((last - x1).abs() < 1e-12);
}

#[test]
fn tau_identity_and_discriminant_on_grid() {
    for (g, xi) in valid_grid(21) {
        let p = srht_params(g, xi).unwrap();
        let rho = g / xi;
        assert!((p.tau - rho * (1.0 - xi) / (1.0 - g)).abs() < 1e-10, "({g}, {xi})");
        assert!(p.eta * p.eta / 4.0 > p.kappa);
        assert!(p.alpha > p.c);
    }
}

#[test]
fn degenerate_line_is_rejected() {
    for (g, xi) in [(0.25, 0.75), (0.1, 0.9), (0.375, 0.625)] {
        assert!(srht_params(g, xi).is_err(), "({g}, {xi})");
    }
}

#[test]
fn gaussian_schedule_limits() {
    let s = gaussian_coefficients(1e-9, 5).unwrap();
    assert!((s.a_at(3) - 1.0).abs() < 1e-8 && (s.b_at(3) + 1.0).abs() < 1e-8);
    let s = gaussian_coefficients(0.5, 5).unwrap();
    for t in 1..=5 {
        assert_eq!(s.b_at(t), -0.25);
        assert_eq!(1.0 - s.a_at(t), -0.5);
    }
    assert!(gaussian_coefficients(1.0, 5).is_err());
}

#[test]
fn rate_ordering_on_grid() {
    for (g, xi) in valid_grid(20) {
        let r = rate_report(g, xi).unwrap();
        assert!(r.rho_h < r.rho, "({g}, {xi})");
        assert!(r.rho_h < r.rho_h_ref, "({g}, {xi})");
        assert!(r.rho_h_ref <= r.rho + 1e-15, "({g}, {xi})");
    }
    let near = rate_report(0.3, 0.3 + 1e-9).unwrap();
    assert!(near.rho > 1.0 - 1e-6 && near.rho_h > 1.0 - 1e-6 && near.rho_h_ref > 1.0 - 1e-6);
}

proptest! {
    #[test]
    fn mp_poly_anchor_and_recursion(t in 2usize..40, rho in 0.01f64..0.99, x in 0.0f64..4.0) {
        prop_assert!((mp_poly_eval(t, rho, 0.0) - 1.0).abs() < 1e-12);
        let lhs = mp_poly_eval(t, rho, x);
        let rhs = (1.0 + rho - x) * mp_poly_eval(t - 1, rho, x) - rho * mp_poly_eval(t - 2, rho, x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn params_invariants(g in 0.01f64..0.98, frac in 0.01f64..0.99) {
        let xi = g + (1.0 - g) * frac;
        prop_assume!(xi < 1.0 - 1e-9 && xi > g + 1e-9 && (g + xi - 1.0).abs() > 1e-4);
        let p = srht_params(g, xi).unwrap();
        prop_assert!((p.tau - (g / xi) * (1.0 - xi) / (1.0 - g)).abs() < 1e-10);
        let (sh, sl) = (p.big_lambda_h.sqrt(), p.lambda_h.sqrt());
        prop_assert!((p.tau - ((sh - sl) / (sh + sl)).powi(2)).abs() < 1e-12);
        prop_assert!(p.eta * p.eta / 4.0 > p.kappa);
        let (mu, beta) = edge_recipe(p.lambda_h, p.big_lambda_h).unwrap();
        prop_assert!((mu - p.c).abs() < 1e-12 && (beta - p.tau).abs() < 1e-12);
    }
}
