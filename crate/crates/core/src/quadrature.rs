//! Gauss–Legendre rules and the edge-aware substitution `x = lo + (hi − lo) sin²θ`
//! for integrands carrying a `√((hi − x)(x − lo))` factor.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Node count of the default rule.
pub const DEFAULT_NODES: usize = 2000;

/// A Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = x;
            nodes[n - 1 - i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 2000-node rule.
pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(DEFAULT_NODES))
}

/// The shared 8-node rule used for piecewise panels.
pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// Maps `θ ∈ [0, π/2]` to `x ∈ [lo, hi]`.
pub fn theta_to_x(lo: f64, hi: f64, theta: f64) -> f64 {
    let s = theta.sin();
    lo + (hi - lo) * s * s
}

/// Inverse of [`theta_to_x`], clamped to `[0, π/2]`.
pub fn x_to_theta(lo: f64, hi: f64, x: f64) -> f64 {
    let u = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
    u.sqrt().asin()
}

/// `∫_{lo}^{hi} √((hi − x)(x − lo)) g(x) dx` over `θ ∈ [θ_a, θ_b]`, i.e. up to the
/// images of the θ-endpoints.
pub fn edge_integral_theta(
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
    theta_a: f64,
    theta_b: f64,
    mut g: impl FnMut(f64) -> f64,
) -> f64 {
    let w = hi - lo;
    rule.integrate(theta_a, theta_b, |t| {
        let (s, c) = t.sin_cos();
        2.0 * w * w * s * s * c * c * g(lo + w * s * s)
    })
}

/// `∫_{lo}^{hi} √((hi − x)(x − lo)) g(x) dx` with the default rule.
pub fn edge_integral(lo: f64, hi: f64, g: impl FnMut(f64) -> f64) -> f64 {
    edge_integral_theta(default_rule(), lo, hi, 0.0, FRAC_PI_2, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules_are_exact_on_polynomials() {
        let r = GaussLegendre::new(8);
        // Exact for degree ≤ 15.
        let v = r.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 2f64.powi(16) / 16.0).abs() < 1e-9);
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn default_rule_weights() {
        let r = default_rule();
        assert_eq!(r.nodes.len(), DEFAULT_NODES);
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!(r.nodes.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn semicircle_area() {
        // ∫_{-1}^{1} √(1 − x²) dx = π/2.
        let v = edge_integral(-1.0, 1.0, |_| 1.0);
        assert!((v - FRAC_PI_2).abs() < 1e-13);
    }
}
