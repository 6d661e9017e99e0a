//! Orthogonal polynomial families behind the optimal schedules: the
//! Marchenko–Pastur family `Π_t`, shifted Chebyshev `Q_k`, the SRHT family
//! `R_t`, and the `(a_t, b_t)` coefficient schedules derived from them.

use crate::error::{Error, Result};
use crate::spectral::{check_gamma_xi, check_rho, srht_edges};

/// `Π_t(x)` with `Π_0 = 1`, `Π_1 = 1 − x`, `Π_t = (1 + ρ − x)Π_{t−1} − ρΠ_{t−2}`.
pub fn mp_poly_eval(t: usize, rho: f64, x: f64) -> f64 {
    if t == 0 {
        return 1.0;
    }
    let (mut p0, mut p1) = (1.0, 1.0 - x);
    for _ in 2..=t {
        let p2 = (1.0 + rho - x) * p1 - rho * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Shifted Chebyshev polynomials of the second kind, orthonormal for `x μ_ρ(x)`.
pub fn chebyshev_q_eval(k: usize, rho: f64, x: f64) -> f64 {
    let s = (x - (1.0 + rho)) / rho.sqrt();
    if k == 0 {
        return 1.0;
    }
    let (mut q0, mut q1) = (1.0, s);
    for _ in 2..=k {
        let q2 = s * q1 - q0;
        q0 = q1;
        q1 = q2;
    }
    q1
}

/// Scaling parameters of the SRHT polynomial family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SrhtParams {
    pub gamma: f64,
    pub xi: f64,
    pub lambda_h: f64,
    pub big_lambda_h: f64,
    pub tau: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    pub kappa: f64,
    pub eta: f64,
}

pub fn srht_params(gamma: f64, xi: f64) -> Result<SrhtParams> {
    check_gamma_xi(gamma, xi)?;
    let (lo, hi) = srht_edges(gamma, xi);
    let (sl, sh) = (lo.sqrt(), hi.sqrt());
    let tau = ((sh - sl) / (sh + sl)).powi(2);
    let c = 4.0 / (1.0 / sh + 1.0 / sl).powi(2);
    let alpha = (1.0 - tau.sqrt()).powi(2);
    let beta = (1.0 + tau.sqrt()).powi(2);
    // α = c exactly on γ + ξ = 1; rounding leaves a residue there.
    if !(alpha - c > 1e-12 * c) {
        return Err(Error::param(format!("degenerate SRHT parameters: alpha={alpha} <= c={c}")));
    }
    let (p, q) = ((beta - c).sqrt(), (alpha - c).sqrt());
    let omega = 4.0 / (p + q).powi(2);
    let kappa = ((p - q) / (p + q)).powi(2);
    let eta = 1.0 + kappa + omega * c;
    Ok(SrhtParams {
        gamma,
        xi,
        lambda_h: lo,
        big_lambda_h: hi,
        tau,
        c,
        alpha,
        beta,
        omega,
        kappa,
        eta,
    })
}

impl SrhtParams {
    /// Roots `x_{1,2} = η/2 ± √(η²/4 − κ)` of the `u_t` characteristic equation.
    pub fn characteristic_roots(&self) -> (f64, f64) {
        let h = 0.5 * self.eta;
        let disc = (h * h - self.kappa).sqrt();
        (h + disc, h - disc)
    }

    /// `u_t = Π^κ_t(−ωc)` by `u_{t+1} = η u_t − κ u_{t−1}`, `u_0 = 1`, `u_1 = η − κ`.
    pub fn u(&self, t: usize) -> f64 {
        if t == 0 {
            return 1.0;
        }
        let (mut u0, mut u1) = (1.0, self.eta - self.kappa);
        for _ in 2..=t {
            let u2 = self.eta * u1 - self.kappa * u0;
            u0 = u1;
            u1 = u2;
        }
        u1
    }

    /// Closed form `u_t = ((x₁ − κ)x₁^t + (κ − x₂)x₂^t)/(x₁ − x₂)`.
    pub fn u_closed_form(&self, t: usize) -> f64 {
        let (x1, x2) = self.characteristic_roots();
        let k = self.kappa;
        ((x1 - k) * x1.powi(t as i32) + (k - x2) * x2.powi(t as i32)) / (x1 - x2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleKind {
    GaussianOpt { rho: f64 },
    SrhtOpt { gamma: f64, xi: f64 },
    HeavyBall { mu: f64, beta: f64 },
    /// Caller-supplied constant coefficients.
    Constant,
}

/// Coefficients of `x_t = x_{t−1} + b_t H_S^{-1}∇f(x_{t−1}) + (1 − a_t)(x_{t−2} − x_{t−1})`.
///
/// `a[t-1]` and `b[t-1]` hold `a_t` and `b_t` for `t = 1..=T`; `a_1` never enters the update.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSchedule {
    pub kind: ScheduleKind,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub delta: f64,
}

impl CoefficientSchedule {
    pub fn constant(a: f64, b: f64, iters: usize) -> Self {
        Self {
            kind: ScheduleKind::Constant,
            a: vec![a; iters],
            b: vec![b; iters],
            delta: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `a_t` for `t ≥ 1`.
    pub fn a_at(&self, t: usize) -> f64 {
        self.a[t - 1]
    }

    /// `b_t` for `t ≥ 1`.
    pub fn b_at(&self, t: usize) -> f64 {
        self.b[t - 1]
    }

    /// `a^δ = (1 + δ)a`, `b^δ = (1 − δ)b`.
    pub fn perturbed(&self, delta: f64) -> Self {
        Self {
            kind: self.kind,
            a: self.a.iter().map(|a| (1.0 + delta) * a).collect(),
            b: self.b.iter().map(|b| (1.0 - delta) * b).collect(),
            delta: self.delta + delta,
        }
    }
}

/// `a_t = 1 + ρ`, `b_t = −(1 − ρ)²`.
pub fn gaussian_coefficients(rho: f64, iters: usize) -> Result<CoefficientSchedule> {
    check_rho(rho)?;
    Ok(CoefficientSchedule {
        kind: ScheduleKind::GaussianOpt { rho },
        a: vec![1.0 + rho; iters],
        b: vec![-(1.0 - rho).powi(2); iters],
        delta: 0.0,
    })
}

/// `a_{h,t} = η/v_t`, `b_{h,t} = −ωc/v_t` with `v_t = u_t/u_{t−1}`, `v_1 = η − κ`,
/// `v_t = η − κ/v_{t−1}`.
pub fn srht_coefficients(params: &SrhtParams, iters: usize) -> CoefficientSchedule {
    let wc = params.omega * params.c;
    let mut a = Vec::with_capacity(iters);
    let mut b = Vec::with_capacity(iters);
    let mut v = params.eta - params.kappa;
    for t in 1..=iters {
        if t > 1 {
            v = params.eta - params.kappa / v;
        }
        a.push(params.eta / v);
        b.push(-wc / v);
    }
    CoefficientSchedule {
        kind: ScheduleKind::SrhtOpt {
            gamma: params.gamma,
            xi: params.xi,
        },
        a,
        b,
        delta: 0.0,
    }
}

/// Heavy-ball `x_{t+1} = x_t − μ H_S^{-1}∇f(x_t) + β(x_t − x_{t−1})`: `a_t = 1 + β`, `b_t = −μ`.
pub fn heavy_ball_coefficients(mu: f64, beta: f64, iters: usize) -> CoefficientSchedule {
    CoefficientSchedule {
        kind: ScheduleKind::HeavyBall { mu, beta },
        a: vec![1.0 + beta; iters],
        b: vec![-mu; iters],
        delta: 0.0,
    }
}

/// Heavy-ball parameters tuned to a spectrum supported on `[lo, hi]`:
/// `μ = 4/(1/√hi + 1/√lo)²`, `β = ((√hi − √lo)/(√hi + √lo))²`.
pub fn edge_recipe(lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::param(format!("need 0 < lo < hi, got lo={lo}, hi={hi}")));
    }
    let (sl, sh) = (lo.sqrt(), hi.sqrt());
    Ok((4.0 / (1.0 / sh + 1.0 / sl).powi(2), ((sh - sl) / (sh + sl)).powi(2)))
}

/// `R̄_t(x) = Π^κ_t(ω(cx − c)) / u_t`.
pub fn srht_poly_eval(t: usize, params: &SrhtParams, x: f64) -> f64 {
    let y = params.omega * (params.c * x - params.c);
    mp_poly_eval(t, params.kappa, y) / params.u(t)
}

/// `R_t(x) = Π^κ_t(ω(x − c)) / u_t`, the unscaled family orthogonal for `x μ_τ(x)/(x − c)`.
pub fn srht_poly_unscaled(t: usize, params: &SrhtParams, x: f64) -> f64 {
    srht_poly_eval(t, params, x / params.c)
}

/// Optimal loss `ρ^t` for Gaussian embeddings.
pub fn theoretical_loss_gaussian(t: usize, rho: f64) -> f64 {
    rho.powi(t as i32)
}

/// Asymptotic per-iteration rates: Gaussian `ρ`, SRHT-optimal `ρ_h`, refreshed-SRHT reference `ρ_h^ref`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateReport {
    pub rho: f64,
    pub rho_h: f64,
    pub rho_h_ref: f64,
}

pub fn rate_report(gamma: f64, xi: f64) -> Result<RateReport> {
    check_gamma_xi(gamma, xi)?;
    let rho = gamma / xi;
    Ok(RateReport {
        rho,
        rho_h: rho * (1.0 - xi) / (1.0 - gamma),
        rho_h_ref: rho * xi * (1.0 - xi) / (gamma * gamma + xi - 2.0 * gamma * xi),
    })
}
