//! Fitted convergence rate against sketch size.

use serde::Serialize;
use sketchopt::orthopoly::rate_report;
use sketchopt::rng::RngStream;
use sketchopt::solvers::{RatioPolicy, X0Policy};

use crate::convergence::{run_method_trials, TrialPlan, DATA_STREAM};
use crate::error::{HarnessError, HarnessResult};
use crate::fit::{fit_rate, DEFAULT_WINDOW};
use crate::methods::{effective_n, HeavyBallOptions, MethodChoice};
use crate::synthetic::{gen_synthetic, SyntheticSpec};

#[derive(Clone, Debug)]
pub struct RatesConfig {
    pub n: usize,
    pub d_list: Vec<usize>,
    /// Number of sketch sizes per `d` when `m_list` is not given.
    pub m_grid: usize,
    /// Explicit sketch sizes, shared by every `d`.
    pub m_list: Option<Vec<usize>>,
    pub trials: usize,
    pub iters: usize,
    pub seed: u64,
    pub method: MethodChoice,
    pub delta: Option<f64>,
    pub hb: HeavyBallOptions,
    pub synthetic: SyntheticSpec,
    pub ratios: RatioPolicy,
}

impl RatesConfig {
    pub fn new(n: usize, d_list: Vec<usize>) -> Self {
        Self {
            n,
            d_list,
            m_grid: 12,
            m_list: None,
            trials: 20,
            iters: 20,
            seed: 42,
            method: MethodChoice::SrhtOpt,
            delta: None,
            hb: HeavyBallOptions::default(),
            synthetic: SyntheticSpec::default(),
            ratios: RatioPolicy::default(),
        }
    }
}

/// `K` sketch sizes with `ξ_k = γ + (1 − 2γ)k/(K + 1)`, spanning `γ < ξ < 1 − γ`.
pub fn m_grid(n: usize, d: usize, k: usize) -> Vec<usize> {
    let gamma = d as f64 / n as f64;
    let mut out: Vec<usize> = (1..=k)
        .map(|i| {
            let xi = gamma + (1.0 - 2.0 * gamma) * i as f64 / (k as f64 + 1.0);
            (xi * n as f64).round() as usize
        })
        .filter(|&m| m > d && m < n)
        .collect();
    out.dedup();
    out
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RateRow {
    pub method: String,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub gamma: f64,
    pub xi: f64,
    pub rate_emp: f64,
    pub rate_theory_gaussian: f64,
    pub rate_theory_srht: f64,
    pub rate_theory_srht_ref: f64,
    pub mean_m_effective: f64,
    pub diverged: usize,
}

pub fn run_rates_experiment(cfg: &RatesConfig) -> HarnessResult<Vec<RateRow>> {
    if cfg.iters < DEFAULT_WINDOW.0 + 3 {
        return Err(HarnessError::config(format!(
            "rate fit needs at least {} iterations",
            DEFAULT_WINDOW.0 + 3
        )));
    }
    if cfg.d_list.is_empty() || cfg.trials == 0 {
        return Err(HarnessError::config("need at least one d and one trial"));
    }
    let mut rows = Vec::new();
    for (di, &d) in cfg.d_list.iter().enumerate() {
        let data = gen_synthetic(cfg.n, d, &cfg.synthetic, &RngStream::new(cfg.seed, DATA_STREAM - di as u64))?;
        let ms = match &cfg.m_list {
            Some(v) => v.clone(),
            None => m_grid(cfg.n, d, cfg.m_grid),
        };
        for (mi, &m) in ms.iter().enumerate() {
            if m <= d {
                return Err(HarnessError::config(format!("m = {m} must exceed d = {d}")));
            }
            let plan = TrialPlan {
                choice: cfg.method,
                hb: cfg.hb,
                m,
                m_index: mi,
                trials: cfg.trials,
                iters: cfg.iters,
                delta: cfg.delta,
                seed: cfg.seed,
                x0: X0Policy::Zero,
                ratios: cfg.ratios,
            };
            let mt = run_method_trials(&data, &plan)?;
            let mean = mt.mean_ratio();
            let rate_emp = fit_rate(&mean, DEFAULT_WINDOW.0, DEFAULT_WINDOW.1.min(cfg.iters))?;
            let n_eff = effective_n(mt.resolved.embedding(), cfg.n);
            let (gamma, xi) = (d as f64 / n_eff as f64, m as f64 / n_eff as f64);
            let rr = rate_report(gamma, xi)?;
            rows.push(RateRow {
                method: cfg.method.name().to_string(),
                n: n_eff,
                d,
                m,
                gamma,
                xi,
                rate_emp,
                rate_theory_gaussian: rr.rho,
                rate_theory_srht: rr.rho_h,
                rate_theory_srht_ref: rr.rho_h_ref,
                mean_m_effective: mt.m_effective.iter().sum::<usize>() as f64 / mt.m_effective.len() as f64,
                diverged: mt.traces.iter().filter(|t| t.is_none()).count(),
            });
        }
    }
    Ok(rows)
}
