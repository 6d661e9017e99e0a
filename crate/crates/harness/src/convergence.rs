//! Error-versus-iteration comparison of solvers on one shared problem.

use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;
use sketchopt::rng::RngStream;
use sketchopt::solvers::{solve, Method, PhaseTimings, RatioPolicy, SolverConfig, X0Policy};
use sketchopt::Error;

use crate::error::{HarnessError, HarnessResult};
use crate::methods::{effective_n, resolve_method, theory_rate, theory_ratio, HeavyBallOptions, MethodChoice};
use crate::pool::worker_pool;
use crate::synthetic::{gen_synthetic, SyntheticProblem, SyntheticSpec};

/// Stream index reserved for the data draw.
pub const DATA_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug)]
pub struct ConvergeConfig {
    pub n: usize,
    pub d: usize,
    pub m_list: Vec<usize>,
    pub trials: usize,
    pub iters: usize,
    pub seed: u64,
    pub methods: Vec<MethodChoice>,
    /// Schedule perturbation; `None` means each method's default.
    pub delta: Option<f64>,
    pub hb: HeavyBallOptions,
    pub synthetic: SyntheticSpec,
    pub x0: X0Policy,
    pub ratios: RatioPolicy,
}

impl ConvergeConfig {
    pub fn new(n: usize, d: usize, m_list: Vec<usize>) -> Self {
        Self {
            n,
            d,
            m_list,
            trials: 20,
            iters: 30,
            seed: 42,
            methods: vec![MethodChoice::GaussianOpt, MethodChoice::SrhtOpt],
            delta: None,
            hb: HeavyBallOptions::default(),
            synthetic: SyntheticSpec::default(),
            x0: X0Policy::Zero,
            ratios: RatioPolicy::default(),
        }
    }

    pub fn validate(&self) -> HarnessResult<()> {
        if self.n == 0 || self.d == 0 || self.trials == 0 || self.iters == 0 || self.m_list.is_empty() {
            return Err(HarnessError::config("n, d, trials, iters and the m list must be positive"));
        }
        if let Some(&m) = self.m_list.iter().find(|&&m| m <= self.d) {
            return Err(HarnessError::config(format!("every m must exceed d = {}, got {m}", self.d)));
        }
        if self.methods.is_empty() {
            return Err(HarnessError::config("no methods selected"));
        }
        Ok(())
    }
}

/// Per-iteration aggregate for one `(method, m)`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConvergenceRow {
    pub method: String,
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub t: usize,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub theory_ratio: f64,
    pub diverged: usize,
}

/// Raw per-trial results for one `(method, m)`.
#[derive(Clone, Debug)]
pub struct MethodTrials {
    pub method: MethodChoice,
    pub resolved: Method,
    pub m: usize,
    /// `None` for trials that diverged or failed.
    pub traces: Vec<Option<Vec<f64>>>,
    pub m_effective: Vec<usize>,
    pub failures: Vec<String>,
    pub timings: PhaseTimings,
}

impl MethodTrials {
    /// `mean_t ‖Δ_t‖² / mean ‖Δ_0‖²` over the trials that completed.
    pub fn mean_ratio(&self) -> Vec<f64> {
        aggregate(&self.traces).0
    }
}

#[derive(Clone, Debug)]
pub struct ConvergeOutput {
    pub rows: Vec<ConvergenceRow>,
    pub trials: Vec<MethodTrials>,
    pub decay: f64,
}

/// Stream index of one solver run.
pub fn trial_stream(m_index: usize, method: MethodChoice, trial: usize) -> u64 {
    ((m_index as u64) << 40) | (method.code() << 32) | trial as u64
}

/// One batch of independent solves of a single method.
#[derive(Clone, Debug)]
pub struct TrialPlan {
    pub choice: MethodChoice,
    pub hb: HeavyBallOptions,
    pub m: usize,
    /// Position of `m` in the experiment's list; keeps streams distinct across sizes.
    pub m_index: usize,
    pub trials: usize,
    pub iters: usize,
    pub delta: Option<f64>,
    pub seed: u64,
    pub x0: X0Policy,
    pub ratios: RatioPolicy,
}

/// Runs `plan.trials` independent solves on a shared problem.
pub fn run_method_trials(data: &SyntheticProblem, plan: &TrialPlan) -> HarnessResult<MethodTrials> {
    let p = &data.problem;
    let (choice, m) = (plan.choice, plan.m);
    let method = resolve_method(choice, &plan.hb, p.n(), p.d(), m)?;
    let runs: Vec<_> = worker_pool().install(|| {
        (0..plan.trials)
            .into_par_iter()
            .map(|trial| {
                let mut cfg = SolverConfig::new(method, m, plan.iters, plan.seed);
                cfg.stream = trial_stream(plan.m_index, choice, trial);
                cfg.delta = plan.delta.unwrap_or(method.default_delta());
                cfg.x0 = plan.x0;
                cfg.ratios = plan.ratios;
                solve(p, &cfg)
            })
            .collect()
    });
    let mut out = MethodTrials {
        method: choice,
        resolved: method,
        m,
        traces: Vec::with_capacity(plan.trials),
        m_effective: Vec::with_capacity(plan.trials),
        failures: Vec::new(),
        timings: PhaseTimings::default(),
    };
    for (trial, r) in runs.into_iter().enumerate() {
        match r {
            Ok(tr) => {
                out.timings.sketch += tr.timings.sketch;
                out.timings.factor += tr.timings.factor;
                out.timings.iterate += tr.timings.iterate;
                out.m_effective.push(tr.m_effective);
                out.traces.push(Some(tr.errors_sq));
            }
            Err(Error::Diverged { last_finite_t, partial }) => {
                out.m_effective.push(partial.m_effective);
                out.failures.push(format!("trial {trial}: diverged after t = {last_finite_t}"));
                out.traces.push(None);
            }
            Err(e) => {
                out.m_effective.push(0);
                out.failures.push(format!("trial {trial}: {e}"));
                out.traces.push(None);
            }
        }
    }
    Ok(out)
}

/// `(mean ratio, std ratio)` per iteration over completed traces.
fn aggregate(traces: &[Option<Vec<f64>>]) -> (Vec<f64>, Vec<f64>) {
    let done: Vec<&Vec<f64>> = traces.iter().flatten().collect();
    let len = done.iter().map(|t| t.len()).max().unwrap_or(0);
    if done.is_empty() {
        return (vec![f64::NAN; len], vec![f64::NAN; len]);
    }
    let k = done.len() as f64;
    let e0 = done.iter().map(|t| t[0]).sum::<f64>() / k;
    let mut mean = Vec::with_capacity(len);
    let mut std = Vec::with_capacity(len);
    for t in 0..len {
        let mu = done.iter().map(|tr| tr[t]).sum::<f64>() / k;
        let var = if done.len() > 1 {
            done.iter().map(|tr| (tr[t] - mu).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        mean.push(mu / e0);
        std.push(var.sqrt() / e0);
    }
    (mean, std)
}

pub fn run_convergence_experiment(cfg: &ConvergeConfig) -> HarnessResult<ConvergeOutput> {
    cfg.validate()?;
    let data = gen_synthetic(cfg.n, cfg.d, &cfg.synthetic, &RngStream::new(cfg.seed, DATA_STREAM))?;
    let mut rows = Vec::new();
    let mut all = Vec::new();
    for (mi, &m) in cfg.m_list.iter().enumerate() {
        for &choice in &cfg.methods {
            let plan = TrialPlan {
                choice,
                hb: cfg.hb,
                m,
                m_index: mi,
                trials: cfg.trials,
                iters: cfg.iters,
                delta: cfg.delta,
                seed: cfg.seed,
                x0: cfg.x0,
                ratios: cfg.ratios,
            };
            let mt = run_method_trials(&data, &plan)?;
            let (mean, std) = aggregate(&mt.traces);
            let diverged = mt.traces.iter().filter(|t| t.is_none()).count();
            let rate = theory_rate(&mt.resolved, cfg.n, cfg.d, m);
            for t in 0..=cfg.iters {
                rows.push(ConvergenceRow {
                    method: choice.name().to_string(),
                    n: effective_n(mt.resolved.embedding(), cfg.n),
                    d: cfg.d,
                    m,
                    t,
                    mean_ratio: mean.get(t).copied().unwrap_or(f64::NAN),
                    std_ratio: std.get(t).copied().unwrap_or(f64::NAN),
                    theory_ratio: theory_ratio(rate, t),
                    diverged,
                });
            }
            all.push(mt);
        }
    }
    Ok(ConvergeOutput {
        rows,
        trials: all,
        decay: data.decay,
    })
}

/// Sum of phase timings, for progress reporting.
pub fn total_time(t: &PhaseTimings) -> Duration {
    t.sketch + t.factor + t.iterate
}
