//! Hessian-sketch preconditioned first-order solvers.
//!
//! Every fixed-embedding method runs the same generic update
//! `x_t = x_{t−1} + b_t H_S^{-1}∇f(x_{t−1}) + (1 − a_t)(x_{t−2} − x_{t−1})`
//! and differs only in its [`CoefficientSchedule`].

use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, prediction_error_sq, CholeskyFactor, LsProblem};
use crate::orthopoly::{
    edge_recipe, gaussian_coefficients, heavy_ball_coefficients, srht_coefficients, srht_params,
    CoefficientSchedule,
};
use crate::rng::RngStream;
use crate::sketch::{pad_to_power_of_two, sketch, EmbeddingKind, SketchResult};
use crate::spectral::{check_gamma_xi, mp_edges, srht_edges};

/// Ratio of `errors_sq[t]` to `errors_sq[0]` above which a run counts as diverged.
pub const DIVERGENCE_FACTOR: f64 = 1e12;

/// Default perturbation of the SRHT-optimal schedule and of Heavy-ball edge eigenvalues.
pub const DEFAULT_DELTA: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeavyBallParams {
    pub mu: f64,
    pub beta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Constant schedule `a_t = 1 + ρ`, `b_t = −(1 − ρ)²` with `ρ = d/m`.
    GaussianOpt { embedding: EmbeddingKind },
    /// Ratio-recursion schedule with `γ = d/n`, `ξ = m/n`.
    SrhtOpt { embedding: EmbeddingKind },
    HeavyBallFixed {
        params: HeavyBallParams,
        embedding: EmbeddingKind,
    },
    /// Heavy-ball with `S` and `H_S` redrawn at every iteration.
    HeavyBallRefreshed {
        params: HeavyBallParams,
        embedding: EmbeddingKind,
    },
}

impl Method {
    pub fn gaussian_opt() -> Self {
        Method::GaussianOpt {
            embedding: EmbeddingKind::Gaussian,
        }
    }

    pub fn srht_opt() -> Self {
        Method::SrhtOpt {
            embedding: EmbeddingKind::Srht,
        }
    }

    pub fn embedding(&self) -> EmbeddingKind {
        match *self {
            Method::GaussianOpt { embedding }
            | Method::SrhtOpt { embedding }
            | Method::HeavyBallFixed { embedding, .. }
            | Method::HeavyBallRefreshed { embedding, .. } => embedding,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::GaussianOpt { .. } => "gaussian-opt",
            Method::SrhtOpt { .. } => "srht-opt",
            Method::HeavyBallFixed { .. } => "hb-fixed",
            Method::HeavyBallRefreshed { .. } => "hb-refreshed",
        }
    }

    /// Perturbation used when none is given: `0.01` for `SrhtOpt`, else `0`.
    pub fn default_delta(&self) -> f64 {
        match self {
            Method::SrhtOpt { .. } => DEFAULT_DELTA,
            _ => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum X0Policy {
    Zero,
    /// `x_0 ~ scale · N(0, I_d)`.
    SeededGaussian(f64),
}

/// Which sketch size enters `ξ = m/n` when a schedule is built after sketching.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RatioPolicy {
    /// The requested `m`.
    Nominal,
    /// The realized row count `m̃` of the sketch.
    #[default]
    Realized,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    pub m: usize,
    pub iters: usize,
    /// Schedule perturbation `a ← (1 + δ)a`, `b ← (1 − δ)b`.
    pub delta: f64,
    pub seed: u64,
    /// Stream index under `seed`; distinct trials should use distinct streams.
    pub stream: u64,
    pub x0: X0Policy,
    pub ratios: RatioPolicy,
}

impl SolverConfig {
    pub fn new(method: Method, m: usize, iters: usize, seed: u64) -> Self {
        Self {
            method,
            m,
            iters,
            delta: method.default_delta(),
            seed,
            stream: 0,
            x0: X0Policy::Zero,
            ratios: RatioPolicy::default(),
        }
    }

    fn validate(&self, problem: &LsProblem) -> Result<()> {
        if self.iters == 0 {
            return Err(Error::param("iters must be at least 1"));
        }
        if !(0.0..=0.1).contains(&self.delta) {
            return Err(Error::param(format!("delta must lie in [0, 0.1], got {}", self.delta)));
        }
        if self.method.embedding() != EmbeddingKind::Identity && self.m <= problem.d() {
            return Err(Error::param(format!("need m > d, got m={}, d={}", self.m, problem.d())));
        }
        Ok(())
    }

    fn root(&self) -> RngStream {
        RngStream::new(self.seed, self.stream)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub sketch: Duration,
    pub factor: Duration,
    pub iterate: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverTrace {
    /// `‖A(x_t − x*)‖²` for `t = 0..=T`.
    pub errors_sq: Vec<f64>,
    /// Rows kept by the (last) sketch.
    pub m_effective: usize,
    pub timings: PhaseTimings,
    pub x_final: Vec<f64>,
}

/// Cached Cholesky factor of `H_S = (SA)ᵀ(SA)`.
#[derive(Clone, Debug)]
pub struct Preconditioner {
    pub kind: EmbeddingKind,
    pub factor: CholeskyFactor,
    pub sketch: SketchResult,
    /// Row count the embedding acted on (padded for SRHT).
    pub n_effective: usize,
}

impl Preconditioner {
    /// `H_S^{-1} v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.factor.solve(v)
    }
}

/// Sketches `A` (zero-padding to a power of two for SRHT) and factors `H_S`.
pub fn build_preconditioner(
    problem: &LsProblem,
    embedding: EmbeddingKind,
    m: usize,
    stream: &RngStream,
) -> Result<Preconditioner> {
    let (p, _) = build_timed(problem, embedding, m, stream)?;
    Ok(p)
}

fn build_timed(
    problem: &LsProblem,
    embedding: EmbeddingKind,
    m: usize,
    stream: &RngStream,
) -> Result<(Preconditioner, PhaseTimings)> {
    let mut timings = PhaseTimings::default();
    let start = Instant::now();
    let a = problem.a();
    let (sk, n_effective) = if embedding == EmbeddingKind::Srht && !a.rows().is_power_of_two() {
        let (pa, pb, n) = pad_to_power_of_two(a, problem.b())?;
        (sketch(embedding, &pa, &pb, m, stream)?.0, n)
    } else {
        (sketch(embedding, a, problem.b(), m, stream)?.0, a.rows())
    };
    timings.sketch = start.elapsed();
    let start = Instant::now();
    let factor = cholesky(&sk.hessian())?;
    timings.factor = start.elapsed();
    Ok((
        Preconditioner {
            kind: embedding,
            factor,
            sketch: sk,
            n_effective,
        },
        timings,
    ))
}

/// `(μ_h, β_h)`, the Heavy-ball parameters tuned to the SRHT edges `λ_h`, `Λ_h`.
pub fn edge_heavy_ball_params(gamma: f64, xi: f64) -> Result<(f64, f64)> {
    check_gamma_xi(gamma, xi)?;
    let (lo, hi) = srht_edges(gamma, xi);
    edge_recipe(lo, hi)
}

/// Heavy-ball parameters from the limiting edges of `C_S` for an embedding,
/// with the edges widened to `((1 − δ)λ, (1 + δ)Λ)`.
pub fn heavy_ball_edge_params(embedding: EmbeddingKind, n: usize, d: usize, m: usize, delta: f64) -> Result<HeavyBallParams> {
    let (lo, hi) = match embedding {
        EmbeddingKind::Identity => return Ok(HeavyBallParams { mu: 1.0, beta: 0.0 }),
        EmbeddingKind::Gaussian => {
            if m <= d {
                return Err(Error::param(format!("need m > d, got m={m}, d={d}")));
            }
            mp_edges(d as f64 / m as f64)
        }
        EmbeddingKind::Srht | EmbeddingKind::Haar => {
            let n = if embedding == EmbeddingKind::Srht { n.next_power_of_two() } else { n };
            let (g, x) = (d as f64 / n as f64, m as f64 / n as f64);
            check_gamma_xi(g, x)?;
            srht_edges(g, x)
        }
    };
    let (mu, beta) = edge_recipe((1.0 - delta) * lo, (1.0 + delta) * hi)?;
    Ok(HeavyBallParams { mu, beta })
}

/// The (unperturbed) schedule a fixed-embedding method runs for `T` iterations.
pub fn method_schedule(method: &Method, n: usize, d: usize, m: usize, iters: usize) -> Result<CoefficientSchedule> {
    match *method {
        Method::GaussianOpt { .. } => gaussian_coefficients(d as f64 / m as f64, iters),
        Method::SrhtOpt { embedding } => {
            let n = if embedding == EmbeddingKind::Srht { n.next_power_of_two() } else { n };
            let p = srht_params(d as f64 / n as f64, m as f64 / n as f64)?;
            Ok(srht_coefficients(&p, iters))
        }
        Method::HeavyBallFixed { params, .. } | Method::HeavyBallRefreshed { params, .. } => {
            Ok(heavy_ball_coefficients(params.mu, params.beta, iters))
        }
    }
}

fn initial_point(problem: &LsProblem, policy: X0Policy, stream: &RngStream) -> Vec<f64> {
    match policy {
        X0Policy::Zero => vec![0.0; problem.d()],
        X0Policy::SeededGaussian(scale) => {
            let mut rng = stream.rng();
            (0..problem.d()).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
        }
    }
}

/// Runs one solver configuration and records `‖A(x_t − x*)‖²` for `t = 0..=T`.
pub fn solve(problem: &LsProblem, config: &SolverConfig) -> Result<SolverTrace> {
    config.validate(problem)?;
    let root = config.root();
    let x0 = initial_point(problem, config.x0, &root.derive(1));
    let embedding = config.method.embedding();

    if let Method::HeavyBallRefreshed { params, .. } = config.method {
        return solve_refreshed(problem, config, params, embedding, x0);
    }

    let (pre, mut timings) = build_timed(problem, embedding, config.m, &root.derive(0))?;
    let m = match config.ratios {
        RatioPolicy::Nominal => config.m,
        RatioPolicy::Realized => pre.sketch.m_effective,
    };
    let schedule = method_schedule(&config.method, problem.n(), problem.d(), m, config.iters)?
        .perturbed(config.delta);
    let start = Instant::now();
    let mut trace = iterate_schedule(problem, &pre, &schedule, &x0, config.iters)?;
    timings.iterate = start.elapsed();
    trace.timings = timings;
    Ok(trace)
}

/// Runs the generic update for `iters` steps with a prebuilt preconditioner.
pub fn iterate_schedule(
    problem: &LsProblem,
    pre: &Preconditioner,
    schedule: &CoefficientSchedule,
    x0: &[f64],
    iters: usize,
) -> Result<SolverTrace> {
    iterate_schedule_observed(problem, pre, schedule, x0, iters, |_, _| {})
}

/// As [`iterate_schedule`], calling `observe(t, x_t)` for every `t = 0..=T`.
pub fn iterate_schedule_observed(
    problem: &LsProblem,
    pre: &Preconditioner,
    schedule: &CoefficientSchedule,
    x0: &[f64],
    iters: usize,
    mut observe: impl FnMut(usize, &[f64]),
) -> Result<SolverTrace> {
    if schedule.len() < iters {
        return Err(Error::param(format!("schedule has {} steps, {iters} requested", schedule.len())));
    }
    if x0.len() != problem.d() {
        return Err(Error::dims("iterate_schedule", problem.d(), x0.len()));
    }
    let mut trace = SolverTrace {
        errors_sq: Vec::with_capacity(iters + 1),
        m_effective: pre.sketch.m_effective,
        timings: PhaseTimings::default(),
        x_final: Vec::new(),
    };
    let mut prev = x0.to_vec();
    let mut cur = x0.to_vec();
    observe(0, &cur);
    record(problem, &mut trace, &cur)?;
    for t in 1..=iters {
        let step = pre.apply(&problem.gradient(&cur)?)?;
        let (a, b) = (schedule.a_at(t), schedule.b_at(t));
        let momentum = if t == 1 { 0.0 } else { 1.0 - a };
        let next: Vec<f64> = cur
            .iter()
            .zip(&prev)
            .zip(&step)
            .map(|((&c, &p), &s)| c + b * s + momentum * (p - c))
            .collect();
        prev = std::mem::replace(&mut cur, next);
        observe(t, &cur);
        record(problem, &mut trace, &cur)?;
    }
    trace.x_final = cur;
    Ok(trace)
}

fn solve_refreshed(
    problem: &LsProblem,
    config: &SolverConfig,
    params: HeavyBallParams,
    embedding: EmbeddingKind,
    x0: Vec<f64>,
) -> Result<SolverTrace> {
    let root = config.root();
    let mu = (1.0 - config.delta) * params.mu;
    let beta = (1.0 + config.delta) * (1.0 + params.beta) - 1.0;
    let mut trace = SolverTrace {
        errors_sq: Vec::with_capacity(config.iters + 1),
        m_effective: 0,
        timings: PhaseTimings::default(),
        x_final: Vec::new(),
    };
    let mut prev = x0.clone();
    let mut cur = x0;
    record(problem, &mut trace, &cur)?;
    for t in 1..=config.iters {
        let (pre, timings) = build_timed(problem, embedding, config.m, &root.derive(1 + t as u64))?;
        trace.timings.sketch += timings.sketch;
        trace.timings.factor += timings.factor;
        trace.m_effective = pre.sketch.m_effective;
        let start = Instant::now();
        let step = pre.apply(&problem.gradient(&cur)?)?;
        let momentum = if t == 1 { 0.0 } else { beta };
        let next: Vec<f64> = cur
            .iter()
            .zip(&prev)
            .zip(&step)
            .map(|((&c, &p), &s)| c - mu * s + momentum * (c - p))
            .collect();
        prev = std::mem::replace(&mut cur, next);
        trace.timings.iterate += start.elapsed();
        record(problem, &mut trace, &cur)?;
    }
    trace.x_final = cur;
    Ok(trace)
}

fn record(problem: &LsProblem, trace: &mut SolverTrace, x: &[f64]) -> Result<()> {
    let e = if x.iter().all(|v| v.is_finite()) {
        prediction_error_sq(problem, x)?
    } else {
        f64::NAN
    };
    let blown = match trace.errors_sq.first() {
        Some(&e0) => e0 > 0.0 && e > DIVERGENCE_FACTOR * e0,
        None => false,
    };
    if !e.is_finite() || blown {
        let mut partial = std::mem::replace(
            trace,
            SolverTrace {
                errors_sq: Vec::new(),
                m_effective: 0,
                timings: PhaseTimings::default(),
                x_final: Vec::new(),
            },
        );
        let last_finite_t = partial.errors_sq.len().saturating_sub(1);
        partial.x_final = x.to_vec();
        return Err(Error::Diverged {
            last_finite_t,
            partial: Box::new(partial),
        });
    }
    trace.errors_sq.push(e);
    Ok(())
}
