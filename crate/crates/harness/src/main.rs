use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sketchopt::sketch::EmbeddingKind;
use sketchopt::solvers::{RatioPolicy, X0Policy};
use sketchopt_harness::convergence::total_time;
use sketchopt_harness::output::{sibling_path, write_table, Format};
use sketchopt_harness::synthetic::DEFAULT_MAX_CONDITION;
use sketchopt_harness::{
    run_convergence_experiment, run_density_experiment, run_rates_experiment, ConvergeConfig, DensityConfig,
    HarnessError, HarnessResult, HeavyBallOptions, MethodChoice, RatesConfig, SyntheticSpec,
};

const RNG_POLICY: &str = "ChaCha8 per stream; data on stream 2^64-1 (minus the d index for rates); \
    trial streams (m_index << 40) | (method_code << 32) | trial; A and b shared across methods and trials";

/// Sketch-preconditioned least-squares experiments.
#[derive(Parser)]
#[command(name = "sketchopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical sketched spectra against the limiting densities.
    Density(DensityArgs),
    /// Error ratio per iteration for each method.
    Converge(ConvergeArgs),
    /// Fitted convergence rate across a sweep of sketch sizes.
    Rates(RatesArgs),
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long)]
    out: PathBuf,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ProblemArgs {
    /// Singular value decay of the synthetic design.
    #[arg(long, default_value_t = 0.98)]
    decay: f64,
    /// Condition number cap on the design; 0 disables it.
    #[arg(long, default_value_t = DEFAULT_MAX_CONDITION)]
    max_cond: f64,
}

impl ProblemArgs {
    fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            singular_decay: self.decay,
            max_condition: (self.max_cond > 0.0).then_some(self.max_cond),
            ..SyntheticSpec::default()
        }
    }
}

#[derive(Args)]
struct HbArgs {
    /// Heavy-ball step size; derived from the spectrum edges when omitted.
    #[arg(long)]
    hb_mu: Option<f64>,
    /// Heavy-ball momentum; derived from the spectrum edges when omitted.
    #[arg(long)]
    hb_beta: Option<f64>,
    /// Embedding for the Heavy-ball methods: gaussian, srht or haar.
    #[arg(long, default_value = "srht", value_parser = parse_embedding)]
    hb_embedding: EmbeddingKind,
    /// Relative widening of the spectrum edges used for default Heavy-ball parameters.
    #[arg(long, default_value_t = 0.01)]
    hb_edge_delta: f64,
}

impl HbArgs {
    fn options(&self) -> HeavyBallOptions {
        HeavyBallOptions {
            mu: self.hb_mu,
            beta: self.hb_beta,
            embedding: self.hb_embedding,
            edge_delta: self.hb_edge_delta,
        }
    }
}

#[derive(Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 8192)]
    n: usize,
    #[arg(long, default_value_t = 1640)]
    d: usize,
    #[arg(long, value_delimiter = ',', default_value = "1720,3280,4915")]
    m: Vec<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Also sketch with a Haar embedding (slow at large n).
    #[arg(long)]
    haar: bool,
    #[arg(long, default_value_t = 1e-5)]
    grid_step: f64,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, default_value_t = 800)]
    d: usize,
    #[arg(long, value_delimiter = ',', default_value = "1600")]
    m: Vec<usize>,
    /// Run at n = 8192 regardless of --n.
    #[arg(long)]
    full: bool,
    #[arg(long, value_delimiter = ',', default_value = "gaussian-opt,srht-opt,hb-fixed,hb-refreshed")]
    methods: Vec<MethodChoice>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 30)]
    iters: usize,
    /// Schedule perturbation; each method's default when omitted.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// zero, or gaussian:<scale>.
    #[arg(long, default_value = "zero", value_parser = parse_x0)]
    x0: X0Policy,
    /// Sketch size entering the optimal schedules: realized or nominal.
    #[arg(long, default_value = "realized", value_parser = parse_ratio)]
    ratio: RatioPolicy,
    #[command(flatten)]
    hb: HbArgs,
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RatesArgs {
    #[arg(long, default_value_t = 8192)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "500,1250,2000")]
    d: Vec<usize>,
    /// Number of sketch sizes per d, evenly spaced in m/n.
    #[arg(long, default_value_t = 12)]
    m_grid: usize,
    /// Explicit sketch sizes, overriding --m-grid.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    #[arg(long, default_value = "srht-opt")]
    method: MethodChoice,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "realized", value_parser = parse_ratio)]
    ratio: RatioPolicy,
    #[command(flatten)]
    hb: HbArgs,
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_embedding(s: &str) -> Result<EmbeddingKind, String> {
    match s {
        "gaussian" => Ok(EmbeddingKind::Gaussian),
        "srht" => Ok(EmbeddingKind::Srht),
        "haar" => Ok(EmbeddingKind::Haar),
        _ => Err(format!("unknown embedding '{s}'")),
    }
}

fn parse_x0(s: &str) -> Result<X0Policy, String> {
    if s == "zero" {
        return Ok(X0Policy::Zero);
    }
    let scale = s
        .strip_prefix("gaussian:")
        .ok_or_else(|| format!("expected 'zero' or 'gaussian:<scale>', got '{s}'"))?;
    scale.parse().map(X0Policy::SeededGaussian).map_err(|e| format!("bad scale: {e}"))
}

fn parse_ratio(s: &str) -> Result<RatioPolicy, String> {
    match s {
        "realized" => Ok(RatioPolicy::Realized),
        "nominal" => Ok(RatioPolicy::Nominal),
        _ => Err(format!("unknown ratio policy '{s}'")),
    }
}

fn ratio_name(r: RatioPolicy) -> &'static str {
    match r {
        RatioPolicy::Realized => "realized m_effective",
        RatioPolicy::Nominal => "nominal m",
    }
}

fn x0_name(x0: X0Policy) -> String {
    match x0 {
        X0Policy::Zero => "zero".into(),
        X0Policy::SeededGaussian(s) => format!("gaussian:{s}"),
    }
}

#[derive(Serialize)]
struct HbMeta {
    mu: Option<f64>,
    beta: Option<f64>,
    embedding: &'static str,
    edge_delta: f64,
}

impl From<&HeavyBallOptions> for HbMeta {
    fn from(h: &HeavyBallOptions) -> Self {
        Self {
            mu: h.mu,
            beta: h.beta,
            embedding: h.embedding.name(),
            edge_delta: h.edge_delta,
        }
    }
}

#[derive(Serialize)]
struct DensityMeta<'a> {
    experiment: &'static str,
    n: usize,
    d: usize,
    m_list: &'a [usize],
    seed: u64,
    haar: bool,
    grid_step: f64,
    bins: usize,
    rng_policy: &'static str,
    rescaling: &'static str,
    ks_note: &'static str,
}

#[derive(Serialize)]
struct ConvergeMeta<'a> {
    experiment: &'static str,
    n: usize,
    d: usize,
    m_list: &'a [usize],
    methods: Vec<&'static str>,
    trials: usize,
    iters: usize,
    delta: Option<f64>,
    seed: u64,
    x0: String,
    schedule_sketch_size: &'static str,
    heavy_ball: HbMeta,
    singular_decay: f64,
    effective_decay: f64,
    max_condition: Option<f64>,
    rng_policy: &'static str,
    aggregation: &'static str,
    m_effective: Vec<MEffective>,
}

#[derive(Serialize)]
struct MEffective {
    method: &'static str,
    m: usize,
    values: Vec<usize>,
}

#[derive(Serialize)]
struct RatesMeta<'a> {
    experiment: &'static str,
    n: usize,
    d_list: &'a [usize],
    m_grid: usize,
    m_list: Option<&'a [usize]>,
    method: &'static str,
    trials: usize,
    iters: usize,
    delta: Option<f64>,
    seed: u64,
    schedule_sketch_size: &'static str,
    heavy_ball: HbMeta,
    singular_decay: f64,
    max_condition: Option<f64>,
    fit_window: [usize; 2],
    rng_policy: &'static str,
}

fn density(a: DensityArgs) -> HarnessResult<()> {
    let mut cfg = DensityConfig::new(a.n, a.d, a.m.clone());
    cfg.seed = a.seed;
    cfg.haar = a.haar;
    cfg.grid_step = a.grid_step;
    cfg.bins = a.bins;
    let out = run_density_experiment(&cfg)?;
    let meta = DensityMeta {
        experiment: "density",
        n: cfg.n,
        d: cfg.d,
        m_list: &cfg.m_list,
        seed: cfg.seed,
        haar: cfg.haar,
        grid_step: cfg.grid_step,
        bins: cfg.bins,
        rng_policy: "basis on stream 2^64-1; SRHT sketch for the i-th m on stream 2i, Haar on 2i+1",
        rescaling: "empirical eigenvalues of C_S multiplied by n/m",
        ks_note: "the 0.05 KS threshold is a calibration, not a theoretical bound",
    };
    let fmt = a.output.format;
    write_table(&a.output.out, fmt, &meta, &out.rows)?;
    write_table(&sibling_path(&a.output.out, "summary", fmt.extension()), fmt, &meta, &out.summary)?;
    for s in &out.summary {
        eprintln!(
            "m={} m_effective={} ks_srht={:.4} min={:.4} max={:.4} edges=({:.4}, {:.4})",
            s.m, s.m_effective, s.ks_srht, s.min_eig, s.max_eig, s.edge_lo_theory, s.edge_hi_theory
        );
    }
    Ok(())
}

fn converge(a: ConvergeArgs) -> HarnessResult<()> {
    let n = if a.full { 8192 } else { a.n };
    let mut cfg = ConvergeConfig::new(n, a.d, a.m.clone());
    cfg.methods = a.methods.clone();
    cfg.trials = a.trials;
    cfg.iters = a.iters;
    cfg.delta = a.delta;
    cfg.seed = a.seed;
    cfg.x0 = a.x0;
    cfg.ratios = a.ratio;
    cfg.hb = a.hb.options();
    cfg.synthetic = a.problem.spec();
    let out = run_convergence_experiment(&cfg)?;
    for mt in &out.trials {
        let t = &mt.timings;
        eprintln!(
            "{} m={}: sketch {:.2?} factor {:.2?} iterate {:.2?} total {:.2?}; {} failed",
            mt.method,
            mt.m,
            t.sketch,
            t.factor,
            t.iterate,
            total_time(t),
            mt.failures.len()
        );
        for f in &mt.failures {
            eprintln!("  {f}");
        }
    }
    let meta = ConvergeMeta {
        experiment: "converge",
        n: cfg.n,
        d: cfg.d,
        m_list: &cfg.m_list,
        methods: cfg.methods.iter().map(|m| m.name()).collect(),
        trials: cfg.trials,
        iters: cfg.iters,
        delta: cfg.delta,
        seed: cfg.seed,
        x0: x0_name(cfg.x0),
        schedule_sketch_size: ratio_name(cfg.ratios),
        heavy_ball: HbMeta::from(&cfg.hb),
        singular_decay: cfg.synthetic.singular_decay,
        effective_decay: out.decay,
        max_condition: cfg.synthetic.max_condition,
        rng_policy: RNG_POLICY,
        aggregation: "mean of squared errors across trials, divided by the mean initial squared error",
        m_effective: out
            .trials
            .iter()
            .map(|mt| MEffective {
                method: mt.method.name(),
                m: mt.m,
                values: mt.m_effective.clone(),
            })
            .collect(),
    };
    write_table(&a.output.out, a.output.format, &meta, &out.rows)
}

fn rates(a: RatesArgs) -> HarnessResult<()> {
    let mut cfg = RatesConfig::new(a.n, a.d.clone());
    cfg.m_grid = a.m_grid;
    cfg.m_list = a.m.clone();
    cfg.method = a.method;
    cfg.trials = a.trials;
    cfg.iters = a.iters;
    cfg.delta = a.delta;
    cfg.seed = a.seed;
    cfg.ratios = a.ratio;
    cfg.hb = a.hb.options();
    cfg.synthetic = a.problem.spec();
    let start = Instant::now();
    let rows = run_rates_experiment(&cfg)?;
    eprintln!("{} rows in {:.2?}", rows.len(), start.elapsed());
    let meta = RatesMeta {
        experiment: "rates",
        n: cfg.n,
        d_list: &cfg.d_list,
        m_grid: cfg.m_grid,
        m_list: cfg.m_list.as_deref(),
        method: cfg.method.name(),
        trials: cfg.trials,
        iters: cfg.iters,
        delta: cfg.delta,
        seed: cfg.seed,
        schedule_sketch_size: ratio_name(cfg.ratios),
        heavy_ball: HbMeta::from(&cfg.hb),
        singular_decay: cfg.synthetic.singular_decay,
        max_condition: cfg.synthetic.max_condition,
        fit_window: [sketchopt_harness::fit::DEFAULT_WINDOW.0, sketchopt_harness::fit::DEFAULT_WINDOW.1],
        rng_policy: RNG_POLICY,
    };
    write_table(&a.output.out, a.output.format, &meta, &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), HarnessError> = match cli.command {
        Command::Density(a) => density(a),
        Command::Converge(a) => converge(a),
        Command::Rates(a) => rates(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
