//! Experiment harness: synthetic problems, density comparisons, convergence
//! traces and rate sweeps, written as CSV or JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod convergence;
pub mod density;
pub mod error;
pub mod fit;
pub mod methods;
pub mod output;
pub mod pool;
pub mod rates;
pub mod synthetic;

pub use convergence::{run_convergence_experiment, ConvergeConfig, ConvergeOutput, ConvergenceRow};
pub use density::{run_density_experiment, DensityConfig, DensityOutput};
pub use error::{HarnessError, HarnessResult};
pub use fit::{fit_rate, fit_rate_default};
pub use methods::{HeavyBallOptions, MethodChoice};
pub use rates::{run_rates_experiment, RatesConfig};
pub use synthetic::{gen_synthetic, SyntheticProblem, SyntheticSpec};
