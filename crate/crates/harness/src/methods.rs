use std::fmt;
use std::str::FromStr;

use sketchopt::orthopoly::{rate_report, theoretical_loss_gaussian};
use sketchopt::sketch::EmbeddingKind;
use sketchopt::solvers::{heavy_ball_edge_params, HeavyBallParams, Method, DEFAULT_DELTA};

use crate::error::{HarnessError, HarnessResult};

/// Method names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodChoice {
    GaussianOpt,
    SrhtOpt,
    HbFixed,
    HbRefreshed,
}

impl MethodChoice {
    pub const ALL: [MethodChoice; 4] = [
        MethodChoice::GaussianOpt,
        MethodChoice::SrhtOpt,
        MethodChoice::HbFixed,
        MethodChoice::HbRefreshed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodChoice::GaussianOpt => "gaussian-opt",
            MethodChoice::SrhtOpt => "srht-opt",
            MethodChoice::HbFixed => "hb-fixed",
            MethodChoice::HbRefreshed => "hb-refreshed",
        }
    }

    /// Stable code mixed into per-trial stream indices.
    pub fn code(self) -> u64 {
        match self {
            MethodChoice::GaussianOpt => 0,
            MethodChoice::SrhtOpt => 1,
            MethodChoice::HbFixed => 2,
            MethodChoice::HbRefreshed => 3,
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodChoice {
    type Err = HarnessError;

    fn from_str(s: &str) -> HarnessResult<Self> {
        MethodChoice::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| HarnessError::config(format!("unknown method '{s}'")))
    }
}

/// Heavy-ball settings. Missing `mu`/`beta` come from the edge recipe for the
/// embedding's limiting spectrum, with edges widened by `edge_delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeavyBallOptions {
    pub mu: Option<f64>,
    pub beta: Option<f64>,
    pub embedding: EmbeddingKind,
    pub edge_delta: f64,
}

impl Default for HeavyBallOptions {
    fn default() -> Self {
        Self {
            mu: None,
            beta: None,
            embedding: EmbeddingKind::Srht,
            edge_delta: DEFAULT_DELTA,
        }
    }
}

impl HeavyBallOptions {
    pub fn resolve(&self, n: usize, d: usize, m: usize) -> HarnessResult<HeavyBallParams> {
        let edge = heavy_ball_edge_params(self.embedding, n, d, m, self.edge_delta)?;
        Ok(HeavyBallParams {
            mu: self.mu.unwrap_or(edge.mu),
            beta: self.beta.unwrap_or(edge.beta),
        })
    }
}

pub fn resolve_method(choice: MethodChoice, hb: &HeavyBallOptions, n: usize, d: usize, m: usize) -> HarnessResult<Method> {
    Ok(match choice {
        MethodChoice::GaussianOpt => Method::gaussian_opt(),
        MethodChoice::SrhtOpt => Method::srht_opt(),
        MethodChoice::HbFixed => Method::HeavyBallFixed {
            params: hb.resolve(n, d, m)?,
            embedding: hb.embedding,
        },
        MethodChoice::HbRefreshed => Method::HeavyBallRefreshed {
            params: hb.resolve(n, d, m)?,
            embedding: hb.embedding,
        },
    })
}

/// The sample size an embedding acts on: SRHT pads to a power of two.
pub fn effective_n(embedding: EmbeddingKind, n: usize) -> usize {
    if embedding == EmbeddingKind::Srht {
        n.next_power_of_two()
    } else {
        n
    }
}

/// Asymptotic per-iteration rate of `E‖Δ_t‖²` for a method, from `(n, d, m)` alone.
pub fn theory_rate(method: &Method, n: usize, d: usize, m: usize) -> f64 {
    let emb = method.embedding();
    let rho = d as f64 / m as f64;
    let srht = |n: usize| {
        let n = effective_n(emb, n);
        rate_report(d as f64 / n as f64, m as f64 / n as f64).ok()
    };
    match (method, emb) {
        (_, EmbeddingKind::Identity) => 0.0,
        (Method::GaussianOpt { .. }, _) => rho,
        (_, EmbeddingKind::Gaussian) => rho,
        (Method::HeavyBallRefreshed { .. }, _) => srht(n).map_or(f64::NAN, |r| r.rho_h_ref),
        _ => srht(n).map_or(f64::NAN, |r| r.rho_h),
    }
}

/// `rate^t`, written via the loss formula so `t = 0` is exactly one.
pub fn theory_ratio(rate: f64, t: usize) -> f64 {
    theoretical_loss_gaussian(t, rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for m in MethodChoice::ALL {
            assert_eq!(m.name().parse::<MethodChoice>().unwrap(), m);
        }
        assert!("newton".parse::<MethodChoice>().is_err());
    }

    #[test]
    fn theory_rates_at_rational_point() {
        let hb = HeavyBallOptions::default();
        let (n, d, m) = (4096, 820, 1640);
        let g = resolve_method(MethodChoice::GaussianOpt, &hb, n, d, m).unwrap();
        let s = resolve_method(MethodChoice::SrhtOpt, &hb, n, d, m).unwrap();
        let r = resolve_method(MethodChoice::HbRefreshed, &hb, n, d, m).unwrap();
        assert!((theory_rate(&g, n, d, m) - 0.5).abs() < 1e-12);
        assert!((theory_rate(&s, n, d, m) - 0.375).abs() < 1e-3);
        assert!((theory_rate(&r, n, d, m) - 3.0 / 7.0).abs() < 1e-3);
    }

    #[test]
    fn explicit_heavy_ball_parameters_win() {
        let hb = HeavyBallOptions {
            mu: Some(0.2),
            beta: Some(0.1),
            ..Default::default()
        };
        let p = hb.resolve(4096, 820, 1640).unwrap();
        assert_eq!((p.mu, p.beta), (0.2, 0.1));
    }
}
