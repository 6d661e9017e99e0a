//! Empirical spectra of sketched orthonormal bases against the limiting laws.

use serde::Serialize;
use sketchopt::linalg::{gram, DenseMatrix};
use sketchopt::rng::RngStream;
use sketchopt::sketch::{haar_sketch, pad_to_power_of_two, srht_apply};
use sketchopt::spectral::{empirical_spectrum, ks_distance, DensitySpec, EmpiricalSpectrum};

use crate::convergence::DATA_STREAM;
use crate::error::{HarnessError, HarnessResult};
use crate::synthetic::random_orthonormal;

#[derive(Clone, Debug)]
pub struct DensityConfig {
    pub n: usize,
    pub d: usize,
    pub m_list: Vec<usize>,
    pub seed: u64,
    pub haar: bool,
    /// Spacing of the theoretical-curve grid.
    pub grid_step: f64,
    /// Histogram bins for the empirical spectra.
    pub bins: usize,
}

impl DensityConfig {
    pub fn new(n: usize, d: usize, m_list: Vec<usize>) -> Self {
        Self {
            n,
            d,
            m_list,
            seed: 42,
            haar: false,
            grid_step: 1e-5,
            bins: 100,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DensityRow {
    pub family: &'static str,
    pub m: usize,
    pub x: f64,
    pub density: f64,
    pub cdf: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DensitySummary {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub m_effective: usize,
    pub ks_srht: f64,
    pub ks_haar: Option<f64>,
    pub min_eig: f64,
    pub max_eig: f64,
    pub edge_lo_theory: f64,
    pub edge_hi_theory: f64,
}

#[derive(Clone, Debug)]
pub struct DensityOutput {
    pub summary: Vec<DensitySummary>,
    pub rows: Vec<DensityRow>,
}

/// Eigenvalues of `C_S = (SU)ᵀ(SU)` for one SRHT draw, scaled by `n/m`.
pub fn srht_spectrum(u: &DenseMatrix, m: usize, stream: &RngStream) -> HarnessResult<(EmpiricalSpectrum, usize)> {
    let n = u.rows();
    let (sk, _) = srht_apply(u, &vec![0.0; n], m, stream)?;
    let es = empirical_spectrum(&gram(&sk.sa), n as f64 / m as f64)?;
    Ok((es, sk.m_effective))
}

/// As [`srht_spectrum`] for a Haar embedding.
pub fn haar_spectrum(u: &DenseMatrix, m: usize, stream: &RngStream) -> HarnessResult<EmpiricalSpectrum> {
    let n = u.rows();
    let (sk, _) = haar_sketch(u, &vec![0.0; n], m, stream)?;
    Ok(empirical_spectrum(&gram(&sk.sa), n as f64 / m as f64)?)
}

/// An orthonormal `n × d` basis, zero-padded to a power-of-two row count.
pub fn density_basis(n: usize, d: usize, seed: u64) -> HarnessResult<DenseMatrix> {
    let u = random_orthonormal(n, d, &RngStream::new(seed, DATA_STREAM))?;
    if n.is_power_of_two() {
        return Ok(u);
    }
    Ok(pad_to_power_of_two(&u, &vec![0.0; n])?.0)
}

/// KS distance, extreme eigenvalues and theoretical edges for one `m`.
pub fn density_summary(u: &DenseMatrix, m: usize, m_index: usize, seed: u64, haar: bool) -> HarnessResult<(DensitySummary, EmpiricalSpectrum, Option<EmpiricalSpectrum>)> {
    let (n, d) = u.shape();
    let (gamma, xi) = (d as f64 / n as f64, m as f64 / n as f64);
    if gamma + xi >= 1.0 {
        return Err(HarnessError::config(format!(
            "density comparison needs gamma + xi < 1, got {gamma} + {xi}"
        )));
    }
    let spec = DensitySpec::srht_rescaled(gamma, xi)?;
    let (es, m_effective) = srht_spectrum(u, m, &RngStream::new(seed, 2 * m_index as u64))?;
    let ks_srht = ks_distance(&es, &spec)?;
    let hs = if haar {
        Some(haar_spectrum(u, m, &RngStream::new(seed, 2 * m_index as u64 + 1))?)
    } else {
        None
    };
    let ks_haar = hs.as_ref().map(|h| ks_distance(h, &spec)).transpose()?;
    let s = DensitySummary {
        n,
        d,
        m,
        m_effective,
        ks_srht,
        ks_haar,
        min_eig: es.min().unwrap_or(f64::NAN),
        max_eig: es.max().unwrap_or(f64::NAN),
        edge_lo_theory: spec.support_lo,
        edge_hi_theory: spec.support_hi,
    };
    Ok((s, es, hs))
}

fn histogram_rows(family: &'static str, m: usize, es: &EmpiricalSpectrum, lo: f64, hi: f64, bins: usize) -> Vec<DensityRow> {
    let width = (hi - lo) / bins as f64;
    (0..bins)
        .map(|k| {
            let a = lo + k as f64 * width;
            let b = a + width;
            let count = es.cdf(b) - es.cdf(a);
            DensityRow {
                family,
                m,
                x: a + 0.5 * width,
                density: count / width,
                cdf: es.cdf(b),
            }
        })
        .collect()
}

fn curve_rows(family: &'static str, m: usize, spec: &DensitySpec, xs: &[f64]) -> HarnessResult<Vec<DensityRow>> {
    let cdf = spec.cdf_grid(xs)?;
    xs.iter()
        .zip(cdf)
        .map(|(&x, c)| {
            Ok(DensityRow {
                family,
                m,
                x,
                density: spec.density_eval(x)?,
                cdf: c,
            })
        })
        .collect()
}

pub fn run_density_experiment(cfg: &DensityConfig) -> HarnessResult<DensityOutput> {
    if cfg.d == 0 || cfg.n <= cfg.d || cfg.m_list.is_empty() {
        return Err(HarnessError::config("need 0 < d < n and at least one m"));
    }
    if !(cfg.grid_step > 0.0) || cfg.bins == 0 {
        return Err(HarnessError::config("grid step and bin count must be positive"));
    }
    let u = density_basis(cfg.n, cfg.d, cfg.seed)?;
    let (n, d) = u.shape();
    let mut out = DensityOutput {
        summary: Vec::new(),
        rows: Vec::new(),
    };
    for (mi, &m) in cfg.m_list.iter().enumerate() {
        if m <= d || m >= n {
            return Err(HarnessError::config(format!("need d < m < n, got m = {m}")));
        }
        let (s, es, hs) = density_summary(&u, m, mi, cfg.seed, cfg.haar)?;
        let (gamma, xi) = (d as f64 / n as f64, m as f64 / n as f64);
        let mp = DensitySpec::mp(gamma / xi)?;
        let srht = DensitySpec::srht_rescaled(gamma, xi)?;
        let (lo, hi) = {
            let (a, b) = mp.support_edges();
            let (c, e) = srht.support_edges();
            (a.min(c), b.max(e))
        };
        let steps = ((hi - lo) / cfg.grid_step).ceil() as usize;
        let xs: Vec<f64> = (0..=steps).map(|k| (lo + k as f64 * cfg.grid_step).min(hi)).collect();
        out.rows.extend(curve_rows("mp", m, &mp, &xs)?);
        out.rows.extend(curve_rows("srht_rescaled", m, &srht, &xs)?);
        out.rows.extend(histogram_rows("srht_empirical", m, &es, lo, hi, cfg.bins));
        if let Some(h) = &hs {
            out.rows.extend(histogram_rows("haar_empirical", m, h, lo, hi, cfg.bins));
        }
        out.summary.push(s);
    }
    Ok(out)
}
