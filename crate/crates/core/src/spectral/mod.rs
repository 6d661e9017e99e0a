//! Limiting spectral densities of sketched Gram matrices, their CDFs, the
//! Stieltjes transform `m_h`, and empirical comparisons.

mod empirical;
mod stieltjes;

pub use empirical::{empirical_spectrum, ks_distance, ks_two_sample, EmpiricalSpectrum};
pub use stieltjes::{stieltjes_mh, ComplexPoint};

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::{default_rule, edge_integral, edge_integral_theta, panel_rule, x_to_theta};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensityFamily {
    /// Marchenko–Pastur law `μ_ρ`.
    Mp { rho: f64 },
    /// Limiting law `f_h` of `C_S` for SRHT and Haar embeddings.
    Srht { gamma: f64, xi: f64 },
    /// `f_{h,r}(y) = ξ f_h(ξ y)`, the law of `C_S / ξ`.
    SrhtRescaled { gamma: f64, xi: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensitySpec {
    pub family: DensityFamily,
    pub support_lo: f64,
    pub support_hi: f64,
}

/// `(λ_h, Λ_h)`.
pub fn srht_edges(gamma: f64, xi: f64) -> (f64, f64) {
    let p = ((1.0 - gamma) * xi).sqrt();
    let q = ((1.0 - xi) * gamma).sqrt();
    ((p - q).powi(2), (p + q).powi(2))
}

/// `((1 − √ρ)², (1 + √ρ)²)`.
pub fn mp_edges(rho: f64) -> (f64, f64) {
    let s = rho.sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

pub(crate) fn check_gamma_xi(gamma: f64, xi: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < xi && xi < 1.0) {
        return Err(Error::param(format!("need 0 < gamma < xi < 1, got gamma={gamma}, xi={xi}")));
    }
    Ok(())
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::param(format!("need 0 < rho < 1, got rho={rho}")));
    }
    Ok(())
}

impl DensitySpec {
    pub fn new(family: DensityFamily) -> Result<Self> {
        let (support_lo, support_hi) = match family {
            DensityFamily::Mp { rho } => {
                check_rho(rho)?;
                mp_edges(rho)
            }
            DensityFamily::Srht { gamma, xi } => {
                check_gamma_xi(gamma, xi)?;
                srht_edges(gamma, xi)
            }
            DensityFamily::SrhtRescaled { gamma, xi } => {
                check_gamma_xi(gamma, xi)?;
                let (lo, hi) = srht_edges(gamma, xi);
                (lo / xi, hi / xi)
            }
        };
        Ok(Self {
            family,
            support_lo,
            support_hi,
        })
    }

    pub fn mp(rho: f64) -> Result<Self> {
        Self::new(DensityFamily::Mp { rho })
    }

    pub fn srht(gamma: f64, xi: f64) -> Result<Self> {
        Self::new(DensityFamily::Srht { gamma, xi })
    }

    pub fn srht_rescaled(gamma: f64, xi: f64) -> Result<Self> {
        Self::new(DensityFamily::SrhtRescaled { gamma, xi })
    }

    pub fn support_edges(&self) -> (f64, f64) {
        (self.support_lo, self.support_hi)
    }

    /// For `γ + ξ ≥ 1` the SRHT law has an atom at 1 that the density does not describe.
    fn check_absolutely_continuous(&self) -> Result<()> {
        match self.family {
            DensityFamily::Srht { gamma, xi } | DensityFamily::SrhtRescaled { gamma, xi } if gamma + xi >= 1.0 => {
                Err(Error::param(format!(
                    "SRHT density requires gamma + xi < 1, got gamma={gamma}, xi={xi}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// The smooth part `w(x)` with `density(x) = √((hi − x)(x − lo)) · w(x)`.
    fn smooth_factor(&self, x: f64) -> f64 {
        match self.family {
            DensityFamily::Mp { rho } => 1.0 / (2.0 * PI * rho * x),
            DensityFamily::Srht { gamma, .. } => 1.0 / (2.0 * PI * gamma * x * (1.0 - x)),
            DensityFamily::SrhtRescaled { gamma, xi } => {
                let rho = gamma / xi;
                1.0 / (2.0 * PI * rho * x * (1.0 - xi * x))
            }
        }
    }

    pub fn density_eval(&self, x: f64) -> Result<f64> {
        self.check_absolutely_continuous()?;
        if x <= self.support_lo || x >= self.support_hi {
            return Ok(0.0);
        }
        let r = ((self.support_hi - x) * (x - self.support_lo)).sqrt();
        Ok(r * self.smooth_factor(x))
    }

    /// `∫ g dF` over the support.
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> Result<f64> {
        self.check_absolutely_continuous()?;
        Ok(edge_integral(self.support_lo, self.support_hi, |x| self.smooth_factor(x) * g(x)))
    }

    pub fn cdf_eval(&self, x: f64) -> Result<f64> {
        self.check_absolutely_continuous()?;
        if x <= self.support_lo {
            return Ok(0.0);
        }
        if x >= self.support_hi {
            return Ok(1.0);
        }
        let (lo, hi) = self.support_edges();
        let theta = x_to_theta(lo, hi, x);
        let v = edge_integral_theta(default_rule(), lo, hi, 0.0, theta, |y| self.smooth_factor(y));
        Ok(v.clamp(0.0, 1.0))
    }

    /// CDF at every point of an ascending grid, by accumulating 8-node panels
    /// between consecutive θ-images.
    pub fn cdf_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.check_absolutely_continuous()?;
        if xs.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("cdf_grid needs an ascending grid"));
        }
        let (lo, hi) = self.support_edges();
        let rule = panel_rule();
        let mut out = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        let mut prev = 0.0;
        for &x in xs {
            let theta = x_to_theta(lo, hi, x);
            if theta > prev {
                acc += edge_integral_theta(rule, lo, hi, prev, theta, |y| self.smooth_factor(y));
                prev = theta;
            }
            let v = if x <= lo {
                0.0
            } else if x >= hi {
                1.0
            } else {
                acc.clamp(0.0, 1.0)
            };
            out.push(v);
        }
        Ok(out)
    }

    /// Smallest `x` with `cdf(x) ≥ p`, by bisection in θ.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.check_absolutely_continuous()?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("quantile level {p} outside [0, 1]")));
        }
        let (lo, hi) = self.support_edges();
        let (mut a, mut b) = (0.0, FRAC_PI_2);
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            let c = edge_integral_theta(default_rule(), lo, hi, 0.0, mid, |y| self.smooth_factor(y));
            if c < p {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(crate::quadrature::theta_to_x(lo, hi, 0.5 * (a + b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges() {
        let (a, b) = DensitySpec::mp(0.5).unwrap().support_edges();
        assert!((a - 0.085786).abs() < 1e-5 && (b - 2.914214).abs() < 1e-5);
        let (a, b) = DensitySpec::srht(0.2, 0.4).unwrap().support_edges();
        assert!((a - 0.0480816411546916).abs() < 1e-12 && (b - 0.8319183588453087).abs() < 1e-12);
        assert!((a - 0.04809).abs() < 1e-4 && (b - 0.83194).abs() < 1e-4);
        let (a, b) = DensitySpec::srht_rescaled(0.2, 0.4).unwrap().support_edges();
        assert!((a - 0.12020).abs() < 1e-4 && (b - 2.07984).abs() < 1e-4);
        let rho: f64 = 0.5;
        let p = (1.0f64 - 0.2).sqrt();
        let q = ((1.0 - 0.4) * rho).sqrt();
        assert!((a - (p - q).powi(2)).abs() < 1e-12 && (b - (p + q).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn point_values() {
        let mp = DensitySpec::mp(0.5).unwrap();
        assert!((mp.density_eval(1.0).unwrap() - 1.75f64.sqrt() / PI).abs() < 1e-12);
        let h = DensitySpec::srht(0.2, 0.4).unwrap();
        assert!((h.density_eval(0.4).unwrap() - 1.2927087493970653).abs() < 1e-12);
        assert!((h.density_eval(0.4).unwrap() - 1.29279).abs() < 1e-4);
        for s in [mp, h] {
            assert_eq!(s.density_eval(s.support_lo).unwrap(), 0.0);
            assert_eq!(s.density_eval(s.support_hi).unwrap(), 0.0);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(DensitySpec::mp(1.0).is_err());
        assert!(DensitySpec::mp(0.0).is_err());
        assert!(DensitySpec::srht(0.4, 0.2).is_err());
        let atom = DensitySpec::srht(0.5, 0.7).unwrap();
        assert!(atom.density_eval(0.5).is_err());
        assert!(atom.cdf_eval(0.5).is_err());
    }

    #[test]
    fn cdf_limits_and_total_mass() {
        let mp = DensitySpec::mp(0.5).unwrap();
        assert_eq!(mp.cdf_eval(0.0).unwrap(), 0.0);
        assert_eq!(mp.cdf_eval(3.0).unwrap(), 1.0);
        assert!((mp.integrate(|_| 1.0).unwrap() - 1.0).abs() < 1e-8);
        let below = mp.cdf_eval(mp.support_hi - 1e-12).unwrap();
        assert!((below - 1.0).abs() < 1e-6);
    }

    #[test]
    fn grid_cdf_matches_pointwise() {
        let h = DensitySpec::srht_rescaled(0.2, 0.4).unwrap();
        let xs: Vec<f64> = (0..400).map(|i| i as f64 * 0.0055).collect();
        let g = h.cdf_grid(&xs).unwrap();
        for (x, c) in xs.iter().zip(&g) {
            assert!((h.cdf_eval(*x).unwrap() - c).abs() < 1e-10);
        }
        assert!(g.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn quantile_inverts_cdf() {
        let mp = DensitySpec::mp(0.3).unwrap();
        for p in [0.1, 0.5, 0.9] {
            let x = mp.quantile(p).unwrap();
            assert!((mp.cdf_eval(x).unwrap() - p).abs() < 1e-10);
        }
    }
}
