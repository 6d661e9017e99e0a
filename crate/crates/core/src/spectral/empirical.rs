use super::DensitySpec;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigenvalues, DenseMatrix};

/// Ascending eigenvalues of a symmetric matrix, multiplied by `rescale`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSpectrum {
    pub eigenvalues: Vec<f64>,
    pub rescale: f64,
}

impl EmpiricalSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    /// Fraction of eigenvalues `≤ x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.eigenvalues.partition_point(|&v| v <= x);
        k as f64 / self.eigenvalues.len().max(1) as f64
    }
}

pub fn empirical_spectrum(c: &DenseMatrix, rescale: f64) -> Result<EmpiricalSpectrum> {
    if !(rescale.is_finite() && rescale > 0.0) {
        return Err(Error::param(format!("rescale must be positive, got {rescale}")));
    }
    let mut eigenvalues = sym_eigenvalues(c)?;
    eigenvalues.iter_mut().for_each(|v| *v *= rescale);
    Ok(EmpiricalSpectrum { eigenvalues, rescale })
}

/// `sup_x |F_emp(x) − F(x)|`, attained at an eigenvalue or just below one.
pub fn ks_distance(es: &EmpiricalSpectrum, spec: &DensitySpec) -> Result<f64> {
    if es.is_empty() {
        return Err(Error::param("empty spectrum"));
    }
    let n = es.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in es.eigenvalues.iter().enumerate() {
        let f = spec.cdf_eval(x)?;
        worst = worst.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(worst)
}

/// Two-sample statistic `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_two_sample(a: &EmpiricalSpectrum, b: &EmpiricalSpectrum) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::param("empty spectrum"));
    }
    let mut worst = 0.0f64;
    for &x in a.eigenvalues.iter().chain(&b.eigenvalues) {
        worst = worst.max((a.cdf(x) - b.cdf(x)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let es = empirical_spectrum(&DenseMatrix::identity(5), 1.0).unwrap();
        assert!(es.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        let scaled = empirical_spectrum(&DenseMatrix::identity(3), 2.5).unwrap();
        assert_eq!(scaled.eigenvalues, vec![2.5; 3]);
    }

    #[test]
    fn quantile_sample_is_close() {
        let spec = DensitySpec::mp(0.5).unwrap();
        let k = 200;
        let eigenvalues: Vec<f64> = (0..k).map(|i| spec.quantile((i as f64 + 0.5) / k as f64).unwrap()).collect();
        let es = EmpiricalSpectrum { eigenvalues, rescale: 1.0 };
        assert!(ks_distance(&es, &spec).unwrap() <= 1.0 / k as f64 + 1e-9);
    }

    #[test]
    fn two_sample_self_is_zero() {
        let es = EmpiricalSpectrum {
            eigenvalues: vec![0.5, 1.5],
            rescale: 1.0,
        };
        assert_eq!(ks_two_sample(&es, &es).unwrap(), 0.0);
        let other = EmpiricalSpectrum {
            eigenvalues: vec![0.5, 2.5],
            rescale: 1.0,
        };
        assert_eq!(ks_two_sample(&es, &other).unwrap(), 0.5);
    }

    #[test]
    fn empty_is_rejected() {
        let es = EmpiricalSpectrum {
            eigenvalues: vec![],
            rescale: 1.0,
        };
        assert!(ks_distance(&es, &DensitySpec::mp(0.5).unwrap()).is_err());
    }
}
