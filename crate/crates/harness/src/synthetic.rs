//! Synthetic least-squares instances `A = U Σ Vᵀ`, `b = A x_pl + noise`.

use rand::Rng;
use rand_distr::StandardNormal;
use sketchopt::linalg::{matmul_nt, orthonormal_columns, DenseMatrix, LsProblem};
use sketchopt::rng::RngStream;
use sketchopt::{Error, Result};

/// Largest condition number `Σ_1/Σ_d` the default spec allows.
pub const DEFAULT_MAX_CONDITION: f64 = 1e4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticSpec {
    /// Requested `Σ_j = decay^j`.
    pub singular_decay: f64,
    /// Noise standard deviation; `None` means `1/√n`.
    pub noise_scale: Option<f64>,
    /// Planted-solution standard deviation; `None` means `1/√d`.
    pub planted_scale: Option<f64>,
    /// If set, the decay is raised until `Σ_1/Σ_d` is at most this value.
    pub max_condition: Option<f64>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            singular_decay: 0.98,
            noise_scale: None,
            planted_scale: None,
            max_condition: Some(DEFAULT_MAX_CONDITION),
        }
    }
}

impl SyntheticSpec {
    /// The decay actually used for `d` columns after applying the condition cap.
    pub fn effective_decay(&self, d: usize) -> f64 {
        match self.max_condition {
            Some(kmax) if d > 1 => self.singular_decay.max(kmax.powf(-1.0 / (d as f64 - 1.0))),
            _ => self.singular_decay,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticProblem {
    pub problem: LsProblem,
    /// Orthonormal `n × d` left factor.
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub x_planted: Vec<f64>,
    pub decay: f64,
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Orthonormal `n × d` factor from the QR of a Gaussian draw.
pub fn random_orthonormal(n: usize, d: usize, stream: &RngStream) -> Result<DenseMatrix> {
    let mut rng = stream.rng();
    orthonormal_columns(&gaussian_matrix(n, d, &mut rng))
}

pub fn gen_synthetic(n: usize, d: usize, spec: &SyntheticSpec, stream: &RngStream) -> Result<SyntheticProblem> {
    if d == 0 || n < d {
        return Err(Error::InvalidParameter(format!("need n >= d >= 1, got n={n}, d={d}")));
    }
    let decay = spec.effective_decay(d);
    if !(decay > 0.0 && decay <= 1.0) {
        return Err(Error::InvalidParameter(format!("decay must lie in (0, 1], got {decay}")));
    }
    let u = random_orthonormal(n, d, &stream.derive(0))?;
    let v = random_orthonormal(d, d, &stream.derive(1))?;
    let sigma: Vec<f64> = (1..=d).map(|j| decay.powi(j as i32)).collect();

    let mut us = u.clone();
    for i in 0..n {
        for (x, s) in us.row_mut(i).iter_mut().zip(&sigma) {
            *x *= s;
        }
    }
    let a = matmul_nt(&us, &v)?;

    let mut rng = stream.derive(2).rng();
    let planted = spec.planted_scale.unwrap_or(1.0 / (d as f64).sqrt());
    let noise = spec.noise_scale.unwrap_or(1.0 / (n as f64).sqrt());
    let x_planted: Vec<f64> = (0..d).map(|_| planted * rng.sample::<f64, _>(StandardNormal)).collect();
    let mut b = a.matvec(&x_planted)?;
    for bi in b.iter_mut() {
        *bi += noise * rng.sample::<f64, _>(StandardNormal);
    }
    let problem = LsProblem::new(a, b)?;
    Ok(SyntheticProblem {
        problem,
        u,
        singular_values: sigma,
        x_planted,
        decay,
    })
}
