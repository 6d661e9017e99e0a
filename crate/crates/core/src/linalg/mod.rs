//! Dense linear algebra: products, factorizations, symmetric eigenvalues and
//! the least-squares problem type.

mod cholesky;
mod eigen;
mod matrix;
mod qr;

pub use cholesky::{cholesky, cholesky_solve, CholeskyFactor, PIVOT_TOL, SYMMETRY_TOL};
pub use eigen::{sym_eigenvalues, tridiagonal_ql, tridiagonalize};
pub use matrix::{axpy, dot, gram, matmul, matmul_nt, matmul_tn, norm, norm_sq, DenseMatrix};
pub use qr::{orthonormal_columns, qr_least_squares, QrFactor, RANK_TOL};

pub(crate) use matrix::{gemm, gemm_into, View};

use crate::error::{Error, Result};

/// `min_x ½‖Ax − b‖²` with its exact solution cached.
#[derive(Clone, Debug)]
pub struct LsProblem {
    a: DenseMatrix,
    b: Vec<f64>,
    x_star: Vec<f64>,
    a_x_star: Vec<f64>,
    opt_residual_sq: f64,
}

impl LsProblem {
    /// Solves for `x*` by Householder QR; fails if `A` is rank deficient.
    pub fn new(a: DenseMatrix, b: Vec<f64>) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::dims("LsProblem", a.rows(), b.len()));
        }
        let x_star = qr_least_squares(&a, &b)?;
        let a_x_star = a.matvec(&x_star)?;
        let opt_residual_sq = a_x_star.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum();
        Ok(Self {
            a,
            b,
            x_star,
            a_x_star,
            opt_residual_sq,
        })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn x_star(&self) -> &[f64] {
        &self.x_star
    }

    /// `‖Ax* − b‖²`.
    pub fn opt_residual_sq(&self) -> f64 {
        self.opt_residual_sq
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn d(&self) -> usize {
        self.a.cols()
    }

    /// `Aᵀ(Ax − b)`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.a.matvec(x)?;
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        self.a.tr_matvec(&r)
    }

    /// `½‖Ax − b‖²`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let ax = self.a.matvec(x)?;
        Ok(0.5 * ax.iter().zip(&self.b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>())
    }
}

/// `‖A(x − x*)‖²`, evaluated as `‖Ax − Ax*‖²`.
pub fn prediction_error_sq(problem: &LsProblem, x: &[f64]) -> Result<f64> {
    let ax = problem.a.matvec(x)?;
    Ok(ax.iter().zip(&problem.a_x_star).map(|(p, q)| (p - q) * (p - q)).sum())
}
