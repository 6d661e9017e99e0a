use super::matrix::{axpy, dot, DenseMatrix};
use crate::error::{Error, Result};

/// Relative pivot floor; pivots at or below `PIVOT_TOL · max diag` are rejected.
pub const PIVOT_TOL: f64 = 1e-12;

/// Symmetry tolerance on `‖M − Mᵀ‖_F / ‖M‖_F`.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Lower-triangular `L` with `L Lᵀ = M`.
#[derive(Clone, Debug)]
pub struct CholeskyFactor {
    lower: DenseMatrix,
}

impl CholeskyFactor {
    /// Wraps an existing lower factor. Panics if it is not square with a positive diagonal.
    pub fn from_lower(lower: DenseMatrix) -> Self {
        assert_eq!(lower.rows(), lower.cols());
        assert!(lower.diagonal().iter().all(|&v| v > 0.0));
        Self { lower }
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &DenseMatrix {
        &self.lower
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        super::matrix::matmul_nt(&self.lower, &self.lower).expect("square factor")
    }

    /// Solves `L Lᵀ y = v`.
    pub fn solve(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut y = v.to_vec();
        self.solve_in_place(&mut y)?;
        Ok(y)
    }

    pub fn solve_in_place(&self, y: &mut [f64]) -> Result<()> {
        let d = self.dim();
        if y.len() != d {
            return Err(Error::dims("cholesky_solve", d, y.len()));
        }
        let l = &self.lower;
        for i in 0..d {
            let s = y[i] - dot(&l.row(i)[..i], &y[..i]);
            y[i] = s / l.get(i, i);
        }
        // Lᵀ x = y, sweeping rows of L so every access is contiguous.
        for i in (0..d).rev() {
            y[i] /= l.get(i, i);
            let xi = y[i];
            let (head, _) = y.split_at_mut(i);
            axpy(-xi, &l.row(i)[..i], head);
        }
        Ok(())
    }
}

/// Cholesky factorization of a symmetric positive-definite matrix (lower triangle is read).
pub fn cholesky(m: &DenseMatrix) -> Result<CholeskyFactor> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::dims("cholesky", format!("{r}x{r}"), format!("{r}x{c}")));
    }
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let d = r;
    let max_diag = m.diagonal().iter().fold(0.0f64, |a, &v| a.max(v));
    let floor = PIVOT_TOL * max_diag;
    let mut l = DenseMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let s = {
                let li = &l.row(i)[..j];
                let lj = &l.row(j)[..j];
                m.get(i, j) - dot(li, lj)
            };
            if i == j {
                if !(s > floor) {
                    return Err(Error::NotPositiveDefinite { index: i, pivot: s });
                }
                l.set(i, i, s.sqrt());
            } else {
                let v = s / l.get(j, j);
                l.set(i, j, v);
            }
        }
    }
    Ok(CholeskyFactor { lower: l })
}

/// Convenience wrapper matching `cholesky_solve(F, v)`.
pub fn cholesky_solve(f: &CholeskyFactor, v: &[f64]) -> Result<Vec<f64>> {
    f.solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::gram;

    #[test]
    fn identity_factor() {
        let f = cholesky(&DenseMatrix::identity(4)).unwrap();
        assert_eq!(f.lower(), &DenseMatrix::identity(4));
        let v = [1.0, -2.0, 3.0, 0.5];
        assert_eq!(f.solve(&v).unwrap(), v.to_vec());
    }

    #[test]
    fn hand_factorization() {
        let f = cholesky(&DenseMatrix::from_rows(&[[4.0, 2.0], [2.0, 5.0]])).unwrap();
        let l = f.lower();
        assert_eq!(l.data(), &[2.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn diagonal_solve() {
        let f = cholesky(&DenseMatrix::from_rows(&[[4.0, 0.0], [0.0, 9.0]])).unwrap();
        let y = f.solve(&[8.0, 9.0]).unwrap();
        assert!((y[0] - 2.0).abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_gram_is_not_positive_definite() {
        let g = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]);
        let err = cholesky(&gram(&g)).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { index: 1, .. }));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let m = DenseMatrix::from_rows(&[[4.0, 1.0], [0.0, 4.0]]);
        assert!(matches!(cholesky(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn length_mismatch() {
        let f = cholesky(&DenseMatrix::identity(3)).unwrap();
        assert!(f.solve(&[1.0, 2.0]).is_err());
    }
}
