//! Eigenvalues of dense symmetric matrices: Householder reduction to
//! tridiagonal form, then implicit QL with Wilkinson-style shifts.

use super::cholesky::SYMMETRY_TOL;
use super::matrix::{axpy, dot, DenseMatrix};
use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Ascending eigenvalues of a symmetric matrix.
pub fn sym_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::dims("sym_eigenvalues", format!("{r}x{r}"), format!("{r}x{c}")));
    }
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    if r == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.clone();
    for i in 0..r {
        for j in (i + 1)..r {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let (mut diag, mut off) = tridiagonalize(a);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Reduces a symmetric matrix to tridiagonal form. Returns `(diagonal, off-diagonal)`
/// with `off[i]` coupling `i` and `i + 1`; the last entry of `off` is zero.
pub fn tridiagonalize(mut a: DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let p = n - k - 1;
        let x = &a.row(k)[k + 1..];
        let alpha = x[0];
        let sigma = dot(&x[1..], &x[1..]);
        diag[k] = a.get(k, k);
        if sigma == 0.0 {
            off[k] = alpha;
            continue;
        }
        let norm = (alpha * alpha + sigma).sqrt();
        let beta = if alpha >= 0.0 { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        let v = &mut v[..p];
        v[0] = 1.0;
        for (vi, xi) in v[1..].iter_mut().zip(&x[1..]) {
            *vi = xi * scale;
        }
        off[k] = beta;

        // w = tau B v − (tau/2)(vᵀ tau B v) v, then B ← B − v wᵀ − w vᵀ.
        let w = &mut w[..p];
        for i in 0..p {
            let row = &a.row(k + 1 + i)[k + 1..];
            w[i] = tau * dot(row, v);
        }
        let kcoef = 0.5 * tau * dot(w, v);
        for (wi, vi) in w.iter_mut().zip(v.iter()) {
            *wi -= kcoef * vi;
        }
        for i in 0..p {
            let (vi, wi) = (v[i], w[i]);
            let row = &mut a.row_mut(k + 1 + i)[k + 1..];
            axpy(-vi, w, row);
            axpy(-wi, v, row);
        }
    }
    if n >= 2 {
        diag[n - 2] = a.get(n - 2, n - 2);
        off[n - 2] = a.get(n - 1, n - 2);
    }
    diag[n - 1] = a.get(n - 1, n - 1);
    off[n - 1] = 0.0;
    (diag, off)
}

/// Implicit QL iteration on a symmetric tridiagonal matrix, eigenvalues only.
/// On return `diag` holds the (unsorted) eigenvalues.
pub fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence(l));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
