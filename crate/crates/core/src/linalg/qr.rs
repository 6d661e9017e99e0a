//! Blocked Householder QR for tall matrices.
//!
//! Reflectors are accumulated in compact WY form, `H_1 ⋯ H_k = I − V T Vᵀ`, so
//! the trailing update and the formation of the thin `Q` run through GEMM.

use super::matrix::{dot, gemm_into, DenseMatrix, View};
use crate::error::{Error, Result};

/// Relative threshold on `|R_jj|` below which a matrix is treated as rank deficient.
pub const RANK_TOL: f64 = 1e-12;

const BLOCK: usize = 32;

/// Householder QR of an `n × d` matrix with `n ≥ d`.
#[derive(Clone, Debug)]
pub struct QrFactor {
    /// `R` on and above the diagonal, reflector tails below it.
    packed: DenseMatrix,
    tau: Vec<f64>,
    /// One `T` factor per column block, in block order.
    blocks: Vec<(usize, DenseMatrix)>,
}

impl QrFactor {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        let (n, d) = a.shape();
        if n < d {
            return Err(Error::dims("qr", format!("rows >= {d}"), n));
        }
        let mut packed = a.clone();
        let mut tau = vec![0.0; d];
        let mut blocks = Vec::new();

        let mut k0 = 0;
        while k0 < d {
            let kb = BLOCK.min(d - k0);
            let mp = n - k0;

            // Factor the panel in a contiguous buffer.
            let mut panel = vec![0.0; mp * kb];
            for r in 0..mp {
                let src = &packed.row(k0 + r)[k0..k0 + kb];
                panel[r * kb..(r + 1) * kb].copy_from_slice(src);
            }
            factor_panel(&mut panel, mp, kb, &mut tau[k0..k0 + kb]);
            for r in 0..mp {
                packed.row_mut(k0 + r)[k0..k0 + kb].copy_from_slice(&panel[r * kb..(r + 1) * kb]);
            }

            let v = explicit_v(&panel, mp, kb);
            let t = build_t(&v, mp, kb, &tau[k0..k0 + kb]);

            // Trailing update: A2 ← (I − V Tᵀ Vᵀ) A2.
            let rest = d - k0 - kb;
            if rest > 0 {
                let ld = d;
                let offset = k0 * ld + k0 + kb;
                let vview = View {
                    data: &v,
                    rows: mp,
                    cols: kb,
                    rs: kb as isize,
                    cs: 1,
                };
                let mut w = vec![0.0; kb * rest];
                {
                    let a2 = View {
                        data: &packed.data()[offset..],
                        rows: mp,
                        cols: rest,
                        rs: ld as isize,
                        cs: 1,
                    };
                    gemm_into(1.0, vview.t(), a2, 0.0, &mut w, rest);
                }
                let mut w2 = vec![0.0; kb * rest];
                let wview = View {
                    data: &w,
                    rows: kb,
                    cols: rest,
                    rs: rest as isize,
                    cs: 1,
                };
                gemm_into(1.0, View::of(&t).t(), wview, 0.0, &mut w2, rest);
                let w2view = View {
                    data: &w2,
                    rows: kb,
                    cols: rest,
                    rs: rest as isize,
                    cs: 1,
                };
                gemm_into(-1.0, vview, w2view, 1.0, &mut packed.data_mut()[offset..], ld);
            }

            blocks.push((k0, t));
            k0 += kb;
        }

        Ok(Self {
            packed,
            tau,
            blocks,
        })
    }

    pub fn nrows(&self) -> usize {
        self.packed.rows()
    }

    pub fn ncols(&self) -> usize {
        self.packed.cols()
    }

    /// Upper-triangular `d × d` factor.
    pub fn r(&self) -> DenseMatrix {
        let d = self.ncols();
        DenseMatrix::from_fn(d, d, |i, j| if j >= i { self.packed.get(i, j) } else { 0.0 })
    }

    pub fn r_diagonal(&self) -> Vec<f64> {
        self.packed.diagonal()
    }

    /// Fails with `RankDeficient` when some `|R_jj| ≤ RANK_TOL · max |R_jj|`.
    pub fn check_rank(&self) -> Result<()> {
        let diag = self.r_diagonal();
        let max = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let threshold = RANK_TOL * max;
        for (j, v) in diag.iter().enumerate() {
            if !(v.abs() > threshold) {
                return Err(Error::RankDeficient {
                    index: j,
                    value: v.abs(),
                    threshold,
                });
            }
        }
        Ok(())
    }

    /// Thin `n × d` factor with orthonormal columns.
    pub fn thin_q(&self) -> DenseMatrix {
        let (n, d) = self.packed.shape();
        let mut q = DenseMatrix::zeros(n, d);
        for i in 0..d {
            q.set(i, i, 1.0);
        }
        for (k0, t) in self.blocks.iter().rev() {
            let k0 = *k0;
            let kb = t.rows();
            let mp = n - k0;
            let cols = d - k0;
            let mut panel = vec![0.0; mp * kb];
            for r in 0..mp {
                panel[r * kb..(r + 1) * kb].copy_from_slice(&self.packed.row(k0 + r)[k0..k0 + kb]);
            }
            let v = explicit_v(&panel, mp, kb);
            let vview = View {
                data: &v,
                rows: mp,
                cols: kb,
                rs: kb as isize,
                cs: 1,
            };
            let offset = k0 * d + k0;
            let mut w = vec![0.0; kb * cols];
            {
                let qsub = View {
                    data: &q.data()[offset..],
                    rows: mp,
                    cols,
                    rs: d as isize,
                    cs: 1,
                };
                gemm_into(1.0, vview.t(), qsub, 0.0, &mut w, cols);
            }
            let mut w2 = vec![0.0; kb * cols];
            let wview = View {
                data: &w,
                rows: kb,
                cols,
                rs: cols as isize,
                cs: 1,
            };
            gemm_into(1.0, View::of(t), wview, 0.0, &mut w2, cols);
            let w2view = View {
                data: &w2,
                rows: kb,
                cols,
                rs: cols as isize,
                cs: 1,
            };
            gemm_into(-1.0, vview, w2view, 1.0, &mut q.data_mut()[offset..], d);
        }
        q
    }

    /// Overwrites `b` (length n) with `Qᵀ b`.
    pub fn apply_qt(&self, b: &mut [f64]) -> Result<()> {
        let (n, d) = self.packed.shape();
        if b.len() != n {
            return Err(Error::dims("apply_qt", n, b.len()));
        }
        for j in 0..d {
            let tau = self.tau[j];
            if tau == 0.0 {
                continue;
            }
            let mut s = b[j];
            for i in (j + 1)..n {
                s += self.packed.get(i, j) * b[i];
            }
            s *= tau;
            b[j] -= s;
            for i in (j + 1)..n {
                b[i] -= s * self.packed.get(i, j);
            }
        }
        Ok(())
    }

    /// Least-squares solution of `min ‖A x − b‖`, requiring full column rank.
    pub fn solve_least_squares(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_rank()?;
        let mut c = b.to_vec();
        self.apply_qt(&mut c)?;
        let d = self.ncols();
        let mut x = c[..d].to_vec();
        back_substitute(&self.packed, &mut x);
        Ok(x)
    }
}

/// Solves `R x = c` in place where `R` is the upper triangle of `packed`.
fn back_substitute(packed: &DenseMatrix, x: &mut [f64]) {
    let d = x.len();
    for i in (0..d).rev() {
        let row = &packed.row(i)[i + 1..d];
        let s = x[i] - dot(row, &x[i + 1..d]);
        x[i] = s / packed.get(i, i);
    }
}

/// Unblocked Householder on a contiguous `mp × kb` panel.
fn factor_panel(p: &mut [f64], mp: usize, kb: usize, tau: &mut [f64]) {
    let mut w = vec![0.0; kb];
    for j in 0..kb.min(mp) {
        let alpha = p[j * kb + j];
        let mut sigma = 0.0;
        for i in (j + 1)..mp {
            let x = p[i * kb + j];
            sigma += x * x;
        }
        if sigma == 0.0 {
            tau[j] = 0.0;
            continue;
        }
        let norm = (alpha * alpha + sigma).sqrt();
        let beta = if alpha >= 0.0 { -norm } else { norm };
        tau[j] = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        for i in (j + 1)..mp {
            p[i * kb + j] *= scale;
        }
        p[j * kb + j] = beta;

        // Apply H_j to the rest of the panel.
        let rest = kb - j - 1;
        if rest == 0 {
            continue;
        }
        let w = &mut w[..rest];
        w.copy_from_slice(&p[j * kb + j + 1..j * kb + kb]);
        for i in (j + 1)..mp {
            let vi = p[i * kb + j];
            if vi != 0.0 {
                let row = &p[i * kb + j + 1..i * kb + kb];
                for (wc, &a) in w.iter_mut().zip(row) {
                    *wc += vi * a;
                }
            }
        }
        let t = tau[j];
        w.iter_mut().for_each(|v| *v *= t);
        for (c, wc) in w.iter().enumerate() {
            p[j * kb + j + 1 + c] -= wc;
        }
        for i in (j + 1)..mp {
            let vi = p[i * kb + j];
            if vi != 0.0 {
                let row = &mut p[i * kb + j + 1..i * kb + kb];
                for (a, wc) in row.iter_mut().zip(w.iter()) {
                    *a -= vi * wc;
                }
            }
        }
    }
}

/// Unit lower-trapezoidal `V` from a factored panel.
fn explicit_v(panel: &[f64], mp: usize, kb: usize) -> Vec<f64> {
    let mut v = vec![0.0; mp * kb];
    for r in 0..mp {
        for c in 0..kb {
            v[r * kb + c] = match r.cmp(&c) {
                std::cmp::Ordering::Less => 0.0,
                std::cmp::Ordering::Equal => 1.0,
                std::cmp::Ordering::Greater => panel[r * kb + c],
            };
        }
    }
    v
}

/// Upper-triangular `T` with `H_1 ⋯ H_kb = I − V T Vᵀ`.
fn build_t(v: &[f64], mp: usize, kb: usize, tau: &[f64]) -> DenseMatrix {
    let mut t = DenseMatrix::zeros(kb, kb);
    let mut z = vec![0.0; kb];
    for i in 0..kb {
        t.set(i, i, tau[i]);
        if i == 0 || tau[i] == 0.0 {
            continue;
        }
        // z = V[:, 0..i]ᵀ v_i
        z[..i].iter_mut().for_each(|x| *x = 0.0);
        for r in i..mp {
            let vi = v[r * kb + i];
            if vi != 0.0 {
                for (zj, &vj) in z[..i].iter_mut().zip(&v[r * kb..r * kb + i]) {
                    *zj += vj * vi;
                }
            }
        }
        for row in 0..i {
            let mut s = 0.0;
            for k in row..i {
                s += t.get(row, k) * z[k];
            }
            t.set(row, i, -tau[i] * s);
        }
    }
    t
}

/// Ground-truth least-squares solve through Householder QR.
pub fn qr_least_squares(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::dims("qr_least_squares", a.rows(), b.len()));
    }
    QrFactor::new(a)?.solve_least_squares(b)
}

/// Orthonormal basis of the column space of a full-rank tall matrix.
pub fn orthonormal_columns(a: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(QrFactor::new(a)?.thin_q())
}
