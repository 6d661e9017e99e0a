//! Subspace embeddings: Gaussian, SRHT (`S = B H_n D P`) and Haar, plus the
//! identity embedding used as a test hook.

mod fwht;

pub use fwht::{fwht_in_place, fwht_rows_in_place};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{gemm, DenseMatrix, QrFactor, View};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbeddingKind {
    Gaussian,
    Srht,
    Haar,
    /// `S = I_n`; `m` is ignored.
    Identity,
}

impl EmbeddingKind {
    pub fn name(self) -> &'static str {
        match self {
            EmbeddingKind::Gaussian => "gaussian",
            EmbeddingKind::Srht => "srht",
            EmbeddingKind::Haar => "haar",
            EmbeddingKind::Identity => "identity",
        }
    }
}

/// Finite-sample dimensions and the ratios `γ = d/n`, `ξ = m/n`, `ρ = d/m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AspectRatios {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub gamma: f64,
    pub xi: f64,
    pub rho: f64,
}

impl AspectRatios {
    /// Requires `0 < d < m < n`.
    pub fn new(n: usize, d: usize, m: usize) -> Result<Self> {
        if !(0 < d && d < m && m < n) {
            return Err(Error::param(format!("need 0 < d < m < n, got n={n}, d={d}, m={m}")));
        }
        Ok(Self {
            n,
            d,
            m,
            gamma: d as f64 / n as f64,
            xi: m as f64 / n as f64,
            rho: d as f64 / m as f64,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SketchResult {
    pub kind: EmbeddingKind,
    /// `SA`, of size `m_effective × d`.
    pub sa: DenseMatrix,
    pub m_effective: usize,
    pub stream: RngStream,
}

impl SketchResult {
    /// `H_S = (SA)ᵀ(SA)`.
    pub fn hessian(&self) -> DenseMatrix {
        crate::linalg::gram(&self.sa)
    }
}

/// Sketches `A` and `b` with the given embedding.
pub fn sketch(
    kind: EmbeddingKind,
    a: &DenseMatrix,
    b: &[f64],
    m: usize,
    stream: &RngStream,
) -> Result<(SketchResult, Vec<f64>)> {
    match kind {
        EmbeddingKind::Gaussian => gaussian_sketch(a, b, m, stream),
        EmbeddingKind::Srht => srht_apply(a, b, m, stream),
        EmbeddingKind::Haar => haar_sketch(a, b, m, stream),
        EmbeddingKind::Identity => {
            check_rhs(a, b)?;
            let r = SketchResult {
                kind,
                sa: a.clone(),
                m_effective: a.rows(),
                stream: *stream,
            };
            Ok((r, b.to_vec()))
        }
    }
}

fn check_rhs(a: &DenseMatrix, b: &[f64]) -> Result<()> {
    if b.len() != a.rows() {
        return Err(Error::dims("sketch", a.rows(), b.len()));
    }
    Ok(())
}

/// SRHT: random row permutation, random signs, Walsh–Hadamard transform, then
/// Bernoulli(m/n) row retention.
pub fn srht_apply(
    a: &DenseMatrix,
    b: &[f64],
    m: usize,
    stream: &RngStream,
) -> Result<(SketchResult, Vec<f64>)> {
    check_rhs(a, b)?;
    let (n, d) = a.shape();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if m == 0 || m >= n {
        return Err(Error::param(format!("SRHT needs 0 < m < n, got m={m}, n={n}")));
    }
    let (sa, sb) = srht_transform(a, b, m, stream)?;
    if sa.rows() < d {
        return Err(Error::SketchTooThin {
            m_effective: sa.rows(),
            d,
        });
    }
    let r = SketchResult {
        kind: EmbeddingKind::Srht,
        m_effective: sa.rows(),
        sa,
        stream: *stream,
    };
    Ok((r, sb))
}

/// The explicit `m̃ × n` SRHT matrix for a stream, i.e. the transform applied to `I_n`.
pub fn srht_matrix(n: usize, m: usize, stream: &RngStream) -> Result<DenseMatrix> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if m == 0 || m >= n {
        return Err(Error::param(format!("SRHT needs 0 < m < n, got m={m}, n={n}")));
    }
    Ok(srht_transform(&DenseMatrix::identity(n), &vec![0.0; n], m, stream)?.0)
}

fn srht_transform(a: &DenseMatrix, b: &[f64], m: usize, stream: &RngStream) -> Result<(DenseMatrix, Vec<f64>)> {
    let (n, d) = a.shape();
    let mut rng = stream.rng();

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut work = DenseMatrix::zeros(n, d);
    let mut wb = vec![0.0; n];
    for (i, &src) in perm.iter().enumerate() {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        for (w, x) in work.row_mut(i).iter_mut().zip(a.row(src)) {
            *w = sign * x;
        }
        wb[i] = sign * b[src];
    }
    fwht_rows_in_place(&mut work)?;
    fwht_in_place(&mut wb)?;

    let p = m as f64 / n as f64;
    let keep: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < p).collect();
    let sb = keep.iter().map(|&i| wb[i]).collect();
    Ok((work.select_rows(&keep), sb))
}

const GAUSSIAN_BLOCK: usize = 256;

/// Gaussian embedding with i.i.d. `N(0, 1/m)` entries, generated one row block at a time.
pub fn gaussian_sketch(
    a: &DenseMatrix,
    b: &[f64],
    m: usize,
    stream: &RngStream,
) -> Result<(SketchResult, Vec<f64>)> {
    check_rhs(a, b)?;
    let (n, d) = a.shape();
    if m <= d {
        return Err(Error::param(format!("Gaussian sketch needs m > d, got m={m}, d={d}")));
    }
    let mut rng = stream.rng();
    let scale = 1.0 / (m as f64).sqrt();
    let mut sa = DenseMatrix::zeros(m, d);
    let mut sb = vec![0.0; m];
    let mut block = vec![0.0; GAUSSIAN_BLOCK * n];
    let mut r0 = 0;
    while r0 < m {
        let rb = GAUSSIAN_BLOCK.min(m - r0);
        let s = &mut block[..rb * n];
        for v in s.iter_mut() {
            *v = scale * rng.sample::<f64, _>(StandardNormal);
        }
        let sv = View {
            data: s,
            rows: rb,
            cols: n,
            rs: n as isize,
            cs: 1,
        };
        crate::linalg::gemm_into(1.0, sv, View::of(a), 0.0, &mut sa.data_mut()[r0 * d..], d);
        for (i, row) in s.chunks_exact(n).enumerate() {
            sb[r0 + i] = crate::linalg::dot(row, b);
        }
        r0 += rb;
    }
    let r = SketchResult {
        kind: EmbeddingKind::Gaussian,
        sa,
        m_effective: m,
        stream: *stream,
    };
    Ok((r, sb))
}

/// Haar embedding: the `m × n` matrix `S` with orthonormal rows spanning the row
/// space of an i.i.d. standard Gaussian draw.
pub fn haar_sketch(
    a: &DenseMatrix,
    b: &[f64],
    m: usize,
    stream: &RngStream,
) -> Result<(SketchResult, Vec<f64>)> {
    check_rhs(a, b)?;
    let s = haar_matrix(a.rows(), m, stream)?;
    if m <= a.cols() {
        return Err(Error::param(format!("Haar sketch needs m > d, got m={m}, d={}", a.cols())));
    }
    let sa = gemm(View::of(&s), View::of(a));
    let sb = s.matvec(b)?;
    let r = SketchResult {
        kind: EmbeddingKind::Haar,
        sa,
        m_effective: m,
        stream: *stream,
    };
    Ok((r, sb))
}

/// The `m × n` Haar-distributed matrix with orthonormal rows.
pub fn haar_matrix(n: usize, m: usize, stream: &RngStream) -> Result<DenseMatrix> {
    if m == 0 || m >= n {
        return Err(Error::param(format!("Haar sketch needs 0 < m < n, got m={m}, n={n}")));
    }
    let mut rng = stream.rng();
    let gt = DenseMatrix::from_fn(n, m, |_, _| rng.sample(StandardNormal));
    let f = QrFactor::new(&gt)?;
    f.check_rank()?;
    Ok(f.thin_q().transpose())
}

/// Appends zero rows to `A` and zeros to `b` up to the next power of two.
pub fn pad_to_power_of_two(a: &DenseMatrix, b: &[f64]) -> Result<(DenseMatrix, Vec<f64>, usize)> {
    check_rhs(a, b)?;
    let (n, d) = a.shape();
    let new_n = n.next_power_of_two();
    let mut data = a.data().to_vec();
    data.resize(new_n * d, 0.0);
    let mut pb = b.to_vec();
    pb.resize(new_n, 0.0);
    Ok((DenseMatrix::from_row_major(new_n, d, data)?, pb, new_n))
}
