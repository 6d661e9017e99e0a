use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// In-place orthonormal Walsh–Hadamard transform, `v ← H_n v`.
pub fn fwht_in_place(v: &mut [f64]) -> Result<()> {
    let n = v.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut h = 1;
    while h < n {
        for block in v.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = (a + b) * INV_SQRT2;
                *y = (a - b) * INV_SQRT2;
            }
        }
        h *= 2;
    }
    Ok(())
}

/// Applies `H_n` to every column of an `n × d` matrix, butterflying whole rows.
pub fn fwht_rows_in_place(m: &mut DenseMatrix) -> Result<()> {
    let (n, d) = m.shape();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if d == 0 {
        return Ok(());
    }
    let data = m.data_mut();
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h * d) {
            let (lo, hi) = block.split_at_mut(h * d);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = (a + b) * INV_SQRT2;
                *y = (a - b) * INV_SQRT2;
            }
        }
        h *= 2;
    }
    Ok(())
}
