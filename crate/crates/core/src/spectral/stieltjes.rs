use num_complex::Complex64;

use super::{check_gamma_xi, srht_edges};
use crate::error::{Error, Result};

pub type ComplexPoint = Complex64;

/// Stieltjes transform `m_h(z) = ∫ f_h(x)/(x − z) dx` of the SRHT limiting law.
///
/// `R(z)` is the branch `−√(z − λ_h)·√(z − Λ_h)` of `√((z − λ_h)(z − Λ_h))`, which is
/// analytic off `[λ_h, Λ_h]` and gives `m_h(z) ~ −1/z` at infinity.
pub fn stieltjes_mh(gamma: f64, xi: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    check_gamma_xi(gamma, xi)?;
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::param(format!("Stieltjes argument {z} lies on [0, inf)")));
    }
    let (lo, hi) = srht_edges(gamma, xi);
    let r = -((z - lo).sqrt() * (z - hi).sqrt());
    let one_minus_z = 1.0 - z;
    let zz = z * one_minus_z;
    let m = ((2.0 * gamma - 1.0) / one_minus_z + (xi - gamma) / zz - r / zz) / (2.0 * gamma);
    Ok(m)
}
