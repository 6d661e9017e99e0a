use sketchopt::{Error, Result};

/// Default fit window `[2, 15]`.
pub const DEFAULT_WINDOW: (usize, usize) = (2, 15);

/// Per-iteration rate `exp(slope)` of a least-squares line through `log errors[t]`
/// for `t ∈ [t_min, t_max]`. The window is cut at the first non-positive or
/// non-finite value; fewer than four remaining points is an error.
pub fn fit_rate(errors: &[f64], t_min: usize, t_max: usize) -> Result<f64> {
    if t_max < t_min + 3 {
        return Err(Error::InvalidParameter(format!("fit window [{t_min}, {t_max}] has fewer than 4 points")));
    }
    let hi = t_max.min(errors.len().saturating_sub(1));
    let mut pts = Vec::new();
    for t in t_min..=hi {
        let e = errors[t];
        if !(e > 0.0 && e.is_finite()) {
            break;
        }
        pts.push((t as f64, e.ln()));
    }
    if pts.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "only {} usable points in fit window [{t_min}, {t_max}]",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok((sxy / sxx).exp())
}

/// [`fit_rate`] over the default window.
pub fn fit_rate_default(errors: &[f64]) -> Result<f64> {
    fit_rate(errors, DEFAULT_WINDOW.0, DEFAULT_WINDOW.1)
}
