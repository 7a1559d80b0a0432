//! Decay-exponent fitting: least squares of `log N` against `log(1+t)`.

use anyhow::{bail, Result};
use liqlab::series::TimeSeries;

/// Minimum samples a fit window must contain.
pub const MIN_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    /// Positive decay exponent α in `N(t) ≈ C (1+t)^{-α}`.
    pub alpha: f64,
    pub r_squared: f64,
}

/// Fit the decay exponent over `window = (t1, t2)`.
///
/// Scaling the series by any positive constant shifts only the intercept,
/// so the exponent is invariant; on an exact power law the fit is exact on
/// any sub-window.
pub fn fit_exponent(series: &TimeSeries, window: (f64, f64)) -> Result<FitResult> {
    let (times, values) = series.window(window.0, window.1, MIN_SAMPLES)?;
    let xs: Vec<f64> = times.iter().map(|t| (1.0 + t).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        bail!("fit window [{}, {}] has no spread in time", window.0, window.1);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let fit = intercept + slope * x;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(FitResult { alpha: -slope, r_squared })
}
