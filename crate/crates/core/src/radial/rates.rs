//! Two-sided rate brackets: the falsifiable surrogate for "upper and lower
//! bounds with time-independent constants".

use crate::series::TimeSeries;

use super::RadialError;

/// Extremes of `N(t) (1+t)^{exponent}` over a window. When the series truly
/// follows `C (1+t)^{-exponent}`, both constants coincide; a wrong exponent
/// makes the ratio grow across decades.
#[derive(Clone, Copy, Debug)]
pub struct RateBracket {
    pub c_lower: f64,
    pub c_upper: f64,
    pub two_sided: bool,
}

impl RateBracket {
    pub fn ratio(&self) -> f64 {
        self.c_upper / self.c_lower
    }
}

/// Bracket the compensated series over `window`, declaring it two-sided when
/// `c_upper / c_lower ≤ ratio_bound`.
pub fn two_sided_rate_check(
    series: &TimeSeries,
    exponent: f64,
    window: (f64, f64),
    ratio_bound: f64,
) -> Result<RateBracket, RadialError> {
    let (times, values) = series.window(window.0, window.1, 2).map_err(RadialError::Series)?;
    let mut c_lower = f64::INFINITY;
    let mut c_upper = 0.0_f64;
    for (t, v) in times.iter().zip(&values) {
        let c = v * (1.0 + t).powf(exponent);
        c_lower = c_lower.min(c);
        c_upper = c_upper.max(c);
    }
    Ok(RateBracket { c_lower, c_upper, two_sided: c_upper / c_lower <= ratio_bound })
}
