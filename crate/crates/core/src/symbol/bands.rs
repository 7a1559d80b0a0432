//! Medium-band decay envelope: on a compact frequency band `[r, R]` away
//! from zero, every symbol eigenvalue has real part bounded below by a
//! positive κ, so `|e^{-tG} v| ≤ C e^{-κt} |v|`. κ is estimated by dense
//! sampling; the constant is non-constructive in closed form.

use num_complex::Complex64;

use super::matrix::eigenvalues;
use super::params::FluidParams;
use super::semigroup::semigroup_apply;
use super::SymbolError;

/// `κ̂ = min over sampled |ξ| ∈ [r, R] of min(Re β₊, Re β₋, |ξ|²)`.
///
/// Positive for every admissible parameter set; the sample count trades
/// sharpness for cost (the minimizer sits at a band edge for the canonical
/// parameters, so even coarse sampling is close).
pub fn medium_band_kappa(
    params: &FluidParams,
    r: f64,
    big_r: f64,
    samples: usize,
) -> Result<f64, SymbolError> {
    if !(r > 0.0 && big_r > r) {
        return Err(SymbolError::InvalidBand { r, big_r });
    }
    if samples < 2 {
        return Err(SymbolError::TooFewSamples(samples));
    }
    let mut kappa = f64::INFINITY;
    for i in 0..samples {
        let xi = r + (big_r - r) * i as f64 / (samples - 1) as f64;
        let e = eigenvalues(params, xi)?;
        kappa = kappa.min(e.plus.re).min(e.minus.re).min(e.heat);
    }
    Ok(kappa)
}

/// Check the envelope `|e^{-tG(|ξ|)} v| ≤ bound · e^{-κt} |v|` at one draw.
pub fn envelope_holds(
    params: &FluidParams,
    xi_mag: f64,
    t: f64,
    v: [Complex64; 3],
    kappa: f64,
    bound: f64,
) -> Result<bool, SymbolError> {
    let out = semigroup_apply(params, xi_mag, t, v)?;
    let norm = |x: [Complex64; 3]| (x[0].norm_sqr() + x[1].norm_sqr() + x[2].norm_sqr()).sqrt();
    Ok(norm(out) <= bound * (-kappa * t).exp() * norm(v) + 1e-14)
}
