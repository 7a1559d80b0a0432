//! Exact semigroup of the linearized system, per frequency.
//!
//! The fluid block `F = [[0, |ξ|], [-P'(1)|ξ|, (2μ+λ)|ξ|²]]` has
//! `e^{-tF} = e^{-θt} [cosh(ωt) I + (sinh(ωt)/ω)(θI - F)]` with
//! `θ = (2μ+λ)|ξ|²/2` and `ω = √(θ² - P'(1)|ξ|²)` taken as a complex
//! principal root, so the oscillatory low-frequency regime and the
//! overdamped high-frequency regime are the same formula. The director
//! entry is the scalar heat factor `e^{-|ξ|²t}`.

use num_complex::Complex64;

use super::params::FluidParams;
use super::SymbolError;

/// Below this value of `|ωt|²` the `sinh(ωt)/ω` ratio switches to its series,
/// removing the 0/0 at the discriminant root with full accuracy.
const DEGENERATE_SERIES_CUTOFF: f64 = 1e-12;

/// Hyperbolic pair `(cosh(ωt), sinh(ωt)/ω)` for `ω² = disc` (real, any sign).
fn cosh_sinhc(disc: f64, t: f64) -> (Complex64, Complex64) {
    let z2 = disc * t * t;
    if z2.abs() < DEGENERATE_SERIES_CUTOFF {
        // cosh z = 1 + z²/2 + z⁴/24, sinh(z)/ω = t (1 + z²/6 + z⁴/120)
        let cosh = 1.0 + z2 / 2.0 + z2 * z2 / 24.0;
        let sinhc = t * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
        (Complex64::new(cosh, 0.0), Complex64::new(sinhc, 0.0))
    } else {
        let omega = Complex64::new(disc, 0.0).sqrt();
        let z = omega * t;
        (z.cosh(), z.sinh() / omega)
    }
}

/// The 2×2 matrix `e^{-tF}` acting on `(ϱ̂, b̂)` at one frequency.
pub fn fluid_propagator(
    params: &FluidParams,
    xi_mag: f64,
    t: f64,
) -> Result<[[Complex64; 2]; 2], SymbolError> {
    if !(xi_mag >= 0.0) {
        return Err(SymbolError::NegativeFrequency(xi_mag));
    }
    if !(t >= 0.0) {
        return Err(SymbolError::NegativeTime(t));
    }
    let sq = xi_mag * xi_mag;
    let theta = 0.5 * params.long_viscosity() * sq;
    let p = params.p_prime();
    let disc = theta * theta - p * sq;
    let (cosh, sinhc) = cosh_sinhc(disc, t);
    let damp = (-theta * t).exp();
    // θI - F = [[θ, -|ξ|], [P'(1)|ξ|, -θ]]
    Ok([
        [damp * (cosh + sinhc * theta), damp * (-sinhc * xi_mag)],
        [damp * (sinhc * p * xi_mag), damp * (cosh - sinhc * theta)],
    ])
}

/// Scalar heat factor `e^{-|ξ|² t}` for the director entry.
pub fn heat_factor(xi_mag: f64, t: f64) -> f64 {
    (-xi_mag * xi_mag * t).exp()
}

/// Exact factor `e^{-μ|ξ|² t}` for the incompressible velocity modes.
pub fn incompressible_factor(params: &FluidParams, xi_mag: f64, t: f64) -> f64 {
    (-params.mu() * xi_mag * xi_mag * t).exp()
}

/// Apply `e^{-t G(|ξ|)}` to the triple `(ϱ̂, b̂, ŵ)`.
pub fn semigroup_apply(
    params: &FluidParams,
    xi_mag: f64,
    t: f64,
    state: [Complex64; 3],
) -> Result<[Complex64; 3], SymbolError> {
    let m = fluid_propagator(params, xi_mag, t)?;
    let [rho, b, w] = state;
    Ok([
        m[0][0] * rho + m[0][1] * b,
        m[1][0] * rho + m[1][1] * b,
        w * heat_factor(xi_mag, t),
    ])
}
