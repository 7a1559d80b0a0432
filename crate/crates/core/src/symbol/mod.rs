//! Per-frequency analysis of the linearized perturbation system.
//!
//! In Fourier variables the linear dynamics of `(ϱ̂, b̂, ŵ)` — density
//! perturbation, compressible velocity potential, and director gradient —
//! decouple per wavenumber magnitude `|ξ|` into `d/dt Û = -G(|ξ|) Û` with a
//! block structure: a 2×2 hyperbolic–parabolic fluid block acting on
//! `(ϱ̂, b̂)` and a scalar heat entry acting on `ŵ`. Everything here is an
//! exact closed-form function of `(μ, λ, γ, |ξ|, t)`.

mod bands;
mod lyapunov;
mod matrix;
mod params;
mod semigroup;

pub use bands::{envelope_holds, medium_band_kappa};
pub use lyapunov::{lyapunov_low, quadratic_reference, LyapunovWeights};
pub use matrix::{assemble_symbol, char_coeffs, eigenvalues, lienard_chipart, Eigenvalues, SymbolMatrix};
pub use params::{admissible_r0, default_cutoffs, FluidParams};
pub use semigroup::{fluid_propagator, heat_factor, incompressible_factor, semigroup_apply};

#[derive(Debug, thiserror::Error)]
pub enum SymbolError {
    #[error("shear viscosity must be positive, got mu = {0}")]
    NonPositiveMu(f64),
    #[error("bulk condition 2mu + 3lambda >= 0 fails for mu = {mu}, lambda = {lambda}")]
    BulkViscosity { mu: f64, lambda: f64 },
    #[error("condition mu > lambda/2 fails for mu = {mu}, lambda = {lambda}")]
    ShearCondition { mu: f64, lambda: f64 },
    #[error("adiabatic exponent must satisfy gamma >= 1, got {0}")]
    InvalidGamma(f64),
    #[error("frequency magnitude must be nonnegative, got {0}")]
    NegativeFrequency(f64),
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("stability criterion is posed for nonzero frequencies only")]
    ZeroFrequency,
    #[error("frequency {xi} lies outside the low band [0, {r0}]")]
    OutsideLowBand { xi: f64, r0: f64 },
    #[error("coupling weight delta1 = {0} must lie in (0, {1}]")]
    InvalidDelta1(f64, f64),
    #[error("band must satisfy 0 < r < R, got r = {r}, R = {big_r}")]
    InvalidBand { r: f64, big_r: f64 },
    #[error("at least two band samples are required, got {0}")]
    TooFewSamples(usize),
}
