//! Fluid parameters and the cutoff radii they admit.

use crate::spectral::{CutoffPair, CutoffShape};

use super::SymbolError;

/// Viscosities and pressure law of the fluid.
///
/// The pressure is `P(ρ) = ρ^γ`, so `P'(1) = γ` is derived, never stored.
/// Admissibility: `μ > 0`, `2μ + 3λ ≥ 0`, `μ > λ/2`, `γ ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidParams {
    mu: f64,
    lambda: f64,
    gamma: f64,
}

impl FluidParams {
    pub fn new(mu: f64, lambda: f64, gamma: f64) -> Result<Self, SymbolError> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(SymbolError::NonPositiveMu(mu));
        }
        if !lambda.is_finite() || 2.0 * mu + 3.0 * lambda < 0.0 {
            return Err(SymbolError::BulkViscosity { mu, lambda });
        }
        if mu <= lambda / 2.0 {
            return Err(SymbolError::ShearCondition { mu, lambda });
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(SymbolError::InvalidGamma(gamma));
        }
        Ok(Self { mu, lambda, gamma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `P'(1) = γ` for the pressure law `P = ρ^γ`.
    pub fn p_prime(&self) -> f64 {
        self.gamma
    }

    /// `P'(ρ) = γ ρ^{γ-1}` at an arbitrary density.
    pub fn pressure_derivative(&self, rho: f64) -> f64 {
        self.gamma * rho.powf(self.gamma - 1.0)
    }

    /// The combined longitudinal viscosity `2μ + λ` (strictly positive for
    /// admissible parameters).
    pub fn long_viscosity(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    /// Frequency at which the fluid block's eigenvalue pair degenerates:
    /// `|ξ|* = 2 √P'(1) / (2μ + λ)`.
    pub fn double_root_frequency(&self) -> f64 {
        2.0 * self.p_prime().sqrt() / self.long_viscosity()
    }
}

/// Largest admissible low-band radius,
/// `min{1/2, √(P'(1)/(2μ+λ)), √(2 P'(1))/2}`.
pub fn admissible_r0(params: &FluidParams) -> f64 {
    let p = params.p_prime();
    let a = (p / params.long_viscosity()).sqrt();
    let b = (2.0 * p).sqrt() / 2.0;
    0.5_f64.min(a).min(b)
}

/// Default cutoff pair: `r0` at its admissible maximum and `R0 = 8 r0`.
pub fn default_cutoffs(params: &FluidParams, shape: CutoffShape) -> CutoffPair {
    let r0 = admissible_r0(params);
    CutoffPair::new(r0, 8.0 * r0, shape).expect("0 < r0 < 8 r0 always holds")
}
