//! Second-order energy functionals used as runtime diagnostics.
//!
//! `X_h = ½(‖∇²ϱ‖² + ‖∇²u‖² + ‖∇³n‖² + 2δ ∫∇u·∇²ϱ dx)` carries a cross term
//! that buys density dissipation, and the variant with its low-medium part
//! removed, `X_h - δ∫∇u·∇²ϱ^L dx`, is equivalent to the plain Hessian
//! energy `q = ½‖∇²(ϱ, u, ∇n)‖²` with constants `1 ∓ 2δ`.

use crate::spectral::{frequency_split, CutoffPair, Field};

use super::state::State;
use super::SolverError;

/// δ may not exceed 1/8 (the equivalence constants degenerate past that).
pub const MAX_DELTA: f64 = 0.125;

#[derive(Clone, Copy, Debug)]
pub struct EnergyDiagnostics {
    /// Full functional with the cross term.
    pub xh: f64,
    /// Functional with the low-medium part of the cross term removed.
    pub xh_cancelled: f64,
    /// The plain Hessian energy `q`; `xh_cancelled / q ∈ [1-2δ, 1+2δ]`.
    pub hessian_energy: f64,
}

/// Evaluate both functionals and the reference energy.
pub fn energy_xh(
    state: &State,
    delta: f64,
    cutoffs: &CutoffPair,
) -> Result<EnergyDiagnostics, SolverError> {
    if !(0.0..=MAX_DELTA).contains(&delta) {
        return Err(SolverError::InvalidDelta(delta));
    }
    let sq = |x: f64| x * x;
    let a = sq(state.varrho.sobolev_seminorm(2)?);
    let b = sq(state.velocity.sobolev_seminorm(2)?);
    let c = sq(state.director_pert.sobolev_seminorm(3)?);

    let grad_u = state.velocity.gradient()?;
    let hess_rho = state.varrho.gradient()?.gradient()?;
    let cross = grad_u.inner_product(&hess_rho);

    let rho_low_mid = low_mid_part(&state.varrho, cutoffs);
    let hess_rho_low = rho_low_mid.gradient()?.gradient()?;
    let cross_low = grad_u.inner_product(&hess_rho_low);

    let q = 0.5 * (a + b + c);
    Ok(EnergyDiagnostics {
        xh: q + delta * cross,
        xh_cancelled: q + delta * (cross - cross_low),
        hessian_energy: q,
    })
}

fn low_mid_part(field: &Field, cutoffs: &CutoffPair) -> Field {
    frequency_split(field, cutoffs).low_mid()
}
