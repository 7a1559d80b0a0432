//! Whole-space norm evolution for radially symmetric Fourier data under the
//! exact linearized semigroup.
//!
//! On the torus, algebraic decay saturates at the spectral gap; here the
//! frequency variable is continuous, so multi-decade time windows are cheap
//! and the `(1+t)^{-3/4-k/2}` rates are actually measurable.

mod norms;
mod profile;
mod quadrature;
mod rates;

pub use norms::{
    incompressible_norm_evolution, norm_evolution, norm_evolution_component, norm_series,
    StateComponent,
};
pub use profile::{ProfileTriple, RadialProfile};
pub use quadrature::{integrate_radial, DecayEnvelope, QuadratureSpec};
pub use rates::{two_sided_rate_check, RateBracket};

#[derive(Debug, thiserror::Error)]
pub enum RadialError {
    #[error("invalid profile: {0}")]
    BadProfile(String),
    #[error("invalid quadrature spec: {0}")]
    BadSpec(String),
    #[error(
        "quadrature resolution too low for the requested time: needs {required_panels} panels, \
         budget allows {allowed_panels}; retry with node_count >= {suggested_node_count}"
    )]
    ResolutionTooLow {
        required_panels: usize,
        allowed_panels: usize,
        suggested_node_count: usize,
    },
    #[error(transparent)]
    Symbol(#[from] crate::symbol::SymbolError),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}
