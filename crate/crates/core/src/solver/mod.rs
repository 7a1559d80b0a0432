//! Nonlinear time integration of the perturbation system on the periodic
//! box, with exact linear propagation per mode and second-order treatment of
//! the nonlinear sources.

mod coeffs;
mod energy;
mod sources;
mod state;
mod stepper;

pub use coeffs::{coefficient_f, coefficient_g, coefficient_h};
pub use energy::{energy_xh, EnergyDiagnostics, MAX_DELTA};
pub use sources::{director_force_identity_residual, nonlinear_terms, SourceTerms};
pub use state::{initial_data_large, momentum, renormalize_director, State};
pub use stepper::{duhamel_step, Scheme, Stepper, StepperConfig, TimeStep};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("density floor violated: min(1+ϱ) = {min} < {floor} at grid index {position:?}")]
    DensityFloor { min: f64, floor: f64, position: [usize; 3] },
    #[error("director magnitude collapsed to {min_mag}; projection is ill-posed")]
    DirectorBreakdown { min_mag: f64 },
    #[error("time step {dt} exceeds the advective limit {dt_max}")]
    CflViolation { dt: f64, dt_max: f64 },
    #[error("non-finite values appeared at t = {time}")]
    NonFinite { time: f64 },
    #[error("amplitude {amplitude} would push 1+ϱ below the floor {floor}")]
    AmplitudeTooLarge { amplitude: f64, floor: f64 },
    #[error("delta = {0} outside [0, 1/8]")]
    InvalidDelta(f64),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Symbol(#[from] crate::symbol::SymbolError),
}
