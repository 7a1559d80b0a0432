//! Numerical laboratory for a compressible nematic liquid crystal
//! perturbation system.
//!
//! The crate is organized around four subsystems:
//!
//! - [`spectral`]: periodic-box fields with FFT-based differential operators,
//!   the Helmholtz split, a low/medium/high frequency decomposition, and
//!   binary field snapshots.
//! - [`symbol`]: exact per-frequency analysis of the linearized system — the
//!   3-component evolution symbol, its spectrum and stability certificate,
//!   the closed-form semigroup, a low-band Lyapunov functional, and band
//!   decay envelopes.
//! - [`radial`]: whole-space L² norm evolution of radially symmetric Fourier
//!   data under the exact semigroup, reduced to one-dimensional quadrature;
//!   this is where algebraic-in-time decay rates are measurable, since the
//!   frequency variable is genuinely continuous.
//! - [`solver`]: time integration of the full nonlinear perturbation system
//!   on the periodic box with exact linear propagation and second-order
//!   treatment of the nonlinear sources.
//!
//! [`series`] holds the time-series container shared by the measurement
//! paths.

pub mod radial;
pub mod series;
pub mod solver;
pub mod spectral;
pub mod symbol;
