//! Periodic-box spectral fields: transforms, differential operators,
//! Helmholtz split, frequency decomposition, and Sobolev seminorms.

mod cutoff;
mod field;
mod grid;
mod helmholtz;
mod random;
mod snapshot;

pub use cutoff::{frequency_split, CutoffPair, CutoffShape, FrequencyParts};
pub use field::{
    components_for_rank, Field, PhysicalField, Rank, MAX_DERIVATIVE_ORDER, MEAN_ZERO_TOL,
};
pub(crate) use field::extract_re as extract_re_into;
pub use grid::{make_grid, Grid, SpectralGrid};
pub use helmholtz::{compressible_part, incompressible_part, reconstruct};
pub use random::{band_restrict, random_real_field};
pub use snapshot::{read_snapshot, read_snapshot_on, write_snapshot};

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("points per axis must be an even integer >= 8, got {0}")]
    InvalidGridSize(usize),
    #[error("box length must be positive and finite, got {0}")]
    InvalidBoxLength(f64),
    #[error("field data has {got} entries, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rank {0} is not supported by this operation")]
    UnsupportedRank(u8),
    #[error("derivative order {0} exceeds the supported maximum {MAX_DERIVATIVE_ORDER}")]
    DerivativeOrder(u32),
    #[error("field contains non-finite values")]
    NonFinite,
    #[error("operation requires mean-zero input; zero-mode L2 fraction is {0:.3e}")]
    NonzeroMean(f64),
    #[error("cutoff radii must satisfy 0 < r0 < R0, got r0 = {r0}, R0 = {big_r0}")]
    InvalidCutoffs { r0: f64, big_r0: f64 },
    #[error("snapshot format: {0}")]
    SnapshotFormat(String),
    #[error("snapshot io: {0}")]
    Io(#[from] std::io::Error),
}
