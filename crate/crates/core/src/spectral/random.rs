//! Seeded band-limited random fields for experiments and tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::field::{Field, PhysicalField, Rank};
use super::grid::Grid;

/// Real Gaussian field whose spectrum is restricted to `lo ≤ |ξ| ≤ hi`.
///
/// Samples white noise in physical space, transforms, and truncates; the
/// result is exactly Hermitian and deterministic for a given RNG state.
/// `lo > 0` removes the mean; `hi = ∞` keeps the full band.
pub fn random_real_field<R: Rng>(grid: &Grid, rank: Rank, lo: f64, hi: f64, rng: &mut R) -> Field {
    let mut phys = PhysicalField::zeros(grid, rank);
    for v in phys.raw_mut() {
        *v = rng.sample::<f64, _>(StandardNormal);
    }
    let mut field = Field::from_physical(&phys).expect("white noise is finite");
    band_restrict(&mut field, lo, hi);
    field
}

/// Zero every coefficient with |ξ| outside `[lo, hi]`.
pub fn band_restrict(field: &mut Field, lo: f64, hi: f64) {
    let grid = field.grid().clone();
    for c in 0..field.components() {
        for (idx, v) in field.component_mut(c).iter_mut().enumerate() {
            let r = grid.xi_sq(idx).sqrt();
            if r < lo || r > hi {
                *v = Complex64::default();
            }
        }
    }
}
