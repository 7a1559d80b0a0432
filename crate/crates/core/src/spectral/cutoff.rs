//! Low/medium/high frequency decomposition with radial cutoff multipliers.
//!
//! `χ0 = 1` below `r0/2` and `0` above `r0`; `χ1 = 0` below `R0` and `1`
//! above `R0 + 1`. The smooth variant bridges the transition bands with a C²
//! quintic ramp; the sharp variant uses indicators (`χ0 = 1 on |ξ| ≤ r0`,
//! `χ1 = 1 on |ξ| > R0`), which makes the band-comparison inequalities exact
//! and is what the property tests use.

use super::field::Field;
use super::SpectralError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutoffShape {
    /// C² quintic ramp on the transition bands.
    Smooth,
    /// Indicator cutoffs at exactly r0 and R0.
    Sharp,
}

/// Radii and transition profile of the two cutoff multipliers.
#[derive(Clone, Copy, Debug)]
pub struct CutoffPair {
    r0: f64,
    big_r0: f64,
    shape: CutoffShape,
}

/// Quintic smoothstep: 0 → 1 on [0, 1] with vanishing first and second
/// derivatives at both ends.
fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

impl CutoffPair {
    pub fn new(r0: f64, big_r0: f64, shape: CutoffShape) -> Result<Self, SpectralError> {
        if !(r0 > 0.0 && big_r0 > r0 && r0.is_finite() && big_r0.is_finite()) {
            return Err(SpectralError::InvalidCutoffs { r0, big_r0 });
        }
        Ok(Self { r0, big_r0, shape })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn big_r0(&self) -> f64 {
        self.big_r0
    }

    pub fn shape(&self) -> CutoffShape {
        self.shape
    }

    /// Low-pass symbol χ0(|ξ|).
    pub fn chi0(&self, r: f64) -> f64 {
        match self.shape {
            CutoffShape::Sharp => {
                if r <= self.r0 {
                    1.0
                } else {
                    0.0
                }
            }
            CutoffShape::Smooth => {
                if r < self.r0 / 2.0 {
                    1.0
                } else if r > self.r0 {
                    0.0
                } else {
                    1.0 - smoothstep((r - self.r0 / 2.0) / (self.r0 / 2.0))
                }
            }
        }
    }

    /// High-pass symbol χ1(|ξ|).
    pub fn chi1(&self, r: f64) -> f64 {
        match self.shape {
            CutoffShape::Sharp => {
                if r > self.big_r0 {
                    1.0
                } else {
                    0.0
                }
            }
            CutoffShape::Smooth => {
                if r < self.big_r0 {
                    0.0
                } else if r > self.big_r0 + 1.0 {
                    1.0
                } else {
                    smoothstep(r - self.big_r0)
                }
            }
        }
    }
}

/// The three bands of a field; `f = low + mid + high` holds to round-off by
/// construction (`mid` is the remainder).
pub struct FrequencyParts {
    pub low: Field,
    pub mid: Field,
    pub high: Field,
}

impl FrequencyParts {
    /// Combined low-plus-medium part.
    pub fn low_mid(&self) -> Field {
        &self.low + &self.mid
    }

    /// Combined medium-plus-high part.
    pub fn mid_high(&self) -> Field {
        &self.mid + &self.high
    }
}

/// Apply a radial spectral multiplier.
fn apply_radial(field: &Field, sym: impl Fn(f64) -> f64 + Sync) -> Field {
    let grid = field.grid().clone();
    let mut out = field.clone();
    for c in 0..out.components() {
        for (idx, v) in out.component_mut(c).iter_mut().enumerate() {
            *v *= sym(grid.xi_sq(idx).sqrt());
        }
    }
    out
}

/// Split a field into its low, medium, and high frequency parts.
pub fn frequency_split(field: &Field, cutoffs: &CutoffPair) -> FrequencyParts {
    let low = apply_radial(field, |r| cutoffs.chi0(r));
    let high = apply_radial(field, |r| cutoffs.chi1(r));
    let mid = &(field - &low) - &high;
    FrequencyParts { low, mid, high }
}
