//! Low-band Lyapunov functional for the linearized flow.
//!
//! `L(t, ξ) = ½ (P'(1)|ϱ̂|² + |b̂|² + |ŵ|² - 2 δ₁ |ξ| Re(ϱ̂ b̂*))` is monotone
//! nonincreasing along the exact semigroup on `|ξ| ≤ r0` and decays inside
//! an `e^{-c|ξ|² t}` envelope; the cross term is what turns the neutral
//! density direction into a dissipated one.

use num_complex::Complex64;

use super::params::{admissible_r0, FluidParams};
use super::SymbolError;

/// Coupling weight, constrained to `0 < δ₁ ≤ min{1/2, (2μ+λ)/4, √P'(1)/2}`.
#[derive(Clone, Copy, Debug)]
pub struct LyapunovWeights {
    delta1: f64,
}

impl LyapunovWeights {
    pub fn max_delta1(params: &FluidParams) -> f64 {
        0.5_f64
            .min(params.long_viscosity() / 4.0)
            .min(params.p_prime().sqrt() / 2.0)
    }

    pub fn new(delta1: f64, params: &FluidParams) -> Result<Self, SymbolError> {
        let max = Self::max_delta1(params);
        if !(delta1 > 0.0 && delta1 <= max) {
            return Err(SymbolError::InvalidDelta1(delta1, max));
        }
        Ok(Self { delta1 })
    }

    /// The sharpest admissible functional: δ₁ at its maximum.
    pub fn default_for(params: &FluidParams) -> Self {
        Self { delta1: Self::max_delta1(params) }
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }
}

/// Evaluate the functional at one frequency; rejects `|ξ|` outside the low
/// band `[0, r0]` with `r0` the admissible maximum for these parameters.
pub fn lyapunov_low(
    params: &FluidParams,
    weights: &LyapunovWeights,
    xi_mag: f64,
    state: [Complex64; 3],
) -> Result<f64, SymbolError> {
    if !(xi_mag >= 0.0) {
        return Err(SymbolError::NegativeFrequency(xi_mag));
    }
    let r0 = admissible_r0(params);
    if xi_mag > r0 * (1.0 + 1e-12) {
        return Err(SymbolError::OutsideLowBand { xi: xi_mag, r0 });
    }
    let [rho, b, w] = state;
    let cross = (rho * b.conj()).re;
    Ok(0.5
        * (params.p_prime() * rho.norm_sqr() + b.norm_sqr() + w.norm_sqr()
            - 2.0 * weights.delta1 * xi_mag * cross))
}

/// The plain quadratic form `q = ½ (P'(1)|ϱ̂|² + |b̂|² + |ŵ|²)` the functional
/// is equivalent to: `(1 - δ₁ r0) q ≤ L ≤ (1 + δ₁ r0) q`.
pub fn quadratic_reference(params: &FluidParams, state: [Complex64; 3]) -> f64 {
    let [rho, b, w] = state;
    0.5 * (params.p_prime() * rho.norm_sqr() + b.norm_sqr() + w.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::semigroup::semigroup_apply;
    use rand::{Rng, SeedableRng};

    fn canonical() -> FluidParams {
        FluidParams::new(1.0, 0.0, 2.0).unwrap()
    }

    #[test]
    fn delta1_bounds() {
        let p = canonical();
        // min{1/2, 2/4, sqrt(2)/2} = 1/2
        assert!((LyapunovWeights::max_delta1(&p) - 0.5).abs() < 1e-15);
        assert!(LyapunovWeights::new(0.5, &p).is_ok());
        assert!(LyapunovWeights::new(0.51, &p).is_err());
        assert!(LyapunovWeights::new(0.0, &p).is_err());
    }

    #[test]
    fn zero_triple_and_pure_density() {
        let p = canonical();
        let w = LyapunovWeights::default_for(&p);
        let zero = [Complex64::default(); 3];
        assert_eq!(lyapunov_low(&p, &w, 0.1, zero).unwrap(), 0.0);

        let density = [Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default()];
        let v = lyapunov_low(&p, &w, 0.3, density).unwrap();
        assert!((v - p.p_prime() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn positive_on_mixed_state_at_band_edge() {
        let p = canonical();
        let w = LyapunovWeights::default_for(&p);
        let r0 = admissible_r0(&p);
        let s = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::default()];
        let v = lyapunov_low(&p, &w, r0, s).unwrap();
        assert!(v > 0.0, "value {v}");
    }

    #[test]
    fn rejects_frequencies_above_r0() {
        let p = canonical();
        let w = LyapunovWeights::default_for(&p);
        let s = [Complex64::new(1.0, 0.0); 3];
        assert!(matches!(
            lyapunov_low(&p, &w, admissible_r0(&p) * 1.5, s),
            Err(SymbolError::OutsideLowBand { .. })
        ));
    }

    #[test]
    fn equivalent_to_plain_quadratic_form() {
        let p = canonical();
        let w = LyapunovWeights::default_for(&p);
        let r0 = admissible_r0(&p);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        for _ in 0..500 {
            let xi = rng.gen::<f64>() * r0;
            let s = [
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            ];
            let l = lyapunov_low(&p, &w, xi, s).unwrap();
            let q = quadratic_reference(&p, s);
            let dr = w.delta1() * r0;
            assert!(l >= 0.5 * (1.0 - dr) * q - 1e-14);
            assert!(l <= (1.0 + dr) * q + 1e-14);
        }
    }

    #[test]
    fn nonincreasing_along_the_semigroup() {
        let p = canonical();
        let w = LyapunovWeights::default_for(&p);
        let r0 = admissible_r0(&p);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(45);
        for _ in 0..50 {
            let xi = rng.gen::<f64>() * r0;
            let s0 = [
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            ];
            let horizon = 3.0 / (xi * xi).max(1e-4);
            let mut prev = lyapunov_low(&p, &w, xi, s0).unwrap();
            for j in 1..=64 {
                let t = horizon * j as f64 / 64.0;
                let s = semigroup_apply(&p, xi, t, s0).unwrap();
                let l = lyapunov_low(&p, &w, xi, s).unwrap();
                assert!(l <= prev * (1.0 + 1e-9) + 1e-14, "xi = {xi}, t = {t}");
                prev = l;
            }
        }
    }
}
