//! The per-frequency evolution symbol, its characteristic polynomial,
//! spectrum, and the Lienard–Chipart stability certificate.

use num_complex::Complex64;

use super::params::FluidParams;
use super::SymbolError;

/// The 3-component symbol at one frequency magnitude.
///
/// Block structure: `d/dt (ϱ̂, b̂) = -F (ϱ̂, b̂)` with
/// `F = [[0, |ξ|], [-P'(1)|ξ|, (2μ+λ)|ξ|²]]`, decoupled from the director
/// entry `d/dt ŵ = -|ξ|² ŵ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolMatrix {
    pub xi_mag: f64,
    pub fluid_block: [[f64; 2]; 2],
    pub heat_entry: f64,
}

impl SymbolMatrix {
    pub fn trace_fluid(&self) -> f64 {
        self.fluid_block[0][0] + self.fluid_block[1][1]
    }

    pub fn det_fluid(&self) -> f64 {
        self.fluid_block[0][0] * self.fluid_block[1][1]
            - self.fluid_block[0][1] * self.fluid_block[1][0]
    }

    /// Determinant of `G - βI` (the full 3×3 characteristic function).
    pub fn char_det(&self, beta: Complex64) -> Complex64 {
        let f = &self.fluid_block;
        let fluid = (f[0][0] - beta) * (f[1][1] - beta) - f[0][1] * f[1][0];
        (self.heat_entry - beta) * fluid
    }
}

/// Assemble the symbol at `|ξ| = xi_mag`; identically zero at `xi_mag = 0`.
pub fn assemble_symbol(params: &FluidParams, xi_mag: f64) -> Result<SymbolMatrix, SymbolError> {
    if !(xi_mag >= 0.0) {
        return Err(SymbolError::NegativeFrequency(xi_mag));
    }
    let sq = xi_mag * xi_mag;
    Ok(SymbolMatrix {
        xi_mag,
        fluid_block: [
            [0.0, xi_mag],
            [-params.p_prime() * xi_mag, params.long_viscosity() * sq],
        ],
        heat_entry: sq,
    })
}

/// Coefficients of `|G - βI| = -β³ + a1 β² - a2 β + a3`:
/// `a1 = (2μ+λ)|ξ|² + |ξ|²`, `a2 = P'(1)|ξ|² + (2μ+λ)|ξ|⁴`, `a3 = P'(1)|ξ|⁴`.
pub fn char_coeffs(params: &FluidParams, xi_mag: f64) -> Result<(f64, f64, f64), SymbolError> {
    if !(xi_mag >= 0.0) {
        return Err(SymbolError::NegativeFrequency(xi_mag));
    }
    let sq = xi_mag * xi_mag;
    let nu = params.long_viscosity();
    let p = params.p_prime();
    Ok((nu * sq + sq, p * sq + nu * sq * sq, p * sq * sq))
}

/// Lienard–Chipart test for the cubic above: every root has positive real
/// part iff `a1 > 0` and `a1 a2 - a3 > 0`. Expanding,
/// `a1 a2 - a3 = (2μ+λ)P'(1)|ξ|⁴ + (2μ+λ)²|ξ|⁶ + (2μ+λ)|ξ|⁶`, so the test
/// holds for every admissible parameter set and nonzero frequency.
pub fn lienard_chipart(params: &FluidParams, xi_mag: f64) -> Result<bool, SymbolError> {
    if !(xi_mag >= 0.0) {
        return Err(SymbolError::NegativeFrequency(xi_mag));
    }
    if xi_mag == 0.0 {
        return Err(SymbolError::ZeroFrequency);
    }
    let (a1, a2, a3) = char_coeffs(params, xi_mag)?;
    Ok(a1 > 0.0 && a1 * a2 - a3 > 0.0)
}

/// Spectrum of the symbol.
#[derive(Clone, Copy, Debug)]
pub struct Eigenvalues {
    pub plus: Complex64,
    pub minus: Complex64,
    /// The director entry, always `|ξ|²`.
    pub heat: f64,
}

/// Closed-form spectrum: the fluid pair
/// `β± = ((2μ+λ)|ξ|² ± √((2μ+λ)²|ξ|⁴ - 4 P'(1)|ξ|²)) / 2`
/// (principal square root) plus the heat entry `|ξ|²`.
pub fn eigenvalues(params: &FluidParams, xi_mag: f64) -> Result<Eigenvalues, SymbolError> {
    if !(xi_mag >= 0.0) {
        return Err(SymbolError::NegativeFrequency(xi_mag));
    }
    let sq = xi_mag * xi_mag;
    let theta = 0.5 * params.long_viscosity() * sq;
    let disc = theta * theta - params.p_prime() * sq;
    let omega = Complex64::new(disc, 0.0).sqrt();
    let theta = Complex64::new(theta, 0.0);
    Ok(Eigenvalues { plus: theta + omega, minus: theta - omega, heat: sq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn canonical() -> FluidParams {
        FluidParams::new(1.0, 0.0, 2.0).unwrap()
    }

    #[test]
    fn symbol_entries_at_unit_frequency() {
        let m = assemble_symbol(&canonical(), 1.0).unwrap();
        assert_eq!(m.fluid_block, [[0.0, 1.0], [-2.0, 2.0]]);
        assert_eq!(m.heat_entry, 1.0);
        assert_relative_eq!(m.trace_fluid(), 2.0);
        assert_relative_eq!(m.det_fluid(), 2.0);
    }

    #[test]
    fn symbol_vanishes_at_zero_frequency() {
        let m = assemble_symbol(&canonical(), 0.0).unwrap();
        assert_eq!(m.fluid_block, [[0.0, 0.0], [0.0, 0.0]]);
        assert_eq!(m.heat_entry, 0.0);
    }

    #[test]
    fn symbol_entries_at_frequency_two() {
        let m = assemble_symbol(&canonical(), 2.0).unwrap();
        assert_eq!(m.fluid_block, [[0.0, 2.0], [-4.0, 8.0]]);
        assert_eq!(m.heat_entry, 4.0);
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(assemble_symbol(&canonical(), -1.0).is_err());
        assert!(char_coeffs(&canonical(), -1.0).is_err());
        assert!(eigenvalues(&canonical(), -0.5).is_err());
    }

    #[test]
    fn characteristic_coefficients() {
        let (a1, a2, a3) = char_coeffs(&canonical(), 1.0).unwrap();
        assert_relative_eq!(a1, 3.0);
        assert_relative_eq!(a2, 4.0);
        assert_relative_eq!(a3, 2.0);
        assert_relative_eq!(a1 * a2 - a3, 10.0);
        let zero = char_coeffs(&canonical(), 0.0).unwrap();
        assert_eq!(zero, (0.0, 0.0, 0.0));
    }

    #[test]
    fn char_coeffs_match_determinant_expansion() {
        let params = FluidParams::new(0.7, 0.2, 1.4).unwrap();
        for &xi in &[0.1, 0.9, 2.3, 7.0] {
            let m = assemble_symbol(&params, xi).unwrap();
            let (a1, a2, a3) = char_coeffs(&params, xi).unwrap();
            for &beta in &[0.0, 0.3, 1.7, -2.0] {
                let b = Complex64::new(beta, 0.0);
                let poly = -b * b * b + a1 * b * b - a2 * b + a3;
                let det = m.char_det(b);
                assert!(
                    (poly - det).norm() <= 1e-10 * (1.0 + poly.norm()),
                    "xi = {xi}, beta = {beta}"
                );
            }
        }
    }

    #[test]
    fn stability_certificate() {
        assert!(lienard_chipart(&canonical(), 1.0).unwrap());
        assert!(lienard_chipart(&canonical(), 1e-3).unwrap());
        assert!(matches!(
            lienard_chipart(&canonical(), 0.0),
            Err(SymbolError::ZeroFrequency)
        ));
    }

    #[test]
    fn spectrum_known_points() {
        let e = eigenvalues(&canonical(), 1.0).unwrap();
        assert!((e.plus - Complex64::new(1.0, 1.0)).norm() < 1e-14);
        assert!((e.minus - Complex64::new(1.0, -1.0)).norm() < 1e-14);
        assert_eq!(e.heat, 1.0);

        let z = eigenvalues(&canonical(), 0.0).unwrap();
        assert_eq!((z.plus, z.minus, z.heat), (Complex64::default(), Complex64::default(), 0.0));

        // discriminant root: |ξ|* = 2√P'(1)/(2μ+λ) = √2, double eigenvalue 2.
        // the discriminant is quadratic around its root, so a one-ulp error
        // in |ξ|* spreads the pair by ~√ε
        let xi_star = canonical().double_root_frequency();
        let d = eigenvalues(&canonical(), xi_star).unwrap();
        assert!((d.plus - d.minus).norm() < 1e-6);
        assert!((d.plus - Complex64::new(2.0, 0.0)).norm() < 1e-6);
    }

    proptest::proptest! {
        /// Closed-form eigenvalues satisfy the characteristic polynomial and
        /// have positive real part, in agreement with the stability test.
        #[test]
        fn spectrum_consistency(
            mu in 0.05f64..10.0,
            lam_frac in -0.66f64..1.99,
            gamma in 1.0f64..5.0,
            xi in 1e-3f64..10.0,
        ) {
            // λ = frac·μ with frac ∈ (-2/3, 2) keeps 2μ+3λ ≥ 0 and μ > λ/2
            let lambda = lam_frac * mu;
            let params = FluidParams::new(mu, lambda, gamma).unwrap();
            let m = assemble_symbol(&params, xi).unwrap();
            let e = eigenvalues(&params, xi).unwrap();
            let scale = (1.0 + xi * xi * params.long_viscosity()).powi(3);
            for beta in [e.plus, e.minus, Complex64::new(e.heat, 0.0)] {
                let res = m.char_det(beta).norm();
                proptest::prop_assert!(res <= 1e-9 * scale, "residual {res} at xi = {xi}");
            }
            proptest::prop_assert!(e.plus.re > 0.0 && e.minus.re > 0.0 && e.heat > 0.0);
            proptest::prop_assert!(lienard_chipart(&params, xi).unwrap());
        }
    }
}
