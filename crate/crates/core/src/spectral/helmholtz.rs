//! Helmholtz split of a mean-zero velocity field into its compressible
//! scalar potential `b = Λ⁻¹ div u` and incompressible part `Pu = Λ⁻¹ curl u`.
//!
//! Per mode, `b̂ = i ξ·û / |ξ|` and `P̂u = i ξ×û / |ξ|`, so the split is an
//! exact L² orthogonal decomposition: `|û|² = |b̂|² + |P̂u|²` pointwise in ξ.
//! Reconstruction is `u = -Λ⁻¹∇ b + Λ⁻¹ curl Pu`.
//!
//! Like every odd-order derivative here, the split annihilates the Nyquist
//! planes `k_i = -N/2` (the signed wavenumber is ambiguous there); inputs
//! are expected band-limited, as solver states always are.

use num_complex::Complex64;

use super::field::{Field, MEAN_ZERO_TOL};
use super::SpectralError;

fn require_vector_mean_zero(u: &Field) -> Result<(), SpectralError> {
    if u.rank() != 1 {
        return Err(SpectralError::UnsupportedRank(u.rank()));
    }
    let frac = u.zero_mode_fraction();
    if frac > MEAN_ZERO_TOL {
        return Err(SpectralError::NonzeroMean(frac));
    }
    Ok(())
}

fn on_nyquist(grid: &super::grid::Grid, idx: usize) -> bool {
    let n = grid.points_per_axis();
    let (i0, i1, i2) = grid.unflat(idx);
    i0 == n / 2 || i1 == n / 2 || i2 == n / 2
}

/// `b = Λ⁻¹ div u`; real-valued and mean-zero for mean-zero real `u`.
pub fn compressible_part(u: &Field) -> Result<Field, SpectralError> {
    require_vector_mean_zero(u)?;
    let grid = u.grid().clone();
    let mut b = Field::zeros(&grid, 0);
    let (ux, uy, uz) = (u.component(0), u.component(1), u.component(2));
    let out = b.component_mut(0);
    for idx in 0..grid.len() {
        let [k0, k1, k2] = grid.xi_vec(idx);
        let mag = (k0 * k0 + k1 * k1 + k2 * k2).sqrt();
        if mag == 0.0 || on_nyquist(&grid, idx) {
            continue;
        }
        let dot = k0 * ux[idx] + k1 * uy[idx] + k2 * uz[idx];
        out[idx] = Complex64::i() * dot / mag;
    }
    Ok(b)
}

/// `Pu = Λ⁻¹ curl u`, the divergence-free content of `u`.
pub fn incompressible_part(u: &Field) -> Result<Field, SpectralError> {
    require_vector_mean_zero(u)?;
    let grid = u.grid().clone();
    let mut pu = Field::zeros(&grid, 1);
    for m in 0..3 {
        let (j, k) = ((m + 1) % 3, (m + 2) % 3);
        let uj = u.component(j).to_vec();
        let uk = u.component(k).to_vec();
        let out = pu.component_mut(m);
        for idx in 0..grid.len() {
            let xi = grid.xi_vec(idx);
            let mag = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
            if mag == 0.0 || on_nyquist(&grid, idx) {
                continue;
            }
            // (ξ×û)_m = ξ_j û_k − ξ_k û_j
            out[idx] = Complex64::i() * (xi[j] * uk[idx] - xi[k] * uj[idx]) / mag;
        }
    }
    Ok(pu)
}

/// Rebuild `u = -Λ⁻¹∇ b + Λ⁻¹ curl Pu` from the two parts.
pub fn reconstruct(b: &Field, pu: &Field) -> Result<Field, SpectralError> {
    if b.rank() != 0 {
        return Err(SpectralError::UnsupportedRank(b.rank()));
    }
    if pu.rank() != 1 {
        return Err(SpectralError::UnsupportedRank(pu.rank()));
    }
    let grad_b = b.gradient()?.lambda_power(-1.0)?;
    let curl_pu = pu.curl()?.lambda_power(-1.0)?;
    Ok(&(&grad_b * -1.0) + &curl_pu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::PhysicalField;
    use crate::spectral::grid::make_grid;
    use crate::spectral::random::random_real_field;
    use rand::SeedableRng;
    use std::f64::consts::TAU;

    fn sample_vector(
        grid: &crate::spectral::grid::Grid,
        f: impl Fn(f64, f64, f64) -> [f64; 3],
    ) -> Field {
        let n = grid.points_per_axis();
        let dx = grid.dx();
        let mut phys = PhysicalField::zeros(grid, 1);
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let v = f(i0 as f64 * dx, i1 as f64 * dx, i2 as f64 * dx);
                    for c in 0..3 {
                        phys.component_mut(c)[grid.flat(i0, i1, i2)] = v[c];
                    }
                }
            }
        }
        Field::from_physical(&phys).unwrap()
    }

    #[test]
    fn divergence_free_input_has_zero_compressible_part() {
        let grid = make_grid(16, TAU).unwrap();
        // u = (−sin x₂, 0, 0) is divergence free
        let u = sample_vector(&grid, |_, y, _| [-y.sin(), 0.0, 0.0]);
        let b = compressible_part(&u).unwrap();
        assert!(b.l2_norm() < 1e-12 * u.l2_norm());
        let r = reconstruct(&b, &incompressible_part(&u).unwrap()).unwrap();
        assert!((&r - &u).l2_norm() < 1e-10 * u.l2_norm());
    }

    #[test]
    fn gradient_input_has_zero_incompressible_part_and_known_b() {
        let grid = make_grid(16, TAU).unwrap();
        // u = ∇cos(x₁) = (−sin x₁, 0, 0); b = Λ⁻¹Δcos = −Λcos = −cos(x₁)
        let u = sample_vector(&grid, |x, _, _| [-x.sin(), 0.0, 0.0]);
        let pu = incompressible_part(&u).unwrap();
        assert!(pu.l2_norm() < 1e-12 * u.l2_norm());
        let b = compressible_part(&u).unwrap();
        let expect = {
            let mut phys = PhysicalField::zeros(&grid, 0);
            let n = grid.points_per_axis();
            for i0 in 0..n {
                for i1 in 0..n {
                    for i2 in 0..n {
                        phys.component_mut(0)[grid.flat(i0, i1, i2)] =
                            -(i0 as f64 * grid.dx()).cos();
                    }
                }
            }
            Field::from_physical(&phys).unwrap()
        };
        assert!((&b - &expect).l2_norm() < 1e-12 * expect.l2_norm());
    }

    #[test]
    fn random_field_reconstructs_and_splits_orthogonally() {
        let grid = make_grid(16, 2.5).unwrap();
        // keep clear of the Nyquist planes, which the split annihilates
        let hi = (grid.points_per_axis() / 2 - 1) as f64 * 2.0 * std::f64::consts::PI
            / grid.box_length();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let mut u = random_real_field(&grid, 1, 0.0, hi, &mut rng);
            u.remove_mean();
            let b = compressible_part(&u).unwrap();
            let pu = incompressible_part(&u).unwrap();
            // Λ⁻¹ div is an order-0 contraction
            assert!(b.l2_norm() <= u.l2_norm() * (1.0 + 1e-12));
            // exact orthogonality of the split
            let lhs = u.l2_norm().powi(2);
            let rhs = b.l2_norm().powi(2) + pu.l2_norm().powi(2);
            assert!((lhs - rhs).abs() < 1e-10 * lhs);
            // reconstruction identity
            let r = reconstruct(&b, &pu).unwrap();
            assert!((&r - &u).l2_norm() < 1e-10 * u.l2_norm());
        }
    }

    #[test]
    fn nonzero_mean_is_rejected() {
        let grid = make_grid(8, TAU).unwrap();
        let u = sample_vector(&grid, |_, _, _| [1.0, 0.0, 0.0]);
        assert!(matches!(compressible_part(&u), Err(SpectralError::NonzeroMean(_))));
        assert!(matches!(incompressible_part(&u), Err(SpectralError::NonzeroMean(_))));
    }
}
