//! Density-dependent coefficient functions of the momentum equation:
//! `h(ϱ) = ϱ/(1+ϱ)`, `f(ϱ) = P'(1+ϱ)/(1+ϱ) - P'(1) = γ(1+ϱ)^{γ-2} - γ`,
//! `g(ϱ) = 1/(1+ϱ)`, evaluated pointwise in physical space.

use crate::spectral::{Field, PhysicalField};
use crate::symbol::FluidParams;

use super::SolverError;

pub(crate) fn check_floor(
    rho_phys: &PhysicalField,
    floor: f64,
) -> Result<(), SolverError> {
    let mut min = f64::INFINITY;
    let mut at = 0usize;
    for (i, v) in rho_phys.component(0).iter().enumerate() {
        if 1.0 + v < min {
            min = 1.0 + v;
            at = i;
        }
    }
    if min < floor {
        let (i0, i1, i2) = rho_phys.grid().unflat(at);
        return Err(SolverError::DensityFloor { min, floor, position: [i0, i1, i2] });
    }
    Ok(())
}

pub(crate) fn h_samples(rho: &[f64], out: &mut [f64]) {
    for (o, r) in out.iter_mut().zip(rho) {
        *o = r / (r + 1.0);
    }
}

pub(crate) fn f_samples(rho: &[f64], gamma: f64, out: &mut [f64]) {
    // γ = 2 makes P'(1+ϱ)/(1+ϱ) constant, so f vanishes identically
    if gamma == 2.0 {
        out.fill(0.0);
        return;
    }
    for (o, r) in out.iter_mut().zip(rho) {
        *o = gamma * (1.0 + r).powf(gamma - 2.0) - gamma;
    }
}

pub(crate) fn g_samples(rho: &[f64], out: &mut [f64]) {
    for (o, r) in out.iter_mut().zip(rho) {
        *o = 1.0 / (r + 1.0);
    }
}

fn pointwise(
    varrho: &Field,
    floor: f64,
    eval: impl Fn(&[f64], &mut [f64]),
) -> Result<Field, SolverError> {
    let phys = varrho.to_physical()?;
    check_floor(&phys, floor)?;
    let mut out = PhysicalField::zeros(varrho.grid(), 0);
    eval(phys.component(0), out.component_mut(0));
    Ok(Field::from_physical(&out)?)
}

/// `h(ϱ) = ϱ/(ϱ+1)`.
pub fn coefficient_h(varrho: &Field, floor: f64) -> Result<Field, SolverError> {
    pointwise(varrho, floor, h_samples)
}

/// `f(ϱ) = γ(1+ϱ)^{γ-2} - γ` (identically zero when γ = 2).
pub fn coefficient_f(
    varrho: &Field,
    params: &FluidParams,
    floor: f64,
) -> Result<Field, SolverError> {
    let gamma = params.gamma();
    pointwise(varrho, floor, move |r, o| f_samples(r, gamma, o))
}

/// `g(ϱ) = 1/(ϱ+1)`.
pub fn coefficient_g(varrho: &Field, floor: f64) -> Result<Field, SolverError> {
    pointwise(varrho, floor, g_samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    fn constant_field(grid: &crate::spectral::Grid, value: f64) -> Field {
        let mut p = PhysicalField::zeros(grid, 0);
        p.raw_mut().iter_mut().for_each(|v| *v = value);
        Field::from_physical(&p).unwrap()
    }

    #[test]
    fn equilibrium_values() {
        let grid = make_grid(8, 1.0).unwrap();
        let z = constant_field(&grid, 0.0);
        let params = FluidParams::new(1.0, 0.0, 2.0).unwrap();
        assert!(coefficient_h(&z, 0.1).unwrap().l2_norm() < 1e-14);
        assert!(coefficient_f(&z, &params, 0.1).unwrap().l2_norm() < 1e-14);
        let g = coefficient_g(&z, 0.1).unwrap();
        assert!((g.mean()[0].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_arithmetic_oracle() {
        let grid = make_grid(8, 1.0).unwrap();
        let params = FluidParams::new(1.0, 0.0, 2.0).unwrap();
        // γ = 2 makes f vanish identically: P'(1+ϱ)/(1+ϱ) = γ(1+ϱ)^{γ-2} = γ
        let one = constant_field(&grid, 1.0);
        assert!(coefficient_f(&one, &params, 0.1).unwrap().l2_norm() < 1e-13);

        // γ = 1.4, ϱ = 0.3: f = 1.4·(1.3)^{-0.6} − 1.4
        let p14 = FluidParams::new(1.0, 0.0, 1.4).unwrap();
        let r = constant_field(&grid, 0.3);
        let f = coefficient_f(&r, &p14, 0.1).unwrap();
        let expect = 1.4 * 1.3f64.powf(-0.6) - 1.4;
        assert!((f.mean()[0].re - expect).abs() < 1e-13);

        // g(−1/2) = 2
        let half = constant_field(&grid, -0.5);
        let g = coefficient_g(&half, 0.1).unwrap();
        assert!((g.mean()[0].re - 2.0).abs() < 1e-13);
        // h(1) = 1/2
        let h = coefficient_h(&one, 0.1).unwrap();
        assert!((h.mean()[0].re - 0.5).abs() < 1e-13);
    }

    #[test]
    fn floor_violation_reports_location() {
        let grid = make_grid(8, 1.0).unwrap();
        let mut p = PhysicalField::zeros(&grid, 0);
        p.component_mut(0)[grid.flat(2, 3, 4)] = -0.95;
        let f = Field::from_physical(&p).unwrap();
        match coefficient_g(&f, 0.1) {
            Err(SolverError::DensityFloor { min, position, .. }) => {
                assert!(min < 0.1);
                assert_eq!(position, [2, 3, 4]);
            }
            other => panic!("expected density floor error, got {other:?}"),
        }
    }
}
