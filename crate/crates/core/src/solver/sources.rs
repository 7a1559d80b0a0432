//! The nonlinear sources of the perturbation system:
//! `S1 = -div(ϱu)` (conservative form of `-ϱ div u - u·∇ϱ`),
//! `S2 = -u·∇u - h(ϱ)(μΔu + (μ+λ)∇div u) - f(ϱ)∇ϱ - g(ϱ)∇d·Δd`,
//! `S3 = -u·∇n + |∇n|²(n + d̄)`,
//! with every product formed pointwise in physical space and truncated by
//! the 2/3 rule.

use rayon::prelude::*;

use crate::spectral::{Field, PhysicalField};
use crate::symbol::FluidParams;

use super::coeffs::{check_floor, f_samples, g_samples, h_samples};
use super::state::State;
use super::SolverError;

/// Right-hand sides, as spectral fields matching the state slots.
#[derive(Clone, Debug)]
pub struct SourceTerms {
    pub s1: Field,
    pub s2: Field,
    pub s3: Field,
}

impl SourceTerms {
    pub fn zeros(grid: &crate::spectral::Grid) -> Self {
        Self { s1: Field::zeros(grid, 0), s2: Field::zeros(grid, 1), s3: Field::zeros(grid, 1) }
    }
}

/// Physical samples a step needs anyway (also feeds the CFL bound).
pub(crate) struct PhysSnapshot {
    pub rho: PhysicalField,
    pub u: PhysicalField,
    pub n: PhysicalField,
    pub max_speed: f64,
}

impl PhysSnapshot {
    pub fn compute(state: &State) -> Result<Self, SolverError> {
        let rho = state.varrho.to_physical()?;
        let u = state.velocity.to_physical()?;
        let n = state.director_pert.to_physical()?;
        let mut max_speed = 0.0_f64;
        for i in 0..state.grid().len() {
            let sq = u.component(0)[i].powi(2)
                + u.component(1)[i].powi(2)
                + u.component(2)[i].powi(2);
            max_speed = max_speed.max(sq);
        }
        Ok(Self { rho, u, n, max_speed: max_speed.sqrt() })
    }
}

/// Assemble all three sources. The density floor is enforced before the
/// coefficient functions are evaluated.
pub fn nonlinear_terms(
    state: &State,
    params: &FluidParams,
    density_floor: f64,
) -> Result<SourceTerms, SolverError> {
    let phys = PhysSnapshot::compute(state)?;
    nonlinear_terms_from(state, &phys, params, density_floor, true, true)
}

/// `director_coupling = false` deletes the director force from the momentum
/// source and zeroes the director source entirely, turning the system into
/// plain compressible Navier–Stokes for reference runs.
pub(crate) fn nonlinear_terms_from(
    state: &State,
    phys: &PhysSnapshot,
    params: &FluidParams,
    density_floor: f64,
    dealias: bool,
    director_coupling: bool,
) -> Result<SourceTerms, SolverError> {
    check_floor(&phys.rho, density_floor)?;
    let __t0 = std::time::Instant::now();
    let grid = state.grid();
    let len = grid.len();
    let unit = |axis: usize| -> [u32; 3] {
        let mut a = [0u32; 3];
        a[axis] = 1;
        a
    };

    // physical samples of the needed derivatives, via the fused
    // multiplier-plus-inverse-transform path
    let mut grad_u: Vec<Vec<f64>> = Vec::with_capacity(9); // [3a+j] = ∂_a u_j
    let mut grad_n: Vec<Vec<f64>> = Vec::with_capacity(9);
    for a in 0..3 {
        for j in 0..3 {
            grad_u.push(state.velocity.derivative_samples(j, unit(a))?);
            grad_n.push(state.director_pert.derivative_samples(j, unit(a))?);
        }
    }
    let lap_n: Vec<Vec<f64>> =
        (0..3).map(|m| state.director_pert.laplacian_samples(m)).collect();
    let grad_rho: Vec<Vec<f64>> =
        (0..3).map(|j| state.varrho.derivative_samples(0, unit(j))).collect::<Result<_, _>>()?;
    let __t1 = std::time::Instant::now();
    // μΔu + (μ+λ)∇div u assembled as one spectral multiplier per component
    let visc: Vec<Vec<f64>> = viscous_term_samples(state, params)?.into();
    let __t2 = std::time::Instant::now();

    let rho = phys.rho.component(0);
    let mut h = vec![0.0; len];
    let mut f = vec![0.0; len];
    let mut g = vec![0.0; len];
    h_samples(rho, &mut h);
    f_samples(rho, params.gamma(), &mut f);
    g_samples(rho, &mut g);

    const CHUNK: usize = 16384;
    // S1 = -div(ϱu): conservative, so its mean vanishes exactly.
    // The sign is folded into the product.
    let mut rho_u = PhysicalField::zeros(grid, 1);
    for c in 0..3 {
        let uc = phys.u.component(c);
        let out = rho_u.component_mut(c);
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk_idx, chunk)| {
            let base = chunk_idx * CHUNK;
            for (off, o) in chunk.iter_mut().enumerate() {
                *o = -rho[base + off] * uc[base + off];
            }
        });
    }
    let s1 = Field::from_physical_unchecked(&rho_u).divergence()?;
    let __t3 = std::time::Instant::now();

    let mut s2_phys = PhysicalField::zeros(grid, 1);
    let mut s3_phys = PhysicalField::zeros(grid, 1);
    for j in 0..3 {
        let s2j = s2_phys.component_mut(j);
        let (u0, u1, u2) = (phys.u.component(0), phys.u.component(1), phys.u.component(2));
        let (du0, du1, du2) = (&grad_u[j], &grad_u[3 + j], &grad_u[6 + j]);
        let (gn0, gn1, gn2) = (&grad_n[3 * j], &grad_n[3 * j + 1], &grad_n[3 * j + 2]);
        let grj = &grad_rho[j];
        let vj = &visc[j];
        let (l0, l1, l2) = (&lap_n[0], &lap_n[1], &lap_n[2]);
        s2j.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk_idx, out)| {
            let base = chunk_idx * CHUNK;
            for (off, o) in out.iter_mut().enumerate() {
                let i = base + off;
                // u·∇u_j = Σ_a u_a ∂_a u_j
                let adv = u0[i] * du0[i] + u1[i] * du1[i] + u2[i] * du2[i];
                // (∇d·Δd)_j = Σ_m ∂_j n_m Δn_m (the background is constant)
                let force = if director_coupling {
                    gn0[i] * l0[i] + gn1[i] * l1[i] + gn2[i] * l2[i]
                } else {
                    0.0
                };
                *o = -adv - h[i] * vj[i] - f[i] * grj[i] - g[i] * force;
            }
        });
    }
    if director_coupling {
        let mut grad_n_sq = vec![0.0f64; len];
        for comp in &grad_n {
            for (acc, v) in grad_n_sq.iter_mut().zip(comp) {
                *acc += v * v;
            }
        }
        for j in 0..3 {
            let s3j = s3_phys.component_mut(j);
            let (u0, u1, u2) = (phys.u.component(0), phys.u.component(1), phys.u.component(2));
            let (dn0, dn1, dn2) = (&grad_n[j], &grad_n[3 + j], &grad_n[6 + j]);
            let nj = phys.n.component(j);
            let bg = state.background[j];
            let gsq = &grad_n_sq;
            s3j.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk_idx, out)| {
                let base = chunk_idx * CHUNK;
                for (off, o) in out.iter_mut().enumerate() {
                    let i = base + off;
                    let adv = u0[i] * dn0[i] + u1[i] * dn1[i] + u2[i] * dn2[i];
                    *o = -adv + gsq[i] * (nj[i] + bg);
                }
            });
        }
    }
    let __t4 = std::time::Instant::now();
    let s2 = Field::from_physical_unchecked(&s2_phys);
    let s3 = Field::from_physical_unchecked(&s3_phys);
    let __t5 = std::time::Instant::now();

    let (mut s1, mut s2, mut s3) = (s1, s2, s3);
    if dealias {
        s1.dealias_in_place();
        s2.dealias_in_place();
        s3.dealias_in_place();
    }

    for buf in grad_u.into_iter().chain(grad_n).chain(lap_n).chain(grad_rho).chain(visc) {
        grid.give_f64(buf);
    }
    if std::env::var("LIQLAB_TRACE").is_ok() {
        eprintln!(
            "derivs {:?} visc {:?} s1 {:?} assemble {:?} fwd {:?} dealias {:?}",
            __t1 - __t0,
            __t2 - __t1,
            __t3 - __t2,
            __t4 - __t3,
            __t5 - __t4,
            __t5.elapsed()
        );
    }
    Ok(SourceTerms { s1, s2, s3 })
}

/// Physical samples of `μΔu + (μ+λ)∇div u`, one fused spectral multiplier
/// per component: `-μ|ξ|²û_j - (μ+λ)ξ_j(ξ·û)`. The `∇div` part vanishes on
/// the Nyquist planes, matching the composed derivative operators.
fn viscous_term_samples(
    state: &State,
    params: &FluidParams,
) -> Result<[Vec<f64>; 3], SolverError> {
    use num_complex::Complex64;
    use rustfft::FftDirection;

    let grid = state.grid().clone();
    let n = grid.points_per_axis();
    let (mu, mu_lambda) = (params.mu(), params.mu() + params.lambda());
    let u = &state.velocity;
    let xi = grid.xi_table();
    let nyq = n / 2;
    let mut out: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (j, out_j) in out.iter_mut().enumerate() {
        let mut buf = grid.take_buf();
        let (u0, u1, u2) = (u.component(0), u.component(1), u.component(2));
        let uj = u.component(j);
        buf.par_chunks_mut(n).enumerate().with_min_len(n).for_each(|(row, chunk)| {
            let (i0, i1) = (row / n, row % n);
            let (x0, x1) = (xi[i0], xi[i1]);
            let s01 = x0 * x0 + x1 * x1;
            let row_nyquist = i0 == nyq || i1 == nyq;
            let base = row * n;
            for (i2, v) in chunk.iter_mut().enumerate() {
                let idx = base + i2;
                let x2 = xi[i2];
                let sq = s01 + x2 * x2;
                let mut val = -mu * sq * uj[idx];
                if !row_nyquist && i2 != nyq {
                    let dot = x0 * u0[idx] + x1 * u1[idx] + x2 * u2[idx];
                    let xij = [x0, x1, x2][j];
                    val -= mu_lambda * xij * dot;
                }
                *v = val;
            }
        });
        grid.fft3(&mut buf, FftDirection::Inverse);
        let mut samples = grid.take_f64();
        crate::spectral::extract_re_into(&buf, &mut samples);
        grid.give_buf(buf);
        *out_j = samples;
    }
    Ok(out)
}

/// Relative residual of the two algebraic routes to the director force:
/// `∇d·Δd` against `div(∇d⊙∇d) - ½∇(|∇d|²)`, both dealiased.
///
/// The identity is exact (to round-off) on the dealiased dynamics, so the
/// director is truncated to the retained band before either route runs.
pub fn director_force_identity_residual(state: &State) -> Result<f64, SolverError> {
    let grid = state.grid();
    let len = grid.len();
    let director = state.director_pert.dealiased();
    let grad_n = director.gradient()?.to_physical()?;
    let lap_n = director.laplacian()?.to_physical()?;

    // route one: pointwise contraction
    let mut direct = PhysicalField::zeros(grid, 1);
    for j in 0..3 {
        let out = direct.component_mut(j);
        for i in 0..len {
            let mut v = 0.0;
            for m in 0..3 {
                v += grad_n.component(3 * j + m)[i] * lap_n.component(m)[i];
            }
            out[i] = v;
        }
    }
    let direct = Field::from_physical(&direct)?.dealiased();

    // route two: div(∇d⊙∇d) - ½∇|∇d|², products first, derivatives after
    let mut outer = PhysicalField::zeros(grid, 2); // (i,m) = Σ_p ∂_i n_p ∂_m n_p
    let mut grad_sq = PhysicalField::zeros(grid, 0);
    for i in 0..len {
        let mut trace = 0.0;
        for a in 0..3 {
            for m in 0..3 {
                let mut v = 0.0;
                for p in 0..3 {
                    v += grad_n.component(3 * a + p)[i] * grad_n.component(3 * m + p)[i];
                }
                outer.component_mut(3 * a + m)[i] = v;
                if a == m {
                    trace += v;
                }
            }
        }
        grad_sq.component_mut(0)[i] = trace;
    }
    let div_outer = Field::from_physical(&outer)?.dealiased().divergence()?;
    let grad_half = &Field::from_physical(&grad_sq)?.dealiased().gradient()? * 0.5;
    let alt = &div_outer - &grad_half;

    let denom = direct.l2_norm().max(1e-300);
    Ok((&direct - &alt).l2_norm() / denom)
}
