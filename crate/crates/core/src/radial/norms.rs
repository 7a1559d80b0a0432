//! Whole-space L² norms of the evolved radial data.
//!
//! For radial data the 3D integral collapses to one dimension:
//! `N_k(t) = (4π ∫₀^∞ r^{2k+2} |e^{-tG(r)} Û₀(r)|² dr)^{1/2}`,
//! with the semigroup evaluated per quadrature node. Components can be
//! measured jointly or individually, and the incompressible part evolves
//! under its own scalar factor `e^{-μ r² t}`.

use crate::series::{SeriesLabel, TimeSeries};
use crate::symbol::{fluid_propagator, heat_factor, incompressible_factor, FluidParams};

use super::profile::{ProfileTriple, RadialProfile};
use super::quadrature::{integrate_radial, DecayEnvelope, QuadratureSpec};
use super::RadialError;

/// Which part of the evolved triple a norm measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateComponent {
    /// Density perturbation `ϱ̂`.
    Density,
    /// Compressible velocity/momentum potential `b̂`.
    Compressible,
    /// Director gradient `ŵ`; its `N_k` is the norm `‖∇^{k+1} n‖`.
    Director,
    /// Euclidean norm of the whole triple.
    All,
}

impl StateComponent {
    pub fn name(&self) -> &'static str {
        match self {
            StateComponent::Density => "density",
            StateComponent::Compressible => "compressible",
            StateComponent::Director => "director",
            StateComponent::All => "all",
        }
    }
}

const MAX_K: u32 = 4;

fn envelope_for(params: &FluidParams, component: StateComponent) -> DecayEnvelope {
    let nu = params.long_viscosity();
    let p = params.p_prime();
    match component {
        StateComponent::Director => {
            DecayEnvelope { gauss_rate: 2.0, const_rate: f64::INFINITY, osc_rate: 0.0 }
        }
        StateComponent::Density | StateComponent::Compressible => {
            DecayEnvelope { gauss_rate: nu, const_rate: 2.0 * p / nu, osc_rate: p.sqrt() }
        }
        StateComponent::All => DecayEnvelope {
            gauss_rate: nu.min(2.0),
            const_rate: 2.0 * p / nu,
            osc_rate: p.sqrt(),
        },
    }
}

/// `N_k(t)` for one component (or the full triple) of the evolved data.
pub fn norm_evolution_component(
    profiles: &ProfileTriple,
    params: &FluidParams,
    component: StateComponent,
    k: u32,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64, RadialError> {
    if k > MAX_K {
        return Err(RadialError::BadSpec(format!("derivative order k = {k} exceeds {MAX_K}")));
    }
    if !(t >= 0.0) {
        return Err(RadialError::Symbol(crate::symbol::SymbolError::NegativeTime(t)));
    }
    let envelope = envelope_for(params, component);
    let breakpoints = profiles.breakpoints();
    let support = profiles.support_radius();

    let needs_fluid = matches!(
        component,
        StateComponent::Density | StateComponent::Compressible | StateComponent::All
    );
    let needs_heat = matches!(component, StateComponent::Director | StateComponent::All);

    let integrand = |r: f64| -> f64 {
        let mut sq = 0.0;
        if needs_fluid {
            let m = fluid_propagator(params, r, t).expect("r >= 0, t >= 0");
            let rho0 = profiles.density.eval(r);
            let b0 = profiles.momentum.eval(r);
            let rho_t = m[0][0] * rho0 + m[0][1] * b0;
            let b_t = m[1][0] * rho0 + m[1][1] * b0;
            match component {
                StateComponent::Density => sq += rho_t.norm_sqr(),
                StateComponent::Compressible => sq += b_t.norm_sqr(),
                StateComponent::All => sq += rho_t.norm_sqr() + b_t.norm_sqr(),
                StateComponent::Director => unreachable!(),
            }
        }
        if needs_heat {
            let w_t = profiles.director.eval(r) * heat_factor(r, t);
            sq += w_t * w_t;
        }
        r.powi(2 * k as i32 + 2) * sq
    };

    let val = integrate_radial(spec, &breakpoints, support, t, &envelope, 0, integrand)?;
    Ok((4.0 * std::f64::consts::PI * val).sqrt())
}

/// `N_k(t)` of the full triple.
pub fn norm_evolution(
    profiles: &ProfileTriple,
    params: &FluidParams,
    k: u32,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64, RadialError> {
    norm_evolution_component(profiles, params, StateComponent::All, k, t, spec)
}

/// `N_k(t)` of an incompressible-part profile under `e^{-μ r² t}`.
pub fn incompressible_norm_evolution(
    profile: &RadialProfile,
    params: &FluidParams,
    k: u32,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<f64, RadialError> {
    if k > MAX_K {
        return Err(RadialError::BadSpec(format!("derivative order k = {k} exceeds {MAX_K}")));
    }
    let envelope =
        DecayEnvelope { gauss_rate: 2.0 * params.mu(), const_rate: f64::INFINITY, osc_rate: 0.0 };
    let breakpoints: Vec<f64> = profile.nodes().to_vec();
    let integrand = |r: f64| -> f64 {
        let v = profile.eval(r) * incompressible_factor(params, r, t);
        r.powi(2 * k as i32 + 2) * v * v
    };
    let val =
        integrate_radial(spec, &breakpoints, profile.support_radius(), t, &envelope, 0, integrand)?;
    Ok((4.0 * std::f64::consts::PI * val).sqrt())
}

/// Sample `N_k(t)` on a time grid into a labeled series.
pub fn norm_series(
    profiles: &ProfileTriple,
    params: &FluidParams,
    component: StateComponent,
    k: u32,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<TimeSeries, RadialError> {
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        values.push(norm_evolution_component(profiles, params, component, k, t, spec)?);
    }
    TimeSeries::new(
        SeriesLabel { component: component.name().to_string(), k },
        times.to_vec(),
        values,
    )
    .map_err(RadialError::Series)
}
