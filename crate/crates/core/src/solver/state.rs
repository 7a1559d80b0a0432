//! Solver state: the perturbation triple on a periodic grid.

use rand::SeedableRng;

use crate::spectral::{random_real_field, Field, Grid, PhysicalField};

use super::SolverError;

/// Perturbation state `(ϱ, u, n)` about the equilibrium `(1, 0, d̄)`:
/// `ϱ = ρ - 1` (scalar), velocity `u`, and director deviation `n = d - d̄`
/// with `d̄` a unit background vector. Density must stay above a positive
/// floor pointwise and `n + d̄` must stay on the unit sphere.
#[derive(Clone, Debug)]
pub struct State {
    pub varrho: Field,
    pub velocity: Field,
    pub director_pert: Field,
    pub background: [f64; 3],
    pub time: f64,
}

impl State {
    pub fn new(
        varrho: Field,
        velocity: Field,
        director_pert: Field,
        background: [f64; 3],
        time: f64,
    ) -> Result<Self, SolverError> {
        if varrho.rank() != 0 || velocity.rank() != 1 || director_pert.rank() != 1 {
            return Err(SolverError::InvalidConfig(
                "state needs a scalar density, vector velocity, vector director".into(),
            ));
        }
        if varrho.grid().as_ref() != velocity.grid().as_ref()
            || varrho.grid().as_ref() != director_pert.grid().as_ref()
        {
            return Err(SolverError::InvalidConfig("state fields live on different grids".into()));
        }
        let mag = (background[0].powi(2) + background[1].powi(2) + background[2].powi(2)).sqrt();
        if (mag - 1.0).abs() > 1e-12 {
            return Err(SolverError::InvalidConfig(format!(
                "background director must be a unit vector, |d̄| = {mag}"
            )));
        }
        Ok(Self { varrho, velocity, director_pert, background, time })
    }

    /// The constant equilibrium state.
    pub fn equilibrium(grid: &Grid, background: [f64; 3]) -> Result<Self, SolverError> {
        Self::new(Field::zeros(grid, 0), Field::zeros(grid, 1), Field::zeros(grid, 1), background, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        self.varrho.grid()
    }

    /// Mean of ϱ (exactly the ξ = 0 coefficient). Conserved by the stepper.
    pub fn mass_mean(&self) -> f64 {
        self.varrho.mean()[0].re
    }

    /// Physical samples of the full director `d = n + d̄`.
    pub fn director_physical(&self) -> Result<PhysicalField, SolverError> {
        let mut d = self.director_pert.to_physical()?;
        for c in 0..3 {
            let bg = self.background[c];
            for v in d.component_mut(c) {
                *v += bg;
            }
        }
        Ok(d)
    }

    /// Max pointwise deviation `| |d| - 1 |` of the director from the sphere.
    pub fn director_unit_drift(&self) -> Result<f64, SolverError> {
        let d = self.director_physical()?;
        let len = self.grid().len();
        let mut worst = 0.0_f64;
        for i in 0..len {
            let mag = (d.component(0)[i].powi(2)
                + d.component(1)[i].powi(2)
                + d.component(2)[i].powi(2))
            .sqrt();
            worst = worst.max((mag - 1.0).abs());
        }
        Ok(worst)
    }

    /// `(‖ϱ‖²_{H¹} + ‖u‖²_{H¹} + ‖∇n‖²_{H¹})^{1/2}` — the norm whose decay
    /// the energy diagnostics monitor.
    pub fn h1_perturbation_norm(&self) -> f64 {
        let sq = |x: f64| x * x;
        let mut sum = 0.0;
        sum += sq(self.varrho.h1_norm());
        sum += sq(self.velocity.h1_norm());
        sum += sq(self.director_pert.sobolev_seminorm(1).expect("k=1"));
        sum += sq(self.director_pert.sobolev_seminorm(2).expect("k=2"));
        sum.sqrt()
    }

    /// Minimum of `1 + ϱ` over the grid together with its position.
    pub fn density_minimum(&self) -> Result<(f64, [usize; 3]), SolverError> {
        let phys = self.varrho.to_physical()?;
        let mut min = f64::INFINITY;
        let mut at = 0usize;
        for (i, v) in phys.component(0).iter().enumerate() {
            if 1.0 + v < min {
                min = 1.0 + v;
                at = i;
            }
        }
        let (i0, i1, i2) = self.grid().unflat(at);
        Ok((min, [i0, i1, i2]))
    }
}

/// Pointwise projection of the director back to the unit sphere:
/// `d ← d/|d|`, `n ← d - d̄`. Idempotent; rejects near-zero magnitudes
/// (the projection would be meaningless past that point).
pub fn renormalize_director(state: &State) -> Result<State, SolverError> {
    let mut d = state.director_physical()?;
    let len = state.grid().len();
    let mut min_mag = f64::INFINITY;
    for i in 0..len {
        let mag = (d.component(0)[i].powi(2)
            + d.component(1)[i].powi(2)
            + d.component(2)[i].powi(2))
        .sqrt();
        min_mag = min_mag.min(mag);
    }
    if min_mag < 0.5 {
        return Err(SolverError::DirectorBreakdown { min_mag });
    }
    for i in 0..len {
        let mag = (d.component(0)[i].powi(2)
            + d.component(1)[i].powi(2)
            + d.component(2)[i].powi(2))
        .sqrt();
        for c in 0..3 {
            d.component_mut(c)[i] /= mag;
        }
    }
    for c in 0..3 {
        let bg = state.background[c];
        for v in d.component_mut(c) {
            *v -= bg;
        }
    }
    let director_pert = Field::from_physical(&d)?;
    Ok(State { director_pert, ..state.clone() })
}

/// Random band-limited initial data with prescribed sup-norm amplitude.
///
/// Density and velocity are mean-zero Gaussian fields rescaled to
/// `max|·| = amplitude`; the director is built by the exponential map on the
/// sphere from a tangent field of the same amplitude, so `|d| = 1` holds to
/// round-off by construction. Deterministic in the seed.
pub fn initial_data_large(
    grid: &Grid,
    amplitude: f64,
    band: (f64, f64),
    background: [f64; 3],
    density_floor: f64,
    seed: u64,
) -> Result<State, SolverError> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(SolverError::InvalidConfig(format!("bad amplitude {amplitude}")));
    }
    if amplitude >= 1.0 - density_floor {
        return Err(SolverError::AmplitudeTooLarge { amplitude, floor: density_floor });
    }
    let xi_limit = grid.dealias_limit() as f64 * 2.0 * std::f64::consts::PI / grid.box_length();
    if band.1 > xi_limit + 1e-12 {
        return Err(SolverError::InvalidConfig(format!(
            "band upper edge {} exceeds the dealias limit {xi_limit}",
            band.1
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let rescale = |mut f: Field| -> Result<Field, SolverError> {
        f.remove_mean();
        if amplitude == 0.0 {
            return Ok(&f * 0.0);
        }
        let max = f.to_physical()?.max_abs();
        if max == 0.0 {
            return Ok(f);
        }
        Ok(&f * (amplitude / max))
    };

    let varrho = rescale(random_real_field(grid, 0, band.0, band.1, &mut rng))?;
    let velocity = rescale(random_real_field(grid, 1, band.0, band.1, &mut rng))?;

    // orthonormal frame (e1, e2, d̄) for the tangent plane
    let e1 = {
        let trial = if background[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot = trial[0] * background[0] + trial[1] * background[1] + trial[2] * background[2];
        let mut v = [trial[0] - dot * background[0], trial[1] - dot * background[1], trial[2] - dot * background[2]];
        let mag = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.iter_mut().for_each(|x| *x /= mag);
        v
    };
    let e2 = [
        background[1] * e1[2] - background[2] * e1[1],
        background[2] * e1[0] - background[0] * e1[2],
        background[0] * e1[1] - background[1] * e1[0],
    ];

    let a = rescale(random_real_field(grid, 0, band.0, band.1, &mut rng))?.to_physical()?;
    let b = rescale(random_real_field(grid, 0, band.0, band.1, &mut rng))?.to_physical()?;

    let mut d = PhysicalField::zeros(grid, 1);
    for i in 0..grid.len() {
        let (va, vb) = (a.component(0)[i], b.component(0)[i]);
        let tangent = [
            va * e1[0] + vb * e2[0],
            va * e1[1] + vb * e2[1],
            va * e1[2] + vb * e2[2],
        ];
        let theta = (tangent[0].powi(2) + tangent[1].powi(2) + tangent[2].powi(2)).sqrt();
        // exp map: d = cos θ d̄ + sin θ v̂; sinc form is stable at θ → 0
        let (cos_t, sinc_t) =
            if theta < 1e-8 { (1.0 - theta * theta / 2.0, 1.0 - theta * theta / 6.0) } else { (theta.cos(), theta.sin() / theta) };
        for c in 0..3 {
            d.component_mut(c)[i] = cos_t * background[c] + sinc_t * tangent[c];
        }
    }
    for c in 0..3 {
        let bg = background[c];
        for v in d.component_mut(c) {
            *v -= bg;
        }
    }
    let director_pert = Field::from_physical(&d)?;

    let state = State::new(varrho, velocity, director_pert, background, 0.0)?;
    let (min_density, at) = state.density_minimum()?;
    if min_density < density_floor {
        return Err(SolverError::DensityFloor { min: min_density, floor: density_floor, position: at });
    }
    Ok(state)
}

/// Momentum diagnostic `m = (1 + ϱ) u`, formed pointwise and dealiased.
pub fn momentum(state: &State) -> Result<Field, SolverError> {
    let rho = state.varrho.to_physical()?;
    let u = state.velocity.to_physical()?;
    let mut m = PhysicalField::zeros(state.grid(), 1);
    for c in 0..3 {
        for i in 0..state.grid().len() {
            m.component_mut(c)[i] = (1.0 + rho.component(0)[i]) * u.component(c)[i];
        }
    }
    Ok(Field::from_physical(&m)?.dealiased())
}
