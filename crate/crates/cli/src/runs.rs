//! The four experiment modes behind the CLI.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use liqlab::radial::{
    incompressible_norm_evolution, norm_series, ProfileTriple, QuadratureSpec, StateComponent,
};
use liqlab::series::{geometric_times, SeriesLabel, TimeSeries};
use liqlab::solver::{
    energy_xh, initial_data_large, Scheme, Stepper, StepperConfig, TimeStep,
};
use liqlab::spectral::{make_grid, write_snapshot, CutoffShape};
use liqlab::symbol::{admissible_r0, default_cutoffs, FluidParams};

use crate::csvio::{write_band_scan_csv, write_report_csv, write_series_csv, write_series_rows};
use crate::report::{report_for, verify_rates, DecayReport, VerifySettings};

/// Marker file written next to partial artifacts when a mode fails.
pub const FAILED_MARKER: &str = "_FAILED";

/// Run a mode with failure-marker handling around its output directory.
pub fn with_failure_marker(out: &Path, run: impl FnOnce() -> Result<bool>) -> Result<bool> {
    match run() {
        Ok(ok) => Ok(ok),
        Err(e) => {
            let _ = std::fs::create_dir_all(out);
            let _ = std::fs::write(out.join(FAILED_MARKER), format!("{e:#}\n"));
            Err(e)
        }
    }
}

fn print_reports(reports: &[DecayReport]) {
    for r in reports {
        println!(
            "{} {:<16} fitted = {:+.4}  theoretical = {:+.4}  r2 = {:.6}  bracket = [{:.4}, {:.4}]",
            if r.pass { "PASS" } else { "FAIL" },
            r.label.to_string(),
            r.fitted,
            r.theoretical,
            r.r_squared,
            r.c_lower,
            r.c_upper,
        );
    }
}

#[derive(Clone, Debug)]
pub struct LinearDecaySettings {
    pub params: FluidParams,
    pub c0: f64,
    pub inner: f64,
    pub outer: f64,
    pub verify: VerifySettings,
    pub samples_per_decade: usize,
    pub node_count: usize,
    pub out: PathBuf,
}

/// Quadrature experiment: evolve plateau data under the exact semigroup,
/// sample all component norms, fit, and check the two-sided rates.
pub fn linear_decay(s: &LinearDecaySettings) -> Result<bool> {
    std::fs::create_dir_all(&s.out)
        .with_context(|| format!("creating {}", s.out.display()))?;
    let profiles = ProfileTriple::plateau(s.c0, s.inner, s.outer)?;
    let spec = QuadratureSpec::new(s.node_count, 0.0, f64::INFINITY)?;
    let times = geometric_times(s.verify.window.0, s.verify.window.1, s.samples_per_decade);

    let mut series = Vec::new();
    for component in
        [StateComponent::Density, StateComponent::Compressible, StateComponent::Director]
    {
        for k in 0..=2u32 {
            series.push(norm_series(&profiles, &s.params, component, k, &times, &spec)?);
        }
    }
    // the incompressible part evolves under its own heat factor; reuse the
    // same plateau shape as its initial datum
    for k in 0..=2u32 {
        let values: Result<Vec<f64>, _> = times
            .iter()
            .map(|&t| incompressible_norm_evolution(&profiles.density, &s.params, k, t, &spec))
            .collect();
        series.push(TimeSeries::new(
            SeriesLabel { component: "incompressible".into(), k },
            times.clone(),
            values?,
        )?);
    }
    write_series_csv(&s.out.join("series.csv"), &series)?;

    let r0 = admissible_r0(&s.params);
    write_band_scan_csv(&s.out.join("bandscan.csv"), &s.params, 8.0 * r0 + 2.0, 256)?;

    let reports = verify_rates(&series, &s.verify)?;
    write_report_csv(&s.out.join("report.csv"), &reports)?;
    print_reports(&reports);
    Ok(reports.iter().all(|r| r.pass))
}

#[derive(Clone, Debug)]
pub struct SimulateSettings {
    pub params: FluidParams,
    pub points_per_axis: usize,
    pub box_length: f64,
    pub amplitude: f64,
    pub band: (f64, f64),
    pub seed: u64,
    pub steps: usize,
    pub time_step: TimeStep,
    pub scheme: Scheme,
    pub renormalize_every: usize,
    pub sample_every: usize,
    pub snapshot_every: usize,
    pub delta: f64,
    pub density_floor: f64,
    pub out: PathBuf,
}

/// Box-solver run with diagnostics: norms, mass, director drift, and the
/// second-order energy functionals, plus optional restart snapshots.
pub fn simulate(s: &SimulateSettings) -> Result<bool> {
    std::fs::create_dir_all(&s.out)
        .with_context(|| format!("creating {}", s.out.display()))?;
    let grid = make_grid(s.points_per_axis, s.box_length)?;
    let background = [0.0, 0.0, 1.0];
    let mut state = initial_data_large(
        &grid,
        s.amplitude,
        s.band,
        background,
        s.density_floor,
        s.seed,
    )?;
    let cutoffs = default_cutoffs(&s.params, CutoffShape::Smooth);
    let config = StepperConfig {
        time_step: s.time_step,
        scheme: s.scheme,
        renormalize_every: s.renormalize_every,
        density_floor: s.density_floor,
        ..Default::default()
    };
    write_manifest(s, &config)?;
    let mut stepper = Stepper::new(s.params, config)?;

    let mut norm_rows: Vec<(f64, u32, String, f64)> = Vec::new();
    let mut diag = csv::Writer::from_path(s.out.join("diagnostics.csv"))?;
    diag.write_record([
        "t",
        "mass_mean",
        "director_drift",
        "h1_norm",
        "xh",
        "xh_cancelled",
        "hessian_energy",
    ])?;

    let sample = |state: &liqlab::solver::State,
                      norm_rows: &mut Vec<(f64, u32, String, f64)>,
                      diag: &mut csv::Writer<std::fs::File>|
     -> Result<()> {
        let t = state.time;
        for k in 0..=2u32 {
            norm_rows.push((t, k, "density".into(), state.varrho.sobolev_seminorm(k)?));
            norm_rows.push((t, k, "velocity".into(), state.velocity.sobolev_seminorm(k)?));
            norm_rows.push((
                t,
                k,
                "director".into(),
                state.director_pert.sobolev_seminorm(k + 1)?,
            ));
        }
        let e = energy_xh(state, s.delta, &cutoffs)?;
        diag.write_record([
            format!("{t:.16e}"),
            format!("{:.16e}", state.mass_mean()),
            format!("{:.16e}", state.director_unit_drift()?),
            format!("{:.16e}", state.h1_perturbation_norm()),
            format!("{:.16e}", e.xh),
            format!("{:.16e}", e.xh_cancelled),
            format!("{:.16e}", e.hessian_energy),
        ])?;
        Ok(())
    };

    sample(&state, &mut norm_rows, &mut diag)?;
    snapshot_if_due(s, 0, &state)?;
    for step in 1..=s.steps {
        state = stepper.step(&state)?;
        if step % s.sample_every.max(1) == 0 || step == s.steps {
            sample(&state, &mut norm_rows, &mut diag)?;
        }
        snapshot_if_due(s, step, &state)?;
    }
    diag.flush()?;
    write_series_rows(&s.out.join("norms.csv"), &norm_rows)?;
    Ok(true)
}

fn snapshot_if_due(s: &SimulateSettings, step: usize, state: &liqlab::solver::State) -> Result<()> {
    if s.snapshot_every == 0 || step % s.snapshot_every != 0 {
        return Ok(());
    }
    for (name, field) in [
        ("density", &state.varrho),
        ("velocity", &state.velocity),
        ("director", &state.director_pert),
    ] {
        let path = s.out.join(format!("snap_{step:06}_{name}.lqf"));
        write_snapshot(field, &path)?;
    }
    Ok(())
}

fn write_manifest(s: &SimulateSettings, config: &StepperConfig) -> Result<()> {
    let dt = match s.time_step {
        TimeStep::Fixed(dt) => format!("dt = {dt}"),
        TimeStep::Cfl(c) => format!("cfl = {c}"),
    };
    let scheme = match s.scheme {
        Scheme::DuhamelEtd2 => "etd2",
        Scheme::ImexRk2 => "imex",
    };
    let body = format!(
        "amplitude = {}\nband = {}:{}\nbox = {}\ndealias = {}\ndelta = {}\nfloor = {}\ngamma = {}\nlambda = {}\nmu = {}\nn = {}\nrenormalize-every = {}\nscheme = {}\nseed = {}\nsteps = {}\n{}\n",
        s.amplitude,
        s.band.0,
        s.band.1,
        s.box_length,
        config.dealias,
        s.delta,
        s.density_floor,
        s.params.gamma(),
        s.params.lambda(),
        s.params.mu(),
        s.points_per_axis,
        s.renormalize_every,
        scheme,
        s.seed,
        s.steps,
        dt,
    );
    let digest = Sha256::digest(body.as_bytes());
    let manifest = format!("{body}config-sha256 = {digest:x}\n");
    std::fs::write(s.out.join("run.manifest"), manifest)?;
    Ok(())
}

/// Fit every recognized series in a CSV and write a report.
pub fn fit(input: &Path, settings: &VerifySettings, out: Option<&Path>) -> Result<bool> {
    let series = crate::csvio::read_series_csv(input)?;
    let mut reports = Vec::new();
    for s in &series {
        reports.push(report_for(s, settings)?);
    }
    reports.sort_by(|a, b| a.label.cmp(&b.label));
    print_reports(&reports);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_report_csv(&dir.join("report.csv"), &reports)?;
    }
    Ok(true)
}

/// Verify the full required set of series against the theoretical rates.
pub fn verify(input: &Path, settings: &VerifySettings, out: Option<&Path>) -> Result<bool> {
    let series = crate::csvio::read_series_csv(input)?;
    let reports = verify_rates(&series, settings)?;
    print_reports(&reports);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_report_csv(&dir.join("report.csv"), &reports)?;
    }
    Ok(reports.iter().all(|r| r.pass))
}
