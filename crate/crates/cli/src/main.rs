use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use liqdecay::config::{parse_pair, pick, pick_required, ConfigMap};
use liqdecay::report::VerifySettings;
use liqdecay::runs;
use liqlab::solver::{Scheme, TimeStep};
use liqlab::symbol::FluidParams;

/// Numerical laboratory for the decay rates of a compressible nematic
/// liquid crystal perturbation system.
#[derive(Parser)]
#[command(name = "liqdecay", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve radial plateau data under the exact linearized semigroup and
    /// verify the (1+t)^(-3/4-k/2) rates by quadrature.
    LinearDecay(LinearDecayArgs),
    /// Integrate the full nonlinear system on a periodic box and record
    /// norms, mass, director drift, and energy diagnostics.
    Simulate(SimulateArgs),
    /// Fit decay exponents for every series in an existing CSV.
    Fit(FitArgs),
    /// Check an existing series CSV against the theoretical rates.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ParamFlags {
    /// Shear viscosity μ > 0
    #[arg(long)]
    mu: Option<f64>,
    /// Second viscosity λ (2μ+3λ ≥ 0, μ > λ/2)
    #[arg(long)]
    lambda: Option<f64>,
    /// Adiabatic exponent γ ≥ 1
    #[arg(long)]
    gamma: Option<f64>,
    /// Config file of `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ParamFlags {
    fn resolve(&self) -> Result<(FluidParams, ConfigMap)> {
        let file = match &self.config {
            Some(path) => ConfigMap::load(path)?,
            None => ConfigMap::default(),
        };
        let mu = pick(self.mu, &file, "mu", 1.0)?;
        let lambda = pick(self.lambda, &file, "lambda", 0.0)?;
        let gamma = pick(self.gamma, &file, "gamma", 2.0)?;
        Ok((FluidParams::new(mu, lambda, gamma)?, file))
    }
}

#[derive(Args)]
struct LinearDecayArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Plateau level of the initial Fourier data
    #[arg(long)]
    c0: Option<f64>,
    /// Plateau radius
    #[arg(long)]
    inner: Option<f64>,
    /// Support radius
    #[arg(long)]
    outer: Option<f64>,
    /// Time decades to sample, e.g. `2:4` for [10^2, 10^4]
    #[arg(long, value_name = "LO:HI")]
    t_decades: Option<String>,
    /// Fit/verify window `t1:t2` (defaults to the sampled decades)
    #[arg(long, value_name = "T1:T2")]
    window: Option<String>,
    /// Exponent tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Two-sided constant ratio bound
    #[arg(long)]
    ratio_bound: Option<f64>,
    /// Quadrature node budget
    #[arg(long)]
    nodes: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Grid points per axis (even, ≥ 8)
    #[arg(long)]
    n: Option<usize>,
    /// Box side length
    #[arg(long = "box")]
    box_length: Option<f64>,
    /// Sup-norm amplitude of the initial perturbation
    #[arg(long)]
    amplitude: Option<f64>,
    /// Spectral band `lo:hi` of the initial data
    #[arg(long, value_name = "LO:HI")]
    band: Option<String>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Number of steps
    #[arg(long)]
    steps: Option<usize>,
    /// Fixed time step (mutually exclusive with --cfl)
    #[arg(long)]
    dt: Option<f64>,
    /// CFL number in (0, 1]
    #[arg(long)]
    cfl: Option<f64>,
    /// Integrator: `etd2` or `imex`
    #[arg(long)]
    scheme: Option<String>,
    /// Director renormalization cadence (0 = never)
    #[arg(long)]
    renormalize_every: Option<usize>,
    /// Diagnostics sampling cadence in steps
    #[arg(long)]
    sample_every: Option<usize>,
    /// Snapshot cadence in steps (0 = never)
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// Cross-term weight δ ∈ [0, 1/8] of the energy functional
    #[arg(long)]
    delta: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Series CSV to fit
    #[arg(long = "in")]
    input: PathBuf,
    /// Fit window `t1:t2`
    #[arg(long, value_name = "T1:T2")]
    window: Option<String>,
    /// Ratio bound for the two-sided bracket
    #[arg(long)]
    ratio_bound: Option<f64>,
    /// Exponent tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Optional report directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Series CSV to verify
    #[arg(long = "in")]
    input: PathBuf,
    /// Verify window `t1:t2`
    #[arg(long, value_name = "T1:T2")]
    window: Option<String>,
    /// Exponent tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Two-sided constant ratio bound
    #[arg(long)]
    ratio_bound: Option<f64>,
    /// Optional report directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn verify_settings(
    window: &Option<String>,
    tol: Option<f64>,
    ratio_bound: Option<f64>,
    file: &ConfigMap,
    default_window: (f64, f64),
) -> Result<VerifySettings> {
    let window = match window {
        Some(raw) => parse_pair(raw)?,
        None => match file.get::<String>("window")? {
            Some(raw) => parse_pair(&raw)?,
            None => default_window,
        },
    };
    Ok(VerifySettings {
        window,
        tolerance: pick(tol, file, "tol", 0.05)?,
        ratio_bound: pick(ratio_bound, file, "ratio-bound", 3.0)?,
    })
}

fn run_linear_decay(args: &LinearDecayArgs) -> Result<bool> {
    let (params, file) = args.params.resolve()?;
    let decades = match &args.t_decades {
        Some(raw) => parse_pair(raw)?,
        None => match file.get::<String>("t-decades")? {
            Some(raw) => parse_pair(&raw)?,
            None => (2.0, 4.0),
        },
    };
    let sampled = (10f64.powf(decades.0), 10f64.powf(decades.1));
    let settings = runs::LinearDecaySettings {
        params,
        c0: pick(args.c0, &file, "c0", 1.0)?,
        inner: pick(args.inner, &file, "inner", 1.0)?,
        outer: pick(args.outer, &file, "outer", 2.0)?,
        verify: verify_settings(&args.window, args.tol, args.ratio_bound, &file, sampled)?,
        samples_per_decade: 16,
        node_count: pick(args.nodes, &file, "nodes", 256)?,
        out: pick_required(args.out.clone(), &file, "out")?,
    };
    runs::with_failure_marker(&settings.out.clone(), || runs::linear_decay(&settings))
}

fn run_simulate(args: &SimulateArgs) -> Result<bool> {
    let (params, file) = args.params.resolve()?;
    let time_step = match (args.dt, args.cfl) {
        (Some(_), Some(_)) => bail!("--dt and --cfl are mutually exclusive"),
        (Some(dt), None) => TimeStep::Fixed(dt),
        (None, Some(c)) => TimeStep::Cfl(c),
        (None, None) => match (file.get::<f64>("dt")?, file.get::<f64>("cfl")?) {
            (Some(dt), _) => TimeStep::Fixed(dt),
            (None, Some(c)) => TimeStep::Cfl(c),
            (None, None) => TimeStep::Cfl(0.5),
        },
    };
    let scheme_name = pick(args.scheme.clone(), &file, "scheme", "etd2".to_string())?;
    let scheme = match scheme_name.as_str() {
        "etd2" => Scheme::DuhamelEtd2,
        "imex" => Scheme::ImexRk2,
        other => bail!("unknown scheme `{other}`; use `etd2` or `imex`"),
    };
    let band = match &args.band {
        Some(raw) => parse_pair(raw)?,
        None => match file.get::<String>("band")? {
            Some(raw) => parse_pair(&raw)?,
            None => (0.0, 3.0),
        },
    };
    let settings = runs::SimulateSettings {
        params,
        points_per_axis: pick(args.n, &file, "n", 64)?,
        box_length: pick(args.box_length, &file, "box", std::f64::consts::TAU)?,
        amplitude: pick(args.amplitude, &file, "amplitude", 0.25)?,
        band,
        seed: pick(args.seed, &file, "seed", 0)?,
        steps: pick(args.steps, &file, "steps", 1000)?,
        time_step,
        scheme,
        renormalize_every: pick(args.renormalize_every, &file, "renormalize-every", 1)?,
        sample_every: pick(args.sample_every, &file, "sample-every", 10)?,
        snapshot_every: pick(args.snapshot_every, &file, "snapshot-every", 0)?,
        delta: pick(args.delta, &file, "delta", 0.125)?,
        density_floor: pick(None, &file, "floor", 0.1)?,
        out: pick_required(args.out.clone(), &file, "out")?,
    };
    runs::with_failure_marker(&settings.out.clone(), || runs::simulate(&settings))
}

fn dispatch(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::LinearDecay(args) => run_linear_decay(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Fit(args) => {
            let file = ConfigMap::default();
            let settings =
                verify_settings(&args.window, args.tol, args.ratio_bound, &file, (1e2, 1e4))?;
            runs::fit(&args.input, &settings, args.out.as_deref())
        }
        Command::Verify(args) => {
            let file = ConfigMap::default();
            let settings =
                verify_settings(&args.window, args.tol, args.ratio_bound, &file, (1e2, 1e4))?;
            runs::verify(&args.input, &settings, args.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("LIQDECAY_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verdicts failed; see report output");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
