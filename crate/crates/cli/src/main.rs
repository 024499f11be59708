//! Command-line front end: every pipeline of the library as a subcommand,
//! emitting deterministic CSV/JSON tables with a full config echo.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use floquet_spin::floquet::{
    floquet_solve, fourier_components, propagate, quasienergy_map, Coupling, FourierOptions,
    SolveOptions,
};
use floquet_spin::hysteresis::{
    dephasing_ladder, quasistationary_curve, transient_curve, HysteresisCurve,
};
use floquet_spin::master::{
    decoherence_rate, evolve_reduced, rate_set, sigma_z_expectation,
};
use floquet_spin::pauli::{Basis, DensityMatrix2, Operator2, StateVector2};
use floquet_spin::{drive, BathSpec, DriveParams, ReducedState};

use config::{
    DecoherenceScanConfig, EvolveConfig, FreeEvolveConfig, GridSpec, HysteresisConfig,
    HysteresisMode, InitialState, LadderConfigFile, QsScanConfig, QuasienergyMapConfig,
};
use output::{Format, Table};

const WORKERS_ENV: &str = "FLOQUET_SPIN_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl From<floquet_spin::Error> for CliError {
    fn from(e: floquet_spin::Error) -> Self {
        match e {
            floquet_spin::Error::InvalidInput(m) => CliError::Config(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "floquet-spin",
    version,
    about = "Floquet-Markov dynamics of a driven two-level system in a thermal bath"
)]
struct Cli {
    /// JSON config file; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads for grid scans (default: FLOQUET_SPIN_WORKERS or the
    /// available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct ParamFlags {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, value_parser = parse_coupling)]
    coupling: Option<Coupling>,
    #[arg(long)]
    n_periods: Option<usize>,
    #[arg(long)]
    samples_per_period: Option<usize>,
    #[arg(long, value_enum)]
    initial: Option<InitialState>,
}

fn parse_coupling(s: &str) -> Result<Coupling, String> {
    match s.to_ascii_lowercase().as_str() {
        "sigmax" | "sigma-x" | "sx" | "x" => Ok(Coupling::SigmaX),
        "sigmay" | "sigma-y" | "sy" | "y" => Ok(Coupling::SigmaY),
        "sigmaz" | "sigma-z" | "sz" | "z" => Ok(Coupling::SigmaZ),
        other => Err(format!("unknown coupling '{other}' (sigmax|sigmay|sigmaz)")),
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    GridSpec::try_from(s.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-energy gap and LZS parameter over an (A, Delta) grid.
    QuasienergyMap {
        #[arg(long, value_parser = parse_grid)]
        a_grid: Option<GridSpec>,
        #[arg(long, value_parser = parse_grid)]
        delta_grid: Option<GridSpec>,
    },
    /// Decoherence-free <sigma_z>(tau) from a pure initial state.
    FreeEvolve {
        /// Named parameter preset (see the README for the list).
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Damped <sigma_z>(tau) under the secular master equation.
    Evolve {
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Quasistationary <sigma_z> versus drive amplitude.
    QsScan {
        #[arg(long, value_parser = parse_grid)]
        a_grid: Option<GridSpec>,
        #[arg(long)]
        tau_eval: Option<f64>,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Decoherence rate versus drive amplitude.
    DecoherenceScan {
        #[arg(long, value_parser = parse_grid)]
        a_grid: Option<GridSpec>,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Magnetization curve: quasistationary loop or transient path.
    Hysteresis {
        #[arg(long, value_enum)]
        mode: Option<HysteresisMode>,
        #[command(flatten)]
        flags: ParamFlags,
    },
    /// Instantaneous-dephasing population ladder (molecular nanomagnets).
    Ladder {
        #[arg(long)]
        preset: Option<String>,
        /// Downward rate in 1/s.
        #[arg(long)]
        gamma12: Option<f64>,
        /// Upward rate in 1/s (defaults to gamma12).
        #[arg(long)]
        gamma21: Option<f64>,
        /// Drive angular frequency in rad/s.
        #[arg(long)]
        omega: Option<f64>,
        #[command(flatten)]
        flags: ParamFlags,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out_path = cli
        .out
        .clone()
        .ok_or_else(|| CliError::Config("--out <path> is required".into()))?;
    let workers = cli
        .workers
        .or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });

    let bytes = match &cli.command {
        Command::QuasienergyMap { a_grid, delta_grid } => {
            let mut cfg: QuasienergyMapConfig = match &cli.config {
                Some(path) => config::load(path)?,
                None => QuasienergyMapConfig {
                    a_grid: a_grid
                        .clone()
                        .ok_or_else(|| CliError::Config("--a-grid required".into()))?,
                    delta_grid: delta_grid
                        .clone()
                        .ok_or_else(|| CliError::Config("--delta-grid required".into()))?,
                },
            };
            if let Some(g) = a_grid {
                cfg.a_grid = g.clone();
            }
            if let Some(g) = delta_grid {
                cfg.delta_grid = g.clone();
            }
            run_quasienergy_map(&cfg, workers, cli.format)?
        }
        Command::FreeEvolve { preset, flags } => {
            let mut cfg: FreeEvolveConfig = match &cli.config {
                Some(path) => config::load(path)?,
                None => FreeEvolveConfig {
                    preset: None,
                    a: None,
                    delta: None,
                    n_periods: 8,
                    samples_per_period: 256,
                    initial: InitialState::Minus,
                },
            };
            if preset.is_some() {
                cfg.preset = preset.clone();
            }
            merge_free(&mut cfg, flags);
            run_free_evolve(&cfg, cli.format)?
        }
        Command::Evolve { flags } => {
            let mut cfg: EvolveConfig = match &cli.config {
                Some(path) => config::load(path)?,
                None => EvolveConfig {
                    a: require(flags.a, "--a")?,
                    delta: require(flags.delta, "--delta")?,
                    theta: require(flags.theta, "--theta")?,
                    kappa: 1.0,
                    coupling: Coupling::SigmaZ,
                    initial: InitialState::Minus,
                    n_periods: 8,
                    samples_per_period: 256,
                },
            };
            merge_evolve(&mut cfg, flags);
            run_evolve(&cfg, cli.format)?
        }
        Command::QsScan { a_grid, tau_eval, flags } => {
            let mut cfg: QsScanConfig = match &cli.config {
                Some(path) => config::load(path)?,
                None => QsScanConfig {
                    delta: require(flags.delta, "--delta")?,
                    theta: require(flags.theta, "--theta")?,
                    kappa: 1.0,
                    coupling: Coupling::SigmaZ,
                    a_grid: a_grid
                        .clone()
                        .ok_or_else(|| CliError::Config("--a-grid required".into()))?,
                    tau_eval: 0.0,
                },
            };
            if let Some(g) = a_grid {
                cfg.a_grid = g.clone();
            }
            if let Some(t) = tau_eval {
                cfg.tau_eval = *t;
            }
            merge_qs(&mut cfg, flags);
            run_qs_scan(&cfg, workers, cli.format)?
        }
        Command::DecoherenceScan { a_grid, flags } => {
            let mut cfg: DecoherenceScanConfig = match &cli.config {
                Some(path) => config::load(path)?,
                None => DecoherenceScanConfig {
                    delta: require(flags.delta, "--delta")?,
                    theta: require(flags.theta, "--theta")?,
                    kappa: 1.0,
                    coupling: Coupling::SigmaZ,
                    a_grid: a_grid
                        .clone()
                        .ok_or_else(|| CliError::Config("--a-grid required".into()))?,
                },
            };
            if let Some(g) = a_grid {
                cfg.a_grid = g.clone();
            }
            merge_decoherence(&mut cfg, flags);
            run_decoherence_scan(&cfg, workers, cli.format)?
        }
        Command::Hysteresis { mode, flags } => {
            let mut cfg: HysteresisConfig = match &cli.config {
                Some(path) => config::load(path)?,
                None => HysteresisConfig {
                    a: require(flags.a, "--a")?,
                    delta: require(flags.delta, "--delta")?,
                    theta: require(flags.theta, "--theta")?,
                    kappa: 1.0,
                    coupling: Coupling::SigmaZ,
                    mode: mode.ok_or_else(|| CliError::Config("--mode required".into()))?,
                    n_periods: 8,
                    samples_per_period: 256,
                    initial: InitialState::Minus,
                },
            };
            if let Some(m) = mode {
                cfg.mode = *m;
            }
            merge_hysteresis(&mut cfg, flags);
            run_hysteresis(&cfg, cli.format)?
        }
        Command::Ladder { preset, gamma12, gamma21, omega, flags } => {
            let mut cfg: LadderConfigFile = match &cli.config {
                Some(path) => config::load(path)?,
                None => LadderConfigFile {
                    preset: None,
                    a: None,
                    delta: None,
                    gamma12_per_s: None,
                    gamma21_per_s: None,
                    omega_rad_per_s: None,
                    n_periods: None,
                    samples_per_period: None,
                    initial_populations: None,
                },
            };
            if preset.is_some() {
                cfg.preset = preset.clone();
            }
            if gamma12.is_some() {
                cfg.gamma12_per_s = *gamma12;
            }
            if gamma21.is_some() {
                cfg.gamma21_per_s = *gamma21;
            }
            if omega.is_some() {
                cfg.omega_rad_per_s = *omega;
            }
            if flags.a.is_some() {
                cfg.a = flags.a;
            }
            if flags.delta.is_some() {
                cfg.delta = flags.delta;
            }
            if flags.n_periods.is_some() {
                cfg.n_periods = flags.n_periods;
            }
            if flags.samples_per_period.is_some() {
                cfg.samples_per_period = flags.samples_per_period;
            }
            run_ladder(&cfg, cli.format)?
        }
    };

    std::fs::write(&out_path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out_path.display())))?;
    Ok(())
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Config(format!("{flag} is required without --config")))
}

fn merge_free(cfg: &mut FreeEvolveConfig, f: &ParamFlags) {
    if f.a.is_some() {
        cfg.a = f.a;
    }
    if f.delta.is_some() {
        cfg.delta = f.delta;
    }
    if let Some(v) = f.n_periods {
        cfg.n_periods = v;
    }
    if let Some(v) = f.samples_per_period {
        cfg.samples_per_period = v;
    }
    if let Some(v) = f.initial {
        cfg.initial = v;
    }
}

fn merge_evolve(cfg: &mut EvolveConfig, f: &ParamFlags) {
    if let Some(v) = f.a {
        cfg.a = v;
    }
    if let Some(v) = f.delta {
        cfg.delta = v;
    }
    if let Some(v) = f.theta {
        cfg.theta = v;
    }
    if let Some(v) = f.kappa {
        cfg.kappa = v;
    }
    if let Some(v) = f.coupling {
        cfg.coupling = v;
    }
    if let Some(v) = f.initial {
        cfg.initial = v;
    }
    if let Some(v) = f.n_periods {
        cfg.n_periods = v;
    }
    if let Some(v) = f.samples_per_period {
        cfg.samples_per_period = v;
    }
}

fn merge_qs(cfg: &mut QsScanConfig, f: &ParamFlags) {
    if let Some(v) = f.delta {
        cfg.delta = v;
    }
    if let Some(v) = f.theta {
        cfg.theta = v;
    }
    if let Some(v) = f.kappa {
        cfg.kappa = v;
    }
    if let Some(v) = f.coupling {
        cfg.coupling = v;
    }
}

fn merge_decoherence(cfg: &mut DecoherenceScanConfig, f: &ParamFlags) {
    if let Some(v) = f.delta {
        cfg.delta = v;
    }
    if let Some(v) = f.theta {
        cfg.theta = v;
    }
    if let Some(v) = f.kappa {
        cfg.kappa = v;
    }
    if let Some(v) = f.coupling {
        cfg.coupling = v;
    }
}

fn merge_hysteresis(cfg: &mut HysteresisConfig, f: &ParamFlags) {
    if let Some(v) = f.a {
        cfg.a = v;
    }
    if let Some(v) = f.delta {
        cfg.delta = v;
    }
    if let Some(v) = f.theta {
        cfg.theta = v;
    }
    if let Some(v) = f.kappa {
        cfg.kappa = v;
    }
    if let Some(v) = f.coupling {
        cfg.coupling = v;
    }
    if let Some(v) = f.initial {
        cfg.initial = v;
    }
    if let Some(v) = f.n_periods {
        cfg.n_periods = v;
    }
    if let Some(v) = f.samples_per_period {
        cfg.samples_per_period = v;
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Numeric(format!("cannot build worker pool: {e}")))
}

fn opts() -> SolveOptions<f64> {
    SolveOptions::default()
}

fn initial_density(kind: InitialState) -> DensityMatrix2<f64> {
    match kind {
        InitialState::Plus => {
            DensityMatrix2::from_pure(&StateVector2::plus(), Basis::SigmaZ).unwrap()
        }
        InitialState::Minus => {
            DensityMatrix2::from_pure(&StateVector2::minus(), Basis::SigmaZ).unwrap()
        }
        InitialState::Mixed => DensityMatrix2::maximally_mixed(Basis::SigmaZ),
    }
}

fn run_quasienergy_map(
    cfg: &QuasienergyMapConfig,
    workers: usize,
    format: Format,
) -> Result<Vec<u8>, CliError> {
    use rayon::prelude::*;
    let a_values = cfg.a_grid.values();
    let d_values = cfg.delta_grid.values();
    let pairs: Vec<(f64, f64)> = a_values
        .iter()
        .flat_map(|&a| d_values.iter().map(move |&d| (a, d)))
        .collect();

    let pool = thread_pool(workers)?;
    #[allow(clippy::type_complexity)]
    let points: Vec<Result<(f64, f64, f64, bool, Option<f64>), CliError>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(a, d)| {
                // Single-point map call keeps the output bit-identical to a
                // direct library invocation.
                let pt = quasienergy_map(&[a], &[d], &opts())?
                    .pop()
                    .expect("one grid point");
                let params = DriveParams::closed(a, d)?;
                let lzs = if a > 0.0 {
                    Some(drive::lzs_parameter(&params)?)
                } else {
                    None
                };
                Ok((pt.a, pt.delta, pt.gap, pt.degenerate, lzs))
            })
            .collect()
    });

    let mut table = Table::new(vec!["A", "Delta", "eps_gap", "degenerate", "p_lzs"]);
    for point in points {
        let (a, d, gap, degenerate, lzs) = point?;
        table.push(vec![
            Some(a),
            Some(d),
            Some(gap),
            Some(if degenerate { 1.0 } else { 0.0 }),
            lzs,
        ]);
    }
    table.render("quasienergy-map", cfg, format)
}

fn run_free_evolve(cfg: &FreeEvolveConfig, format: Format) -> Result<Vec<u8>, CliError> {
    let (a, delta) = cfg.resolve()?;
    let params = DriveParams::closed(a, delta)?;
    let state = match cfg.initial {
        InitialState::Plus => StateVector2::plus(),
        InitialState::Minus => StateVector2::minus(),
        InitialState::Mixed => {
            return Err(CliError::Config(
                "free-evolve needs a pure initial state (plus|minus)".into(),
            ))
        }
    };
    let two_pi = 2.0 * std::f64::consts::PI;
    let grid: Vec<f64> = (0..=cfg.n_periods * cfg.samples_per_period)
        .map(|k| two_pi * k as f64 / cfg.samples_per_period as f64)
        .collect();
    let us = propagate(&params, &grid, &opts())?;
    let sz = Operator2::sigma_z();

    let mut table = Table::new(vec!["tau", "sigma_z"]);
    for (u, &tau) in us.iter().zip(grid.iter()) {
        let psi = u.apply(&state);
        table.push(vec![Some(tau), Some(sz.mat_elem(&psi, &psi).re)]);
    }
    // Echo the resolved parameters so the metadata re-runs identically even
    // when a preset was used.
    let mut echo = cfg.clone();
    echo.a = Some(a);
    echo.delta = Some(delta);
    table.render("free-evolve", &echo, format)
}

fn run_evolve(cfg: &EvolveConfig, format: Format) -> Result<Vec<u8>, CliError> {
    let params = DriveParams::new(cfg.a, cfg.delta, cfg.theta, cfg.kappa)?;
    let bath = BathSpec::new(cfg.theta, cfg.kappa)?;
    let sol = floquet_solve(&params, &opts())?;
    let table_s = fourier_components(
        &sol,
        &cfg.coupling.operator(),
        cfg.coupling,
        &FourierOptions::default(),
    )?;
    let rates = rate_set(&table_s, &sol, &bath)?;
    let initial = ReducedState::from_density_matrix(&initial_density(cfg.initial), &sol)?;

    let two_pi = 2.0 * std::f64::consts::PI;
    let grid: Vec<f64> = (0..=cfg.n_periods * cfg.samples_per_period)
        .map(|k| two_pi * k as f64 / cfg.samples_per_period as f64)
        .collect();
    let states = evolve_reduced(&initial, &rates, &grid)?;
    let sigma = sigma_z_expectation(&states, &sol, &grid)?;

    let mut table = Table::new(vec!["tau", "sigma_z", "p11", "coherence_abs"]);
    for ((state, &tau), sz) in states.iter().zip(grid.iter()).zip(sigma) {
        table.push(vec![
            Some(tau),
            Some(sz),
            Some(state.p11),
            Some(state.c12.norm()),
        ]);
    }
    table.render("evolve", cfg, format)
}

fn run_qs_scan(cfg: &QsScanConfig, workers: usize, format: Format) -> Result<Vec<u8>, CliError> {
    use rayon::prelude::*;
    let bath = BathSpec::new(cfg.theta, cfg.kappa)?;
    let a_values = cfg.a_grid.values();
    let pool = thread_pool(workers)?;
    let points: Vec<Result<floquet_spin::master::ScanPoint<f64>, CliError>> = pool.install(|| {
        a_values
            .par_iter()
            .map(|&a| {
                Ok(floquet_spin::master::quasistationary_scan(
                    cfg.delta,
                    &[a],
                    &bath,
                    cfg.coupling,
                    cfg.tau_eval,
                    &opts(),
                )?
                .pop()
                .expect("one scan point"))
            })
            .collect()
    });

    let mut table = Table::new(vec!["A", "sigma_z_qs", "eps_gap", "degenerate"]);
    for (i, point) in points.into_iter().enumerate() {
        let p = point?;
        if p.sigma_z.is_none() {
            table.gaps.push(i);
        }
        table.push(vec![
            Some(p.a),
            p.sigma_z,
            Some(p.gap),
            Some(if p.degenerate { 1.0 } else { 0.0 }),
        ]);
    }
    table.render("qs-scan", cfg, format)
}

fn run_decoherence_scan(
    cfg: &DecoherenceScanConfig,
    workers: usize,
    format: Format,
) -> Result<Vec<u8>, CliError> {
    use rayon::prelude::*;
    let bath = BathSpec::new(cfg.theta, cfg.kappa)?;
    let a_values = cfg.a_grid.values();
    let pool = thread_pool(workers)?;
    #[allow(clippy::type_complexity)]
    let points: Vec<Result<(f64, Option<f64>, f64, bool), CliError>> = pool.install(|| {
        a_values
            .par_iter()
            .map(|&a| {
                let params = DriveParams::new(a, cfg.delta, cfg.theta, cfg.kappa)?;
                let sol = floquet_solve(&params, &opts())?;
                if sol.degenerate {
                    return Ok((a, None, sol.gap(), true));
                }
                let t = fourier_components(
                    &sol,
                    &cfg.coupling.operator(),
                    cfg.coupling,
                    &FourierOptions::default(),
                )?;
                let rates = rate_set(&t, &sol, &bath)?;
                Ok((a, Some(decoherence_rate(&rates)), sol.gap(), false))
            })
            .collect()
    });

    let mut table = Table::new(vec!["A", "tau_d_inv", "eps_gap", "degenerate"]);
    for (i, point) in points.into_iter().enumerate() {
        let (a, rate, gap, degenerate) = point?;
        if rate.is_none() {
            table.gaps.push(i);
        }
        table.push(vec![
            Some(a),
            rate,
            Some(gap),
            Some(if degenerate { 1.0 } else { 0.0 }),
        ]);
    }
    table.render("decoherence-scan", cfg, format)
}

fn curve_table(curve: &HysteresisCurve<f64>) -> Table {
    let mut table = Table::new(vec!["tau", "field", "sigma_z"]);
    for k in 0..curve.taus.len() {
        table.push(vec![
            Some(curve.taus[k]),
            Some(curve.fields[k]),
            Some(curve.sigma_z[k]),
        ]);
    }
    table
}

fn run_hysteresis(cfg: &HysteresisConfig, format: Format) -> Result<Vec<u8>, CliError> {
    let params = DriveParams::new(cfg.a, cfg.delta, cfg.theta, cfg.kappa)?;
    let bath = BathSpec::new(cfg.theta, cfg.kappa)?;
    let curve = match cfg.mode {
        HysteresisMode::Quasistationary => quasistationary_curve(
            &params,
            &bath,
            cfg.coupling,
            cfg.samples_per_period,
            &opts(),
        )?,
        HysteresisMode::Transient => transient_curve(
            &params,
            &bath,
            cfg.coupling,
            &initial_density(cfg.initial),
            cfg.n_periods,
            cfg.samples_per_period,
            &opts(),
        )?,
    };
    curve_table(&curve).render("hysteresis", cfg, format)
}

fn run_ladder(cfg: &LadderConfigFile, format: Format) -> Result<Vec<u8>, CliError> {
    let resolved = cfg.resolve()?;
    let curve = dephasing_ladder(&resolved)?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }

    let mut table = Table::new(vec![
        "tau",
        "field",
        "field_tesla",
        "sigma_z",
        "pop_diff",
        "pointer_m",
    ]);
    let calib = resolved.field;
    for k in 0..curve.taus.len() {
        let tesla = calib.map(|c| c.center_tesla + c.amplitude_tesla * curve.taus[k].cos());
        table.push(vec![
            Some(curve.taus[k]),
            Some(curve.fields[k]),
            tesla,
            Some(curve.sigma_z[k]),
            curve.pop_diff.as_ref().map(|v| v[k]),
            curve.pointer_m.as_ref().map(|v| v[k]),
        ]);
    }
    // Echo the fully resolved configuration.
    let echo = LadderConfigFile {
        preset: cfg.preset.clone(),
        a: Some(resolved.a),
        delta: Some(resolved.delta),
        gamma12_per_s: Some(resolved.gamma12_per_s),
        gamma21_per_s: resolved.gamma21_per_s,
        omega_rad_per_s: Some(resolved.omega_rad_per_s),
        n_periods: Some(resolved.n_periods),
        samples_per_period: Some(resolved.samples_per_period),
        initial_populations: Some(resolved.initial_populations),
    };
    table.render("ladder", &echo, format)
}
