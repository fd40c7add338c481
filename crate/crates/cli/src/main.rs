use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use mildflow::experiment::{run, ConfigOverrides, ExperimentConfig, RunStatus, Subcommand};
use mildflow::Error;
use serde::de::DeserializeOwned;
use serde_json::json;

const EXIT_RUNTIME: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_INVALID_CONFIG: u8 = 4;

#[derive(Parser)]
#[command(name = "mildflow", version, about = "Mild solutions of periodic Navier-Stokes and Burgers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Picard iteration for the mild formulation, with optional cross-check.
    Solve(Flags),
    /// Monte Carlo estimate of the bilinear constant and derived thresholds.
    Calibrate(Flags),
    /// Analyticity radius against its lower bounds.
    Radius(Flags),
    /// Lattice check of the weight inequalities.
    Verify(Flags),
    /// Continuous dependence on the initial datum.
    Depend(Flags),
}

#[derive(Args)]
struct Flags {
    /// TOML config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// ns3d or burgers1d.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    /// Horizon.
    #[arg(long = "T", alias = "horizon")]
    horizon: Option<f64>,
    /// Number of sample times after t = 0.
    #[arg(long)]
    samples: Option<usize>,
    /// uniform or geometric.
    #[arg(long)]
    time_grid: Option<String>,
    #[arg(long)]
    t_first: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    substeps: Option<usize>,
    /// pseudospectral or direct.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// random, beltrami, single_mode, sine or zero.
    #[arg(long)]
    data: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<f64>,
    /// Random data have coefficient amplitudes ~ |k|^slope.
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<f64>,
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    cross_check: bool,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    c_bilinear: Option<f64>,
    #[arg(long)]
    epsilon_fraction: Option<f64>,
    #[arg(long)]
    perturbation: Option<f64>,
    /// Comma-separated extra alpha values for radius.
    #[arg(long, value_delimiter = ',')]
    alpha_sweep: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_enum<T: DeserializeOwned>(key: &str, value: &Option<String>) -> mildflow::Result<Option<T>> {
    value
        .as_ref()
        .map(|s| {
            serde_json::from_value(json!(s)).map_err(|_| Error::Config(format!("invalid value '{s}' for --{key}")))
        })
        .transpose()
}

impl Flags {
    fn overrides(&self) -> mildflow::Result<ConfigOverrides> {
        Ok(ConfigOverrides {
            preset: self.preset.clone(),
            problem: parse_enum("problem", &self.problem)?,
            n: self.n,
            mu: self.mu,
            horizon: self.horizon,
            samples: self.samples,
            time_grid: parse_enum("time-grid", &self.time_grid)?,
            t_first: self.t_first,
            alpha: self.alpha,
            tol: self.tol,
            max_iters: self.max_iters,
            substeps: self.substeps,
            method: parse_enum("method", &self.method)?,
            seed: self.seed,
            data: parse_enum("data", &self.data)?,
            amplitude: self.amplitude,
            slope: self.slope,
            linear: self.linear.then_some(true),
            cross_check: self.cross_check.then_some(true),
            trials: self.trials,
            c_bilinear: self.c_bilinear,
            epsilon_fraction: self.epsilon_fraction,
            perturbation: self.perturbation,
            alpha_sweep: self.alpha_sweep.clone(),
        })
    }

    fn resolve(&self) -> mildflow::Result<ExperimentConfig> {
        let file = self.config.as_deref().map(ConfigOverrides::from_file).transpose()?;
        ExperimentConfig::resolve(file.as_ref(), &self.overrides()?)
    }
}

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Config(_) => ("invalid_config", EXIT_INVALID_CONFIG),
        Error::InvalidParameter(_) => ("invalid_parameter", EXIT_INVALID_CONFIG),
        Error::InvalidGrid(_) => ("invalid_grid", EXIT_INVALID_CONFIG),
        Error::InvalidTimeGrid(_) => ("invalid_time_grid", EXIT_INVALID_CONFIG),
        Error::SmallnessViolated(_) => ("smallness_violated", EXIT_INVALID_CONFIG),
        Error::BlowUp { .. } => ("blow_up", EXIT_RUNTIME),
        Error::Io(_) => ("io", EXIT_RUNTIME),
        _ => ("runtime", EXIT_RUNTIME),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (cmd, flags) = match &cli.command {
        Command::Solve(f) => (Subcommand::Solve, f),
        Command::Calibrate(f) => (Subcommand::Calibrate, f),
        Command::Radius(f) => (Subcommand::Radius, f),
        Command::Verify(f) => (Subcommand::Verify, f),
        Command::Depend(f) => (Subcommand::Depend, f),
    };
    let result = flags.resolve().and_then(|cfg| {
        std::fs::create_dir_all(&flags.out)?;
        log::info!("config_hash={} out={}", cfg.hash(), flags.out.display());
        run(cmd, &cfg, &flags.out)
    });
    match result {
        Ok(outcome) => {
            let report = json!({
                "status": outcome.status,
                "artifacts": outcome.artifacts,
                "summary": outcome.summary,
            });
            // a closed stdout (e.g. piped into head) is not a failure of the run
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            match outcome.status {
                RunStatus::Ok => ExitCode::SUCCESS,
                RunStatus::NotConverged => {
                    eprintln!("{}", json!({"error": "not_converged", "exit_code": EXIT_NOT_CONVERGED}));
                    ExitCode::from(EXIT_NOT_CONVERGED)
                }
            }
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            eprintln!("{}", json!({"error": kind, "message": e.to_string(), "exit_code": code}));
            ExitCode::from(code)
        }
    }
}
