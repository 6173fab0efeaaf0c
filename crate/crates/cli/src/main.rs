//! Command-line frontend: profiles, beta coefficients, correlator tables,
//! sampling-theorem verification and error scans, exported as reproducible
//! CSV/JSON datasets with gnuplot companions.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use config::load_config;
use output::{DatasetWriter, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cmera",
    version,
    about = "Gaussian continuous entanglement renormalization datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to a JSON run config; defaults are the figure parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Output format.
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Absolute tolerance applied to every quadrature and series in the
    /// run; tightening it never increases reported error estimates.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Entangling profile on the line and its wrap on the circle.
    Profile,
    /// β̃(s,k) curves plus the sampled circle points β̃_c(s,n).
    Beta,
    /// Correlator tables with error estimates and relative-error columns.
    Correlator,
    /// Sampling-theorem verification report for the test-function corpus.
    ImagesCheck,
    /// Relative-error scans and slope fits on line and circle.
    ErrorScan,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: OutputFormat = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("cmera: config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(t) = cli.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            eprintln!("cmera: config error: tolerance must be positive and finite");
            return ExitCode::from(2);
        }
    }

    let result = run(&cli, format);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Config(msg)) => {
            eprintln!("cmera: config error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Core(err)) => {
            eprintln!("cmera: {err}");
            ExitCode::from(commands::exit_code(&err) as u8)
        }
    }
}

enum RunError {
    Config(String),
    Core(cmera_core::Error),
}

impl From<cmera_core::Error> for RunError {
    fn from(e: cmera_core::Error) -> Self {
        RunError::Core(e)
    }
}

fn run(cli: &Cli, format: OutputFormat) -> Result<(), RunError> {
    let tol = cli.tolerance.unwrap_or(1e-10);
    match cli.command {
        Command::Profile => {
            let cfg: config::ProfileConfig =
                load_config(cli.config.as_deref()).map_err(RunError::Config)?;
            let writer = DatasetWriter::new(&cli.out, format, &cfg).map_err(RunError::Config)?;
            commands::profile::run(&cfg, &writer, cli.tolerance.unwrap_or(cfg.tolerance))?;
        }
        Command::Beta => {
            let cfg: config::BetaConfig =
                load_config(cli.config.as_deref()).map_err(RunError::Config)?;
            let writer = DatasetWriter::new(&cli.out, format, &cfg).map_err(RunError::Config)?;
            commands::beta::run(&cfg, &writer, cli.tolerance.unwrap_or(cfg.tolerance))?;
        }
        Command::Correlator => {
            let cfg: config::CorrelatorConfig =
                load_config(cli.config.as_deref()).map_err(RunError::Config)?;
            let writer = DatasetWriter::new(&cli.out, format, &cfg).map_err(RunError::Config)?;
            commands::correlator::run(&cfg, &writer, cli.tolerance.unwrap_or(cfg.tolerance))?;
        }
        Command::ImagesCheck => {
            let cfg: config::ImagesCheckConfig =
                load_config(cli.config.as_deref()).map_err(RunError::Config)?;
            let writer = DatasetWriter::new(&cli.out, format, &cfg).map_err(RunError::Config)?;
            commands::images_check::run(&cfg, &writer, tol)?;
        }
        Command::ErrorScan => {
            let cfg: config::ErrorScanConfig =
                load_config(cli.config.as_deref()).map_err(RunError::Config)?;
            let writer = DatasetWriter::new(&cli.out, format, &cfg).map_err(RunError::Config)?;
            commands::error_scan::run(&cfg, &writer, cli.tolerance.unwrap_or(cfg.tolerance))?;
        }
    }
    Ok(())
}
