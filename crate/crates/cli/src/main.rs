//! `udw`: command-line driver for the detector simulations.
//!
//! Exit status: 0 success, 1 a `validate` check failed, 2 usage error,
//! 3 domain error (parameters outside the physical domain, including a
//! cavity that would cross the horizon), 4 numerical failure (a series,
//! quadrature or root scan did not converge), 5 I/O error.

mod commands;
mod output;
mod plot;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use settings::{RunConfig, Settings};

#[derive(Parser)]
#[command(
    name = "udw",
    version,
    about = "Click probabilities of a detector in a static or accelerated cavity",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cavity eigenfrequencies, normalizations and sampled mode functions (CSV).
    Modes(Settings),
    /// Click probability breakdown at one acceleration (CSV).
    Probability(Settings),
    /// Probability versus acceleration for both scenarios (CSV plus plot script).
    Sweep(Settings),
    /// Classify a measured probability by the scenario that can produce it.
    Distinguish(Settings),
    /// Built-in consistency checks with a PASS/FAIL summary.
    Validate(Settings),
    #[command(hide = true)]
    ValidateSpecfun(Settings),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] udw_core::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_numerical() => 4,
            CliError::Core(_) => 3,
            CliError::Io(..) => 5,
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (name, settings) = match cli.command {
        Command::Modes(s) => ("modes", s),
        Command::Probability(s) => ("probability", s),
        Command::Sweep(s) => ("sweep", s),
        Command::Distinguish(s) => ("distinguish", s),
        Command::Validate(s) => ("validate", s),
        Command::ValidateSpecfun(s) => ("validate-specfun", s),
    };
    let cfg = RunConfig::resolve(name, settings.with_file()?)?;
    let out = cfg.out.as_deref();
    let mut ok = true;
    match name {
        "modes" => commands::modes(&cfg)?.emit(out)?,
        "probability" => commands::probability(&cfg)?.emit(out)?,
        "sweep" => {
            let (doc, script) = commands::sweep(&cfg)?;
            doc.emit(out)?;
            if let (Some(script), Some(path)) = (script, out) {
                let target = plot_script_path(path);
                std::fs::write(&target, script)
                    .map_err(|e| CliError::Io(target.display().to_string(), e))?;
            }
        }
        "distinguish" => commands::distinguish(&cfg)?.emit(out)?,
        "validate" => {
            let (doc, all) = commands::validate(&cfg)?;
            doc.emit(out)?;
            ok = all;
        }
        _ => commands::validate_specfun(&cfg)?.emit(out)?,
    }
    Ok(ok)
}

/// `panel_a.csv` → `panel_a.plot.py`
fn plot_script_path(csv: &std::path::Path) -> PathBuf {
    csv.with_extension("plot.py")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("udw: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
