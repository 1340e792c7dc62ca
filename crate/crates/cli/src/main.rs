//! `vpl`: spectra, pulse design, resonance, sweeps and verification.
//!
//! Exit status: 0 success, 1 invalid input or I/O, 2 numerical failure,
//! 3 verification failure.

mod commands;
mod config;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vpl_core::{KernelVariant, SweepAxis, SweepParameter};

use crate::config::{Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<vpl_core::Error> for CliError {
    fn from(e: vpl_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "vpl",
    version,
    about = "Photon pairs from a length-modulated fiber"
)]
struct Cli {
    /// JSON run configuration (a previous JSON output is accepted too).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the table or report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Kernel form: pv or paper.
    #[arg(long, global = true)]
    kernel: Option<KernelVariant>,
    /// Rate amplitude, overriding the intensity-derived value.
    #[arg(long, global = true)]
    nu: Option<f64>,
    /// Same as --format json.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral table x, rate_weak, rate_full, enhancement.
    Spectrum,
    /// Optimal pulse for the configured fiber.
    Design,
    /// Resonant drive for each kernel form.
    Resonance,
    /// Photons per pulse over a grid of parameters.
    Sweep {
        /// PARAM=START:STOP:STEPS with PARAM one of nu, intensity, length,
        /// wavelength. Up to two; replaces the config's axes.
        #[arg(long = "axis", value_parser = parse_axis)]
        axes: Vec<SweepAxis>,
    },
    /// Checks against closed forms and the mode oracle.
    Verify,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    let (param, range) = s
        .split_once('=')
        .ok_or_else(|| format!("expected PARAM=START:STOP:STEPS, got `{s}`"))?;
    let param: SweepParameter = param.parse().map_err(|e| format!("{e}"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err(format!("expected START:STOP:STEPS, got `{range}`"));
    };
    let num = |v: &str| v.parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok(SweepAxis {
        param,
        start: num(start)?,
        stop: num(stop)?,
        steps: steps.parse().map_err(|e| format!("`{steps}`: {e}"))?,
    })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("VPL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("VPL_THREADS must be a count, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("VPL_THREADS: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(k) = cli.kernel {
        config.kernel_variant = k;
    }
    if let Some(nu) = cli.nu {
        config.nu = Some(nu);
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    if cli.json {
        config.format = Format::Json;
    }
    if let Command::Sweep { axes } = &cli.command {
        if !axes.is_empty() {
            config.sweep = axes.clone();
        }
    }
    config.output = cli.output;
    config.validate()?;

    match cli.command {
        Command::Spectrum => commands::spectrum(&config)?,
        Command::Design => commands::design(&config)?,
        Command::Resonance => commands::resonance(&config)?,
        Command::Sweep { .. } => commands::run_sweep(&config)?,
        Command::Verify => {
            if !commands::verify(&config)? {
                eprintln!("verification failed");
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parses() {
        let a = parse_axis("length=10:1000:12").unwrap();
        assert_eq!(a.param, SweepParameter::Length);
        assert_eq!((a.start, a.stop, a.steps), (10.0, 1000.0, 12));
        assert!(parse_axis("nu=1:2").is_err());
        assert!(parse_axis("mass=1:2:3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
