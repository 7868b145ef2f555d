//! Command-line front end: `spectrum`, `coherence`, `filter` and `fit`.
//!
//! Exit codes: 0 success, 1 config or input error, 2 a fit or solve did not
//! converge, 3 a sweep finished with some failed points.

pub mod commands;
pub mod config;
pub mod io;
pub mod manifest;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use commands::{FitKind, Outcome, Status};
use config::{Format, RunConfig};

pub const WORKERS_ENV: &str = "CSFQ_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "csfq", version, about = "Capacitively-shunted flux qubit modelling")]
pub struct Cli {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overrides `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (default: $CSFQ_WORKERS, then all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Table format, overrides `output.format`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and numeric transition frequencies versus flux.
    Spectrum,
    /// T1(T), flux dephasing versus flux, and the coherence budget.
    Coherence,
    /// CPMG filter functions on a log-spaced frequency grid.
    Filter,
    /// Parameter extraction from a measured data file.
    Fit {
        #[command(subcommand)]
        kind: FitCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum FitCommand {
    /// `flux_phi0,freq_GHz` to E_J, C_S and alpha.
    Spectrum { data: PathBuf },
    /// `temp_K,t1_s` to x_qp, or `time_s,signal` to an exponential T1.
    T1 { data: PathBuf },
    /// `time_s,signal` to Gamma_phi for Gaussian and exponential envelopes.
    Envelope { data: PathBuf },
    /// `flux_phi0,gamma_e_per_s` to the 1/f amplitude A_phi.
    Fluxnoise {
        data: PathBuf,
        /// Half-width around f = 0.5 excluded from the fit.
        #[arg(long)]
        exclusion_window: Option<f64>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } => EXIT_NOT_CONVERGED,
        Error::AtFlux { source, .. } => exit_code(source),
        _ => EXIT_INPUT,
    }
}

fn worker_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        if n == 0 {
            return Err(Error::Config("--workers must be at least 1".into()));
        }
        return Ok(n);
    }
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        };
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(o) => match o.status {
            Status::Ok => EXIT_OK,
            Status::NotConverged => {
                eprintln!("warning: fit did not converge");
                EXIT_NOT_CONVERGED
            }
            Status::PartialFailure => {
                eprintln!("warning: some sweep points failed, see status column");
                EXIT_PARTIAL
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, writing outputs and `manifest.json`.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let config_text = cli.config.as_deref().map(read_text).transpose()?;
    let mut cfg = match &config_text {
        Some(t) => RunConfig::parse(t)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    cfg.validate()?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    let format = cfg.output.format;
    let workers = worker_count(cli.workers)?;

    let (name, data_text, outcome) = match &cli.command {
        Command::Spectrum | Command::Coherence => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            fs::create_dir_all(&dir)?;
            if matches!(cli.command, Command::Spectrum) {
                ("spectrum", None, commands::spectrum(&cfg, &dir, format, &pool)?)
            } else {
                ("coherence", None, commands::coherence(&cfg, &dir, format, &pool)?)
            }
        }
        Command::Filter => {
            fs::create_dir_all(&dir)?;
            ("filter", None, commands::filter(&cfg, &dir, format)?)
        }
        Command::Fit { kind } => {
            let (kind, path) = match kind {
                FitCommand::Spectrum { data } => (FitKind::Spectrum, data),
                FitCommand::T1 { data } => (FitKind::T1, data),
                FitCommand::Envelope { data } => (FitKind::Envelope, data),
                FitCommand::Fluxnoise { data, exclusion_window } => (
                    FitKind::FluxNoise {
                        exclusion_window: *exclusion_window,
                    },
                    data,
                ),
            };
            let text = read_text(path)?;
            fs::create_dir_all(&dir)?;
            let outcome = commands::fit(&cfg, kind, &text, &dir)?;
            let name = match kind {
                FitKind::Spectrum => "fit spectrum",
                FitKind::T1 => "fit t1",
                FitKind::Envelope => "fit envelope",
                FitKind::FluxNoise { .. } => "fit fluxnoise",
            };
            (name, Some(text), outcome)
        }
    };
    manifest::write_manifest(
        &dir,
        name,
        &cfg,
        config_text.as_deref().map(str::as_bytes),
        data_text.as_deref().map(str::as_bytes),
        &outcome.files,
    )?;
    Ok(outcome)
}
