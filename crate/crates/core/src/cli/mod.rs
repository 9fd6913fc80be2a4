//! The `seqest` command-line front end.
//!
//! Exit codes: 0 success, 2 input validation, 3 solver failure,
//! 4 conditioning starvation. Key and column definitions for every artifact
//! are in `docs/schema.md`.

mod commands;
mod inputs;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use inputs::{parse_data, parse_design, read_data, read_design, DesignSpec, Sided};
pub use output::{format_f64, to_json_string, RunManifest};

use crate::simulation::Conditioning;

/// Environment variable giving the default worker thread count.
pub const THREADS_ENV: &str = "SEQEST_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use crate::Error as E;
        match self {
            CliError::Core(E::NoSignChange { .. } | E::NoConvergence { .. }) => 3,
            CliError::Core(E::Starvation { .. }) => 4,
            CliError::Core(_) | CliError::Validation(_) | CliError::Io { .. } => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "seqest", version, about = "Estimation after a two-stage group sequential trial")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the treatment difference from observed binary trial data.
    Estimate(EstimateArgs),
    /// Simulate trials from the canonical joint distribution.
    Simulate(SimulateArgs),
    /// Analytic MLE bias and stopping probability over a grid of effects.
    Sweep(SweepArgs),
    /// O'Brien-Fleming boundaries for a two-look design.
    Boundaries(BoundariesArgs),
    /// Reproduce the MUSEC case-study tables.
    CaseStudy(CaseStudyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// Design JSON: {"e1", "e2"} or {"alpha", "sided", "interim_fraction"}.
    #[arg(long)]
    pub design: PathBuf,
    /// Cumulative counts per analysis and arm.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Parametric bootstrap replicates for standard errors.
    #[arg(long, requires = "theta_assumed")]
    pub bootstrap_se: Option<u64>,
    /// True difference assumed by the bootstrap.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_assumed: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long)]
    pub i1: f64,
    #[arg(long)]
    pub i2: f64,
    #[arg(long)]
    pub e1: f64,
    #[arg(long)]
    pub e2: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "all", value_parser = parse_conditioning)]
    pub conditioning: Conditioning,
    /// Per-replicate CSV.
    #[arg(long)]
    pub records_out: Option<PathBuf>,
    /// Histogram CSV over the default binning.
    #[arg(long)]
    pub hist_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_conditioning(s: &str) -> Result<Conditioning, String> {
    s.parse()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Total sample sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Outcome standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sd: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub theta_max: f64,
    /// Number of equally spaced grid points, endpoints included.
    #[arg(long, default_value_t = 151)]
    pub theta_steps: usize,
    /// Monte Carlo replicates per grid point for the empirical columns.
    #[arg(long)]
    pub mc_check: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundariesArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "one")]
    pub sided: Sided,
    #[arg(long, default_value_t = 0.5)]
    pub interim_fraction: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Table4,
    Table5,
    Table6,
    Figure2Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CaseStudyArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// Monte Carlo replicates; for table4 these drive the bootstrap SEs (0 skips them).
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // A pool may already exist when called as a library; keep it.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args` (program name first), runs the command and reports errors on
/// stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match configure_threads().and_then(|_| commands::dispatch(&cli.command, &argv)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
