//! Scenario runner: flags, run specs and sweep execution.
//!
//! Flags override scenario-file values, which override the built-in
//! defaults. Exit codes: 0 success, 1 configuration error, 2 run failure.

mod execute;

pub use execute::{execute, ExecOutcome, PipelineSummary, RunFailure, SeedVictims, SweepSummary};

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

use crate::metrics::ExportFormat;
use crate::sim::{Pipeline, ScenarioConfig, ScenarioError};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "IRS_OUT_DIR";
/// Output directory when neither `--out` nor the environment name one.
pub const DEFAULT_OUT_DIR: &str = "irs-out";

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_RUN: u8 = 2;

/// Inclusive seed range written `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedRange {
    pub first: u64,
    pub last: u64,
}

impl SeedRange {
    pub fn seeds(self) -> Vec<u64> {
        (self.first..=self.last).collect()
    }
}

impl FromStr for SeedRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected <first>..<last>, got `{s}`"))?;
        let first: u64 = a.parse().map_err(|_| format!("bad seed `{a}`"))?;
        let last: u64 = b.parse().map_err(|_| format!("bad seed `{b}`"))?;
        if first > last {
            return Err(format!("empty seed range {first}..{last}"));
        }
        Ok(SeedRange { first, last })
    }
}

/// Which pipelines a spec runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PipelineChoice {
    Irs,
    AcceptAll,
    Both,
}

impl PipelineChoice {
    pub fn pipelines(self) -> Vec<Pipeline> {
        match self {
            PipelineChoice::Irs => vec![Pipeline::Irs],
            PipelineChoice::AcceptAll => vec![Pipeline::AcceptAll],
            PipelineChoice::Both => Pipeline::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "irs-sim",
    about = "Run VANET reputation scenarios and write event logs and metrics",
    version
)]
struct Args {
    /// Scenario file (TOML); built-in defaults when omitted.
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    /// Single seed.
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Inclusive seed range, e.g. 0..9.
    #[arg(long, value_name = "A..B")]
    seeds: Option<SeedRange>,
    #[arg(long, value_enum, default_value = "irs")]
    pipeline: PipelineChoice,
    /// Output directory (default: $IRS_OUT_DIR, else ./irs-out).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    vehicles: Option<usize>,
    #[arg(long, value_name = "N")]
    attackers: Option<usize>,
    /// Transmission range in meters.
    #[arg(long, value_name = "M")]
    tx_range: Option<f64>,
    /// Simulated seconds.
    #[arg(long, value_name = "S")]
    duration: Option<f64>,
    /// Parallel runs in a sweep (default: available cores).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Metrics file format.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Measure wall-clock pipeline latency (makes metrics non-reproducible).
    #[arg(long)]
    timing: bool,
}

/// Process environment the runner reads.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub out_dir: Option<PathBuf>,
}

impl Environment {
    pub fn from_process() -> Self {
        Environment {
            out_dir: std::env::var_os(OUT_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        }
    }
}

/// A fully resolved request: configuration with overrides applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub scenario: Option<PathBuf>,
    pub config: ScenarioConfig,
    pub seeds: Vec<u64>,
    pub pipelines: Vec<Pipeline>,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub format: ExportFormat,
    pub timing: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Args(#[from] clap::Error),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("invalid flag: {0}")]
    Flag(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{} of {total} runs failed", failures.len())]
    RunFailed {
        total: usize,
        failures: Vec<RunFailure>,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Args(e)
                if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) =>
            {
                EXIT_OK
            }
            CliError::Args(_) | CliError::Scenario(_) | CliError::Flag(_) => EXIT_CONFIG,
            CliError::Io { .. } | CliError::RunFailed { .. } => EXIT_RUN,
        }
    }
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} seed {}: {}", self.pipeline, self.seed, self.error)
    }
}

/// Parses command-line arguments (including the program name) into a
/// validated [`RunSpec`].
pub fn parse_run_spec<I, T>(args: I, env: &Environment) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(args)?;

    let mut config = match &args.scenario {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(n) = args.vehicles {
        config.vehicle_count = n;
    }
    if let Some(n) = args.attackers {
        config.attacker_count = n;
    }
    if let Some(m) = args.tx_range {
        config.transmission_range = m;
    }
    if let Some(s) = args.duration {
        config.duration = s;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    config.validate()?;

    let seeds = match args.seeds {
        Some(range) => range.seeds(),
        None => vec![config.seed],
    };
    let workers = match args.workers {
        Some(0) => return Err(CliError::Flag("--workers must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let out_dir = args
        .out
        .or_else(|| env.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));

    Ok(RunSpec {
        scenario: args.scenario,
        config,
        seeds,
        pipelines: args.pipeline.pipelines(),
        out_dir,
        workers,
        format: match args.format {
            FormatArg::Json => ExportFormat::Json,
            FormatArg::Csv => ExportFormat::Csv,
        },
        timing: args.timing,
    })
}

/// Parses, executes and reports; returns the process exit code.
pub fn main<I, T>(args: I, env: &Environment) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = parse_run_spec(args, env).and_then(|spec| {
        let outcome = execute(&spec)?;
        for line in outcome.summary_lines() {
            println!("{line}");
        }
        println!("outputs in {}", outcome.dir.display());
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e @ CliError::Args(_)) => {
            if let CliError::Args(inner) = &e {
                let _ = inner.print();
            }
            e.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::RunFailed { failures, .. } = &e {
                for f in failures {
                    eprintln!("  {f}");
                }
            }
            e.exit_code()
        }
    }
}
