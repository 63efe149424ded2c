use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CliError, RunSpec};
use crate::metrics::{aggregate_buckets, export, DistanceBucket, MetricsReport};
use crate::sim::{Pipeline, ScenarioConfig, SimWorld};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub pipeline: String,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedVictims {
    pub seed: u64,
    pub victims: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub pipeline: String,
    pub victims: Vec<SeedVictims>,
    pub median_victims: Option<f64>,
    /// Bucket counts summed over all seeds.
    pub trusted_fraction_by_distance: Vec<DistanceBucket>,
    pub mean_latency_ns: Option<f64>,
}

/// Aggregate of a sweep, written next to the per-run files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub pipelines: Vec<PipelineSummary>,
    pub failures: Vec<RunFailure>,
}

#[derive(Debug, Clone)]
pub struct ExecOutcome {
    pub dir: PathBuf,
    pub summary: SweepSummary,
    pub files: Vec<PathBuf>,
}

impl ExecOutcome {
    pub fn summary_lines(&self) -> Vec<String> {
        self.summary
            .pipelines
            .iter()
            .map(|p| {
                let per_seed: Vec<String> = p.victims.iter().map(|v| v.victims.to_string()).collect();
                let median = p
                    .median_victims
                    .map_or_else(|| "-".to_string(), |m| m.to_string());
                format!(
                    "{}: victims per seed [{}], median {}",
                    p.pipeline,
                    per_seed.join(", "),
                    median
                )
            })
            .collect()
    }
}

pub fn median(values: &[u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    })
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn stem(pipeline: Pipeline, seed: u64) -> String {
    format!("{}-seed{seed}", pipeline.name())
}

/// Runs one (seed, pipeline) pair and writes its log and metrics.
fn run_one(
    spec: &RunSpec,
    dir: &Path,
    config: ScenarioConfig,
    pipeline: Pipeline,
) -> Result<(MetricsReport, Vec<PathBuf>), String> {
    let seed = config.seed;
    let out = SimWorld::build(config)
        .map_err(|e| e.to_string())?
        .with_pipeline(pipeline)
        .with_timing(spec.timing)
        .run()
        .map_err(|e| e.to_string())?;
    let log_path = dir.join(format!("{}.log", stem(pipeline, seed)));
    fs::write(&log_path, out.log.render())
        .map_err(|e| format!("cannot write {}: {e}", log_path.display()))?;
    let metrics_path = dir.join(format!("{}.{}", stem(pipeline, seed), spec.format.extension()));
    export(&out.report, spec.format, &metrics_path).map_err(|e| e.to_string())?;
    Ok((out.report, vec![log_path, metrics_path]))
}

/// Executes every (seed, pipeline) pair of `spec` on a pool of
/// `spec.workers` threads. Sweeps of more than one run also get a
/// `summary.json`.
///
/// Files go to `<out>/<config-hash>/<pipeline>-seed<N>.{log,json|csv}`. A
/// failed run leaves a `.failed` marker with the error next to whatever it
/// managed to write; the other runs are unaffected.
pub fn execute(spec: &RunSpec) -> Result<ExecOutcome, CliError> {
    let dir = spec.out_dir.join(spec.config.config_hash());
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;

    let jobs: Vec<(Pipeline, u64)> = spec
        .pipelines
        .iter()
        .flat_map(|&p| spec.seeds.iter().map(move |&s| (p, s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| CliError::Flag(format!("cannot start {} workers: {e}", spec.workers)))?;
    let results: Vec<_> = pool.install(|| {
        jobs.par_iter()
            .map(|&(pipeline, seed)| {
                let config = ScenarioConfig {
                    seed,
                    ..spec.config.clone()
                };
                let res = run_one(spec, &dir, config, pipeline);
                let marker = dir.join(format!("{}.failed", stem(pipeline, seed)));
                match &res {
                    Ok(_) => {
                        let _ = fs::remove_file(&marker);
                    }
                    Err(e) => {
                        let _ = fs::write(&marker, format!("{e}\n"));
                    }
                }
                (pipeline, seed, res)
            })
            .collect()
    });

    let mut files = Vec::new();
    let mut failures = Vec::new();
    let mut pipelines = Vec::new();
    for &p in &spec.pipelines {
        let mut reports = Vec::new();
        let mut victims = Vec::new();
        for (pipeline, seed, res) in &results {
            if *pipeline != p {
                continue;
            }
            match res {
                Ok((report, written)) => {
                    victims.push(SeedVictims {
                        seed: *seed,
                        victims: report.victims,
                    });
                    files.extend(written.iter().cloned());
                    reports.push(report);
                }
                Err(e) => failures.push(RunFailure {
                    pipeline: p.name().to_string(),
                    seed: *seed,
                    error: e.clone(),
                }),
            }
        }
        let latencies: Vec<f64> = reports
            .iter()
            .filter_map(|r| r.latency.map(|l| l.mean_ns))
            .collect();
        pipelines.push(PipelineSummary {
            pipeline: p.name().to_string(),
            median_victims: median(&victims.iter().map(|v| v.victims).collect::<Vec<_>>()),
            victims,
            trusted_fraction_by_distance: aggregate_buckets(reports.iter().copied()),
            mean_latency_ns: (!latencies.is_empty())
                .then(|| latencies.iter().sum::<f64>() / latencies.len() as f64),
        });
    }

    let summary = SweepSummary {
        config_hash: spec.config.config_hash(),
        seeds: spec.seeds.clone(),
        pipelines,
        failures,
    };
    if jobs.len() > 1 {
        let summary_path = dir.join(SUMMARY_FILE);
        let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        text.push('\n');
        fs::write(&summary_path, text).map_err(|e| io_err(&summary_path, e))?;
        files.push(summary_path);
    }

    if !summary.failures.is_empty() {
        return Err(CliError::RunFailed {
            total: jobs.len(),
            failures: summary.failures,
        });
    }
    Ok(ExecOutcome {
        dir,
        summary,
        files,
    })
}
