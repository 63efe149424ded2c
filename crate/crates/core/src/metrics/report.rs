use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::record::DecisionLog;
use crate::protocol::Disposition;
use crate::reputation::VehicleId;

/// Version of the serialized report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Width of the sender-to-receiver distance buckets, in meters.
pub const BUCKET_WIDTH_M: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunIdentity {
    pub config_hash: String,
    pub seed: u64,
    pub pipeline: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBucket {
    pub low_m: f64,
    pub high_m: f64,
    pub samples: u64,
    /// Accept on a true warning or Reject on a false one.
    pub correct: u64,
    pub accepted: u64,
    pub trusted_fraction: f64,
    pub acceptance_rate: f64,
}

impl DistanceBucket {
    pub fn from_counts(low_m: f64, high_m: f64, samples: u64, correct: u64, accepted: u64) -> Self {
        let frac = |n: u64| {
            if samples == 0 {
                0.0
            } else {
                n as f64 / samples as f64
            }
        };
        DistanceBucket {
            low_m,
            high_m,
            samples,
            correct,
            accepted,
            trusted_fraction: frac(correct),
            acceptance_rate: frac(accepted),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionHistogram {
    pub accept: u64,
    pub reject: u64,
    /// Still pending when the run ended.
    pub unresolved: u64,
}

/// Wall-clock cost of the receive pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub samples: u64,
    pub mean_ns: f64,
    pub median_ns: f64,
}

impl LatencyStats {
    pub fn from_samples(samples: &mut [u64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        samples.sort_unstable();
        let n = samples.len();
        let mean_ns = samples.iter().map(|&s| s as f64).sum::<f64>() / n as f64;
        let median_ns = if n % 2 == 1 {
            samples[n / 2] as f64
        } else {
            (samples[n / 2 - 1] as f64 + samples[n / 2] as f64) / 2.0
        };
        Some(LatencyStats {
            samples: n as u64,
            mean_ns,
            median_ns,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub run: RunIdentity,
    pub benign_vehicles: u64,
    /// Distinct benign vehicles that accepted at least one false warning.
    pub victims: u64,
    pub histogram: DecisionHistogram,
    /// Non-empty buckets only, ordered by distance.
    pub trusted_fraction_by_distance: Vec<DistanceBucket>,
    /// Present only when the run measured wall-clock latency.
    pub latency: Option<LatencyStats>,
}

impl MetricsReport {
    pub fn bucket_at(&self, low_m: f64) -> Option<&DistanceBucket> {
        self.trusted_fraction_by_distance
            .iter()
            .find(|b| b.low_m == low_m)
    }
}

/// What [`finalize`] needs to know about the run besides its decisions.
#[derive(Debug, Clone)]
pub struct FinalizeContext {
    pub run: RunIdentity,
    pub benign: BTreeSet<VehicleId>,
    pub include_latency: bool,
}

pub fn finalize(log: &DecisionLog, ctx: &FinalizeContext) -> MetricsReport {
    let mut histogram = DecisionHistogram::default();
    let mut victims = BTreeSet::new();
    // bucket index -> (samples, correct, accepted)
    let mut buckets: BTreeMap<u64, (u64, u64, u64)> = BTreeMap::new();
    let mut latencies = Vec::new();

    for r in log.records() {
        if ctx.include_latency {
            latencies.push(r.pipeline_latency_ns);
        }
        let accepted = match r.decision {
            Disposition::Pending => {
                histogram.unresolved += 1;
                continue;
            }
            Disposition::Accept => {
                histogram.accept += 1;
                true
            }
            Disposition::Reject => {
                histogram.reject += 1;
                false
            }
        };
        if accepted && !r.ground_truth && ctx.benign.contains(&r.receiver) {
            victims.insert(r.receiver);
        }
        if let Some(d) = r.sender_receiver_distance.filter(|d| d.is_finite() && *d >= 0.0) {
            let idx = (d / BUCKET_WIDTH_M).floor() as u64;
            let slot = buckets.entry(idx).or_default();
            slot.0 += 1;
            slot.1 += u64::from(accepted == r.ground_truth);
            slot.2 += u64::from(accepted);
        }
    }

    let trusted_fraction_by_distance = buckets
        .into_iter()
        .map(|(idx, (samples, correct, accepted))| {
            let low = idx as f64 * BUCKET_WIDTH_M;
            DistanceBucket::from_counts(low, low + BUCKET_WIDTH_M, samples, correct, accepted)
        })
        .collect();

    MetricsReport {
        schema_version: REPORT_SCHEMA_VERSION,
        run: ctx.run.clone(),
        benign_vehicles: ctx.benign.len() as u64,
        victims: victims.len() as u64,
        histogram,
        trusted_fraction_by_distance,
        latency: if ctx.include_latency {
            LatencyStats::from_samples(&mut latencies)
        } else {
            None
        },
    }
}

/// Sums bucket counts over several reports (for seed sweeps).
pub fn aggregate_buckets<'a, I>(reports: I) -> Vec<DistanceBucket>
where
    I: IntoIterator<Item = &'a MetricsReport>,
{
    let mut sums: BTreeMap<u64, (u64, u64, u64)> = BTreeMap::new();
    for r in reports {
        for b in &r.trusted_fraction_by_distance {
            let idx = (b.low_m / BUCKET_WIDTH_M).round() as u64;
            let s = sums.entry(idx).or_default();
            s.0 += b.samples;
            s.1 += b.correct;
            s.2 += b.accepted;
        }
    }
    sums.into_iter()
        .map(|(idx, (n, c, a))| {
            let low = idx as f64 * BUCKET_WIDTH_M;
            DistanceBucket::from_counts(low, low + BUCKET_WIDTH_M, n, c, a)
        })
        .collect()
}
