use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::report::{
    DecisionHistogram, DistanceBucket, LatencyStats, MetricsReport, RunIdentity,
};
use super::MetricsError;

pub const CSV_HEADER: [&str; 5] = [
    "bucket_low_m",
    "bucket_high_m",
    "samples",
    "trusted_fraction",
    "acceptance_rate",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Writes `report` to `path`.
pub fn export(report: &MetricsReport, format: ExportFormat, path: &Path) -> Result<PathBuf, MetricsError> {
    let body = match format {
        ExportFormat::Csv => to_csv(report),
        ExportFormat::Json => to_json(report),
    };
    fs::write(path, body).map_err(|source| MetricsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path.to_path_buf())
}

pub fn to_json(report: &MetricsReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<MetricsReport, MetricsError> {
    serde_json::from_str(text).map_err(|e| MetricsError::Parse(e.to_string()))
}

/// Bucket rows followed by a `#`-prefixed `key,value` summary block.
pub fn to_csv(report: &MetricsReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for b in &report.trusted_fraction_by_distance {
        w.write_record([
            b.low_m.to_string(),
            b.high_m.to_string(),
            b.samples.to_string(),
            b.trusted_fraction.to_string(),
            b.acceptance_rate.to_string(),
        ])
        .expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");

    let mut summary = vec![
        ("schema_version", report.schema_version.to_string()),
        ("config_hash", report.run.config_hash.clone()),
        ("seed", report.run.seed.to_string()),
        ("pipeline", report.run.pipeline.clone()),
        ("benign_vehicles", report.benign_vehicles.to_string()),
        ("victims", report.victims.to_string()),
        ("accept", report.histogram.accept.to_string()),
        ("reject", report.histogram.reject.to_string()),
        ("unresolved", report.histogram.unresolved.to_string()),
    ];
    if let Some(l) = &report.latency {
        summary.push(("latency_samples", l.samples.to_string()));
        summary.push(("latency_mean_ns", l.mean_ns.to_string()));
        summary.push(("latency_median_ns", l.median_ns.to_string()));
    }
    for (k, v) in summary {
        out.push_str(&format!("#{k},{v}\n"));
    }
    out
}

pub fn from_csv(text: &str) -> Result<MetricsReport, MetricsError> {
    let parse_err = |m: String| MetricsError::Parse(m);
    let (table, summary): (Vec<&str>, Vec<&str>) = text.lines().partition(|l| !l.starts_with('#'));

    let table = table.join("\n");
    let mut rdr = csv::Reader::from_reader(table.as_bytes());
    let headers = rdr.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(parse_err(format!("unexpected header {headers:?}")));
    }
    let mut buckets = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| parse_err(e.to_string()))?;
        let num = |i: usize| -> Result<f64, MetricsError> {
            row[i]
                .parse::<f64>()
                .map_err(|e| parse_err(format!("column {}: {e}", CSV_HEADER[i])))
        };
        let samples = row[2]
            .parse::<u64>()
            .map_err(|e| parse_err(format!("samples: {e}")))?;
        let count = |f: f64| (f * samples as f64).round() as u64;
        buckets.push(DistanceBucket::from_counts(
            num(0)?,
            num(1)?,
            samples,
            count(num(3)?),
            count(num(4)?),
        ));
    }

    let mut kv = std::collections::BTreeMap::new();
    for line in summary {
        let (k, v) = line[1..]
            .split_once(',')
            .ok_or_else(|| parse_err(format!("bad summary line `{line}`")))?;
        kv.insert(k.to_string(), v.to_string());
    }
    fn field<T: FromStr>(
        kv: &std::collections::BTreeMap<String, String>,
        key: &str,
    ) -> Result<T, MetricsError> {
        kv.get(key)
            .ok_or_else(|| MetricsError::Parse(format!("missing summary field `{key}`")))?
            .parse()
            .map_err(|_| MetricsError::Parse(format!("bad summary field `{key}`")))
    }

    let latency = if kv.contains_key("latency_samples") {
        Some(LatencyStats {
            samples: field(&kv, "latency_samples")?,
            mean_ns: field(&kv, "latency_mean_ns")?,
            median_ns: field(&kv, "latency_median_ns")?,
        })
    } else {
        None
    };

    Ok(MetricsReport {
        schema_version: field(&kv, "schema_version")?,
        run: RunIdentity {
            config_hash: field(&kv, "config_hash")?,
            seed: field(&kv, "seed")?,
            pipeline: field(&kv, "pipeline")?,
        },
        benign_vehicles: field(&kv, "benign_vehicles")?,
        victims: field(&kv, "victims")?,
        histogram: DecisionHistogram {
            accept: field(&kv, "accept")?,
            reject: field(&kv, "reject")?,
            unresolved: field(&kv, "unresolved")?,
        },
        trusted_fraction_by_distance: buckets,
        latency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::report::REPORT_SCHEMA_VERSION;

    fn sample(latency: bool) -> MetricsReport {
        MetricsReport {
            schema_version: REPORT_SCHEMA_VERSION,
            run: RunIdentity {
                config_hash: "0a1b2c3d4e5f".into(),
                seed: 3,
                pipeline: "irs".into(),
            },
            benign_vehicles: 90,
            victims: 4,
            histogram: DecisionHistogram {
                accept: 10,
                reject: 7,
                unresolved: 1,
            },
            trusted_fraction_by_distance: vec![
                DistanceBucket::from_counts(0.0, 20.0, 7, 6, 3),
                DistanceBucket::from_counts(40.0, 60.0, 3, 1, 3),
            ],
            latency: latency.then_some(LatencyStats {
                samples: 18,
                mean_ns: 1234.5,
                median_ns: 1000.0,
            }),
        }
    }

    #[test]
    fn csv_round_trip() {
        for latency in [false, true] {
            let r = sample(latency);
            assert_eq!(from_csv(&to_csv(&r)).unwrap(), r);
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample(true);
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn empty_report_has_header_only_table() {
        let mut r = sample(false);
        r.trusted_fraction_by_distance.clear();
        let csv = to_csv(&r);
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, vec![CSV_HEADER.join(",")]);
        assert_eq!(from_csv(&csv).unwrap(), r);
    }

    #[test]
    fn unwritable_destination_names_path() {
        let err = export(
            &sample(false),
            ExportFormat::Json,
            Path::new("/nonexistent-dir/x/report.json"),
        )
        .unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x/report.json"));
    }
}
