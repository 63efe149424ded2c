//! Finalizes a short run and writes its metrics as CSV and JSON, then
//! reads both back.
//!
//! ```text
//! cargo run --example export_metrics [out_dir]
//! ```

use std::path::PathBuf;

use vanet_irs::metrics::{export, from_csv, from_json, ExportFormat};
use vanet_irs::sim::{ScenarioConfig, SimWorld};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(std::env::temp_dir, PathBuf::from);
    let config = ScenarioConfig {
        duration: 20.0,
        vehicle_count: 40,
        attacker_count: 4,
        hazard_rate_per_minute: 12.0,
        ..Default::default()
    };
    let out = SimWorld::build(config)?.run()?;
    let report = out.report;

    let stem = format!("{}-seed{}", report.run.pipeline, report.run.seed);
    for format in [ExportFormat::Csv, ExportFormat::Json] {
        let path = export(&report, format, &dir.join(format!("{stem}.{}", format.extension())))?;
        let text = std::fs::read_to_string(&path)?;
        let back = match format {
            ExportFormat::Csv => from_csv(&text)?,
            ExportFormat::Json => from_json(&text)?,
        };
        println!(
            "{} ({} bytes), round trip {}",
            path.display(),
            text.len(),
            if back == report { "identical" } else { "DIFFERS" }
        );
        if format == ExportFormat::Csv {
            for line in text.lines().take(4) {
                println!("  {line}");
            }
            println!("  ...");
        }
    }
    Ok(())
}
