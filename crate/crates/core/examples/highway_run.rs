//! A single simulated run on the highway, with both pipelines on the same
//! seed. Writes the IRS event log next to the working directory.
//!
//! ```text
//! cargo run --release --example highway_run [scenario.toml] [seed]
//! ```

use std::path::PathBuf;

use vanet_irs::sim::{LogKind, Pipeline, ScenarioConfig, SimWorld};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut config = match args.next() {
        Some(path) => ScenarioConfig::load(&PathBuf::from(path))?,
        None => ScenarioConfig {
            duration: 60.0,
            attacker_count: 10,
            ..Default::default()
        },
    };
    if let Some(seed) = args.next() {
        config.seed = seed.parse()?;
    }
    config.validate()?;
    println!(
        "{} vehicles ({} attackers, {:?}) for {} s, seed {}, config {}",
        config.vehicle_count,
        config.attacker_count,
        config.attacker_profile,
        config.duration,
        config.seed,
        config.config_hash()
    );

    for pipeline in Pipeline::ALL {
        let out = SimWorld::build(config.clone())?.with_pipeline(pipeline).run()?;
        let count = |k: LogKind, decision: Option<&str>| {
            out.log
                .records()
                .iter()
                .filter(|r| r.kind == k && decision.is_none_or(|d| r.decision == d))
                .count()
        };
        let r = &out.report;
        println!(
            "\n{pipeline}: {} log lines, {} genuine and {} fabricated events, {} warnings emitted",
            out.log.len(),
            count(LogKind::Spawn, Some("genuine")),
            count(LogKind::Spawn, Some("fabricated")),
            count(LogKind::Emit, None)
        );
        println!(
            "  victims {}/{}  accept {} reject {} unresolved {}",
            r.victims, r.benign_vehicles, r.histogram.accept, r.histogram.reject, r.histogram.unresolved
        );
        if pipeline == Pipeline::Irs {
            for rsu in &out.rsus {
                let flagged: Vec<String> =
                    rsu.rrl.misbehaving().map(|rec| rec.vehicle.to_string()).collect();
                println!(
                    "  RSU {} at v{}: misbehaving [{}]",
                    rsu.id.0,
                    rsu.rrl.version,
                    flagged.join(" ")
                );
            }
            let path = format!("irs-seed{}.log", config.seed);
            std::fs::write(&path, out.log.render())?;
            println!("  log written to {path}");
        }
    }
    Ok(())
}
