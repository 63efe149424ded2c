//! Ten-seed comparison of IRS against the accept-all baseline on the
//! default highway with ten false-warning attackers.
//!
//! ```text
//! cargo run --release --example seed_sweep [first_seed] [last_seed]
//! ```

use rayon::prelude::*;
use vanet_irs::metrics::{aggregate_buckets, MetricsReport};
use vanet_irs::sim::{AttackerProfile, Pipeline, ScenarioConfig, SimWorld};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("seed"));
    let first = args.next().unwrap_or(0);
    let last = args.next().unwrap_or(first + 9);

    let base = ScenarioConfig {
        attacker_count: 10,
        attacker_profile: AttackerProfile::FalseWarning { rate: 0.1 },
        ..Default::default()
    };
    let jobs: Vec<(u64, Pipeline)> = (first..=last)
        .flat_map(|s| Pipeline::ALL.map(|p| (s, p)))
        .collect();
    let reports: Vec<(u64, Pipeline, MetricsReport)> = jobs
        .par_iter()
        .map(|&(seed, p)| {
            let cfg = ScenarioConfig { seed, ..base.clone() };
            let out = SimWorld::build(cfg).unwrap().with_pipeline(p).run().unwrap();
            (seed, p, out.report)
        })
        .collect();

    println!("seed  irs  accept-all");
    for seed in first..=last {
        let v = |p| {
            reports
                .iter()
                .find(|r| r.0 == seed && r.1 == p)
                .map_or(0, |r| r.2.victims)
        };
        println!("{seed:>4}  {:>3}  {:>10}", v(Pipeline::Irs), v(Pipeline::AcceptAll));
    }

    for p in Pipeline::ALL {
        let mine: Vec<&MetricsReport> = reports.iter().filter(|r| r.1 == p).map(|r| &r.2).collect();
        let h = mine.iter().fold((0, 0, 0), |acc, r| {
            (acc.0 + r.histogram.accept, acc.1 + r.histogram.reject, acc.2 + r.histogram.unresolved)
        });
        println!("\n{p}: accept {} reject {} unresolved {}", h.0, h.1, h.2);
        println!("bucket_m   samples  trusted  accepted");
        for b in aggregate_buckets(mine.iter().copied()).iter().take(16) {
            println!(
                "{:>4}-{:<4} {:>8}  {:>7.3}  {:>8.3}",
                b.low_m, b.high_m, b.samples, b.trusted_fraction, b.acceptance_rate
            );
        }
    }
}
