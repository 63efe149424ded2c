use vanet_irs::metrics::{finalize, replay, FinalizeContext, RunIdentity};
use vanet_irs::sim::{AttackerProfile, EventLog, Pipeline, ScenarioConfig, SimWorld};

#[test]
fn report_from_persisted_log_matches_live_report() {
    let profiles = [
        AttackerProfile::FalseWarning { rate: 0.2 },
        AttackerProfile::ConflictingInfo,
        AttackerProfile::FarEventClaim { rate: 0.2 },
    ];
    for (seed, profile) in profiles.into_iter().enumerate() {
        let config = ScenarioConfig {
            seed: seed as u64,
            duration: 30.0,
            vehicle_count: 50,
            attacker_count: 5,
            attacker_profile: profile,
            hazard_rate_per_minute: 6.0,
            ..Default::default()
        };
        for pipeline in Pipeline::ALL {
            let out = SimWorld::build(config.clone())
                .unwrap()
                .with_pipeline(pipeline)
                .run()
                .unwrap();
            let text = out.log.render();
            let parsed = EventLog::parse(&text).unwrap();
            assert_eq!(parsed.render(), text);

            let r = replay(&parsed).unwrap();
            assert_eq!(r.decisions.len(), out.decisions.len());
            let ctx = FinalizeContext {
                run: RunIdentity {
                    config_hash: config.config_hash(),
                    seed: config.seed,
                    pipeline: pipeline.name().to_string(),
                },
                benign: r.benign,
                include_latency: false,
            };
            assert_eq!(finalize(&r.decisions, &ctx), out.report, "{pipeline} {profile:?}");
        }
    }
}

#[test]
fn garbage_log_is_rejected() {
    assert!(EventLog::parse("not\ta\tlog").is_err());
}
