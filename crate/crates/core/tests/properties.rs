mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vanet_irs::metrics::{
    finalize, from_csv, from_json, to_csv, to_json, DecisionLog, DecisionRecord, FinalizeContext,
    RunIdentity,
};
use vanet_irs::protocol::{
    Disposition, EventId, Message, ProtocolConfig, RrlBroadcast, RrlEntry, RrlUpdate, VehicleKind,
    VehicleNode,
};
use vanet_irs::reputation::{rrl_is_stale, ReputationRecord, RsuId, RsuReputationList, VehicleId};
use vanet_irs::sim::{AttackerProfile, LogKind, ScenarioConfig, SimWorld};

use support::*;

proptest! {
    #[test]
    fn trust_bands_are_total_and_contiguous(input in band_inputs()) {
        check_band_totality(input)?;
    }

    #[test]
    fn heuristic_bands_are_total_and_ordered(input in heuristic_inputs()) {
        check_heuristic_totality(input)?;
    }

    #[test]
    fn points_never_go_negative(input in floor_inputs()) {
        check_floor(input)?;
    }

    #[test]
    fn pending_warnings_resolve_exactly_once(steps in warning_steps()) {
        check_pending_single_resolution(steps)?;
    }

    #[test]
    fn escalation_needs_two_distinct_reporters(steps in report_steps(6)) {
        check_two_reporter_escalation(steps)?;
    }

    #[test]
    fn one_reporter_alone_never_escalates(steps in report_steps(6)) {
        check_single_reporter_never_escalates(steps)?;
    }

    #[test]
    fn flagged_reporters_change_nothing(steps in report_steps(10)) {
        check_flagged_reporter_immunity(steps)?;
    }

    #[test]
    fn no_delivery_beyond_range(input in radio_inputs()) {
        check_radio_range(input)?;
    }

    #[test]
    fn removing_rrl_entries_never_clears_staleness(
        present in prop::collection::btree_set(0u32..30, 0..30),
        neighbors in prop::collection::btree_set(0u32..30, 0..20),
        drop in 0u32..30,
    ) {
        let rec = |id: u32| ReputationRecord::new(VehicleId(id), 5, 0.0);
        let full = RsuReputationList::from_records(RsuId(0), 1, present.iter().map(|&i| rec(i)));
        let mut less = full.clone();
        less.remove(VehicleId(drop));
        let ids: Vec<VehicleId> = neighbors.iter().map(|&i| VehicleId(i)).collect();
        if rrl_is_stale(&full, ids.iter()) {
            prop_assert!(rrl_is_stale(&less, ids.iter()));
        }
        let known = ids.iter().filter(|id| full.contains(**id)).count();
        prop_assert_eq!(rrl_is_stale(&full, ids.iter()), 2 * known < ids.len());
    }

    #[test]
    fn bootstrap_from_one_broadcast_is_idempotent(
        entries in prop::collection::vec((0u32..40, 0u32..20, 0u32..4), 1..15),
    ) {
        let b = broadcast(1, entries, true);
        let mut once = fresh();
        let mut twice = fresh();
        prop_assert_eq!(once.handle_rrl_broadcast(&b), RrlUpdate::Installed { seeded: true });
        twice.handle_rrl_broadcast(&b);
        twice.handle_rrl_broadcast(&b);
        prop_assert_eq!(&once.lrl, &twice.lrl);
        prop_assert_eq!(&once.cached_rrl, &twice.cached_rrl);

        // A later version refreshes the cache but not an already seeded LRL.
        let lrl = once.lrl.clone();
        let mut newer = b.clone();
        newer.version = 2;
        prop_assert_eq!(once.handle_rrl_broadcast(&newer), RrlUpdate::Installed { seeded: false });
        prop_assert_eq!(&once.lrl, &lrl);
    }

    #[test]
    fn cached_rrl_version_never_decreases(
        versions in prop::collection::vec((0u64..20, prop::bool::weighted(0.8)), 1..30),
    ) {
        let mut v = fresh();
        let mut best: Option<u64> = None;
        for (version, valid) in versions {
            let before = v.cached_rrl.as_ref().map(|r| r.version);
            v.handle_rrl_broadcast(&broadcast(version, vec![(1, 5, 0)], valid));
            let after = v.cached_rrl.as_ref().map(|r| r.version);
            prop_assert!(after >= before);
            if valid && best.is_none_or(|b| version > b) {
                best = Some(version);
            }
            prop_assert_eq!(after, best);
        }
    }

    #[test]
    fn victims_ignore_record_order(
        recs in prop::collection::btree_map(
            (0u32..8, 0u64..6, 0u32..8),
            (any::<bool>(), any::<bool>(), prop::option::of(0.0f64..320.0)),
            0..60,
        ),
        shuffle_seed in any::<u64>(),
    ) {
        let records: Vec<DecisionRecord> = recs
            .into_iter()
            .map(|((receiver, event, sender), (truth, accept, dist))| DecisionRecord {
                time: 1.0,
                receiver: VehicleId(receiver),
                sender: VehicleId(sender),
                event_id: EventId(event),
                ground_truth: truth,
                decision: if accept { Disposition::Accept } else { Disposition::Reject },
                sender_receiver_distance: dist,
                pipeline_latency_ns: 0,
            })
            .collect();
        let mut shuffled = records.clone();
        {
            use rand::seq::SliceRandom;
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        }
        let ctx = context((0..6).map(VehicleId).collect());
        let a = finalize(&log_of(&records), &ctx);
        let b = finalize(&log_of(&shuffled), &ctx);
        prop_assert_eq!(&a, &b);

        // Oracle for victims, straight from the definition.
        let victims: BTreeSet<VehicleId> = records
            .iter()
            .filter(|r| r.decision == Disposition::Accept && !r.ground_truth)
            .map(|r| r.receiver)
            .filter(|v| ctx.benign.contains(v))
            .collect();
        prop_assert_eq!(a.victims, victims.len() as u64);
        prop_assert!(a.victims <= a.benign_vehicles);

        let with_distance = records.iter().filter(|r| r.sender_receiver_distance.is_some()).count();
        let total: u64 = a.trusted_fraction_by_distance.iter().map(|b| b.samples).sum();
        prop_assert_eq!(total, with_distance as u64);
        for b in &a.trusted_fraction_by_distance {
            prop_assert!((0.0..=1.0).contains(&b.trusted_fraction));
            prop_assert!((0.0..=1.0).contains(&b.acceptance_rate));
        }

        // Adding one more accept-on-false never lowers the count.
        let mut more = records.clone();
        more.push(DecisionRecord {
            time: 2.0,
            receiver: VehicleId(1),
            sender: VehicleId(99),
            event_id: EventId(99),
            ground_truth: false,
            decision: Disposition::Accept,
            sender_receiver_distance: None,
            pipeline_latency_ns: 0,
        });
        prop_assert!(finalize(&log_of(&more), &ctx).victims >= a.victims);

        prop_assert_eq!(&from_json(&to_json(&a)).unwrap(), &a);
        prop_assert_eq!(&from_csv(&to_csv(&a)).unwrap(), &a);
    }

    #[test]
    fn messages_survive_the_wire(
        sender in any::<u32>(),
        event in any::<u64>(),
        x in -1e6f64..1e6,
        y in -1e6f64..1e6,
        t in 0.0f64..1e4,
    ) {
        let msgs = [
            Message::Warning(vanet_irs::protocol::Warning {
                sender: VehicleId(sender),
                event_id: EventId(event),
                event_kind: vanet_irs::protocol::HazardKind::SuddenBrake,
                event_position: vanet_irs::protocol::Position::new(x, y),
                timestamp: t,
            }),
            Message::RrlBroadcast(broadcast(event, vec![(sender, 3, 1)], true)),
        ];
        for m in msgs {
            prop_assert_eq!(Message::decode(&m.encode()).unwrap(), m);
        }
    }
}

fn fresh() -> VehicleNode {
    VehicleNode::new(VehicleId(100), VehicleKind::Benign, ProtocolConfig::default())
}

fn broadcast(version: u64, entries: Vec<(u32, u32, u32)>, valid: bool) -> RrlBroadcast {
    RrlBroadcast {
        issuer: RsuId(0),
        version,
        entries: entries
            .into_iter()
            .map(|(v, points, misbehavior_points)| RrlEntry {
                vehicle: VehicleId(v),
                points,
                misbehavior_points,
            })
            .collect(),
        timestamp: 1.0,
        signature_valid: valid,
    }
}

fn context(benign: BTreeSet<VehicleId>) -> FinalizeContext {
    FinalizeContext {
        run: RunIdentity {
            config_hash: "test".into(),
            seed: 0,
            pipeline: "irs".into(),
        },
        benign,
        include_latency: false,
    }
}

fn log_of(records: &[DecisionRecord]) -> DecisionLog {
    let mut log = DecisionLog::new();
    for r in records {
        log.record_decision(r.clone()).unwrap();
    }
    log
}

#[test]
fn decision_matrix_matches_table() {
    check_decision_matrix().unwrap();
}

#[test]
fn delivery_frequency_matches_loss() {
    let f = delivery_frequency(7);
    assert!(
        (f - MONTE_CARLO_EXPECTED).abs() <= MONTE_CARLO_TOLERANCE,
        "frequency {f}"
    );
}

#[test]
fn false_warning_rate_gives_expected_count() {
    let profile = AttackerProfile::FalseWarning { rate: 0.1 };
    let counts: Vec<u32> = (0..200u64)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut t, mut n) = (0.0, 0);
            while let Some(dt) = profile.next_fire_delay(&mut rng) {
                t += dt;
                if t > 300.0 {
                    break;
                }
                n += 1;
            }
            n
        })
        .collect();
    let mean = counts.iter().sum::<u32>() as f64 / counts.len() as f64;
    // Poisson(30): the mean of 200 draws has sd ~0.39.
    assert!((mean - 30.0).abs() < 1.5, "mean {mean}");
    // Single runs stay within 5 sd of 30.
    assert!(counts.iter().all(|&c| (3..=58).contains(&c)), "{counts:?}");
}

#[test]
fn simulated_deliveries_stay_in_range_and_time_order() {
    for seed in 0..4 {
        let config = ScenarioConfig {
            seed,
            duration: 20.0,
            vehicle_count: 40,
            attacker_count: 4,
            transmission_range: 150.0,
            hazard_rate_per_minute: 12.0,
            ..Default::default()
        };
        let out = SimWorld::build(config).unwrap().run().unwrap();
        let mut last = 0;
        let mut deliveries = 0;
        for r in out.log.records() {
            assert!(r.time >= last, "log goes back in time at {r:?}");
            last = r.time;
            if r.kind == LogKind::Deliver && r.decision != "duplicate" {
                let dist: f64 = r
                    .detail
                    .split(';')
                    .find_map(|kv| kv.strip_prefix("dist="))
                    .unwrap()
                    .parse()
                    .unwrap();
                assert!(dist <= 150.0, "delivery over {dist} m");
                deliveries += 1;
            }
        }
        assert!(deliveries > 0);
    }
}

#[test]
fn every_warning_references_a_registered_event() {
    let config = ScenarioConfig {
        duration: 20.0,
        vehicle_count: 30,
        attacker_count: 3,
        attacker_profile: AttackerProfile::ConflictingInfo,
        hazard_rate_per_minute: 12.0,
        ..Default::default()
    };
    let out = SimWorld::build(config).unwrap().run().unwrap();
    let mut emits = 0;
    for r in out.log.records() {
        if matches!(r.kind, LogKind::Emit | LogKind::Deliver) {
            let id = r.event.expect("warning lines carry an event");
            assert!(out.registry.get(id).is_some(), "{id} unregistered");
            emits += 1;
        }
    }
    assert!(emits > 0);
}
