//! Property checks shared by the property suite and the acceptance runner.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vanet_irs::protocol::{
    Beacon, Disposition, EventId, HazardKind, MisbehaviorReport, Position, ProtocolConfig,
    ReportOutcome, RsuNode, VehicleKind, VehicleNode, Warning,
};
use vanet_irs::reputation::{
    apply_point_delta, classify_heuristic, classify_trust, compute_heuristic_bands,
    compute_trust_bands, decide_trust, HeuristicBand, ReputationRecord, RrlStanding, RsuId,
    RsuReputationList, TrustDecision, TrustLevel, VehicleId,
};
use vanet_irs::sim::deliver;

/// Decision matrix written out independently of the library.
pub const MATRIX: [(&str, &str, &str); 9] = [
    ("top", "clear", "accept"),
    ("top", "watch", "accept"),
    ("top", "flagged", "reject"),
    ("medium", "clear", "accept"),
    ("medium", "watch", "unsure"),
    ("medium", "flagged", "reject"),
    ("low", "clear", "reject"),
    ("low", "watch", "reject"),
    ("low", "flagged", "unsure"),
];

pub fn level(name: &str) -> TrustLevel {
    match name {
        "low" => TrustLevel::Low,
        "medium" => TrustLevel::Medium,
        "top" => TrustLevel::Top,
        other => panic!("unknown level {other}"),
    }
}

pub fn standing(name: &str) -> RrlStanding {
    match name {
        "flagged" => RrlStanding::Flagged,
        "watch" => RrlStanding::Watch,
        "clear" => RrlStanding::Clear,
        other => panic!("unknown standing {other}"),
    }
}

pub fn decision(name: &str) -> TrustDecision {
    match name {
        "accept" => TrustDecision::Accept,
        "reject" => TrustDecision::Reject,
        "unsure" => TrustDecision::Unsure,
        other => panic!("unknown decision {other}"),
    }
}

/// Every one of the nine matrix cells, compared with [`MATRIX`].
pub fn check_decision_matrix() -> Result<(), String> {
    let mut seen = BTreeSet::new();
    for (l, g, d) in MATRIX {
        let got = decide_trust(level(l), standing(g));
        if got != decision(d) {
            return Err(format!("({l}, {g}) gave {got:?}, expected {d}"));
        }
        seen.insert((level(l), standing(g)));
    }
    for l in TrustLevel::ALL {
        for g in RrlStanding::ALL {
            if !seen.contains(&(l, g)) {
                return Err(format!("({l:?}, {g:?}) not covered"));
            }
        }
    }
    Ok(())
}

pub fn band_inputs() -> impl Strategy<Value = (Vec<u32>, u32)> {
    (prop::collection::vec(0u32..60, 1..20), 0u32..80)
}

/// One level per point, levels non-decreasing in points and the three
/// ranges tiling `[min, max]`.
pub fn check_band_totality((points, probe): (Vec<u32>, u32)) -> Result<(), TestCaseError> {
    let bands = compute_trust_bands(points.iter().copied()).unwrap();
    let min = *points.iter().min().unwrap();
    let max = *points.iter().max().unwrap();
    prop_assert_eq!((bands.min_points, bands.max_points), (min, max));
    prop_assert!((bands.th() - f64::from(max - min) / 3.0).abs() < 1e-12);

    let lvl = classify_trust(probe, &bands);
    if max == min {
        prop_assert_eq!(lvl, TrustLevel::Medium);
        return Ok(());
    }
    // Oracle: real-valued thresholds.
    let th = f64::from(max - min) / 3.0;
    let p = f64::from(probe);
    let lo = f64::from(min) + th;
    let hi = f64::from(min) + 2.0 * th;
    let expected = if p < lo {
        TrustLevel::Low
    } else if p <= hi + 1e-9 {
        TrustLevel::Medium
    } else {
        TrustLevel::Top
    };
    prop_assert_eq!(lvl, expected, "probe {} in {}..={}", probe, min, max);

    let mut prev = TrustLevel::Low;
    let mut next_start = min;
    for p in min..=max {
        let l = classify_trust(p, &bands);
        prop_assert!(l >= prev);
        prev = l;
    }
    for (_, range) in bands.level_ranges() {
        if let Some(r) = range {
            prop_assert_eq!(*r.start(), next_start);
            next_start = r.end() + 1;
        }
    }
    prop_assert_eq!(next_start, max + 1);
    Ok(())
}

pub fn heuristic_inputs() -> impl Strategy<Value = (Vec<f64>, f64, f64)> {
    (
        prop::collection::vec(0.0f64..60.0, 1..12),
        0.0f64..80.0,
        0.0f64..80.0,
    )
}

pub fn check_heuristic_totality((hs, a, b): (Vec<f64>, f64, f64)) -> Result<(), TestCaseError> {
    let bands = compute_heuristic_bands(hs.iter().copied()).unwrap();
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let (bl, bh) = (classify_heuristic(lo, &bands), classify_heuristic(hi, &bands));
    if bands.w == 0.0 {
        prop_assert_eq!(bl, HeuristicBand::Middle);
        prop_assert_eq!(bh, HeuristicBand::Middle);
    } else {
        prop_assert!(bl <= bh);
    }
    prop_assert!((bands.h_eval - 2.0 * bands.w).abs() < 1e-12);
    Ok(())
}

pub fn floor_inputs() -> impl Strategy<Value = (u32, i64)> {
    (0u32..1000, -2000i64..2000)
}

pub fn check_floor((points, delta): (u32, i64)) -> Result<(), TestCaseError> {
    let rec = ReputationRecord {
        vehicle: VehicleId(1),
        points,
        misbehavior_points: 3,
        last_update: 0.0,
    };
    let out = apply_point_delta(&rec, delta);
    prop_assert_eq!(i64::from(out.points), (i64::from(points) + delta).max(0));
    prop_assert_eq!(out.misbehavior_points, 3);
    if points >= 1 {
        let back = apply_point_delta(&apply_point_delta(&rec, 1), -1);
        prop_assert_eq!(back.points, points);
    }
    Ok(())
}

/// A receiver whose list mixes trust levels and whose cached RRL puts
/// some senders on Watch and some Flagged, so lone warnings land in every
/// branch including the pending buffer.
fn mixed_receiver() -> VehicleNode {
    let mut v = VehicleNode::new(VehicleId(0), VehicleKind::Benign, ProtocolConfig::default());
    let lrl = [(1, 13), (2, 7), (3, 6), (4, 2), (5, 1), (6, 9)];
    for (id, p) in lrl {
        v.lrl.insert(ReputationRecord::new(VehicleId(id), p, 0.0));
    }
    let rrl = [(2, 6), (3, 6), (4, 0), (5, 0), (9, 12)];
    v.cached_rrl = Some(RsuReputationList::from_records(
        RsuId(0),
        1,
        rrl.iter().map(|&(id, p)| ReputationRecord::new(VehicleId(id), p, 0.0)),
    ));
    v
}

fn refresh_beacons(v: &mut VehicleNode, now: f64) {
    for id in 1..=6u32 {
        v.handle_beacon(
            Beacon {
                sender: VehicleId(id),
                position: Position::new(400.0 + 15.0 * f64::from(id), 500.0),
                speed: 20.0,
                heading: (1.0, 0.0),
                timestamp: now,
            },
            now,
        );
    }
}

#[derive(Debug, Clone)]
pub struct WarningStep {
    pub sender: u32,
    pub event: u64,
    pub shifted: bool,
    pub dt: f64,
}

pub fn warning_steps() -> impl Strategy<Value = Vec<WarningStep>> {
    prop::collection::vec(
        (1u32..=6, 0u64..4, prop::bool::weighted(0.15), 0.0f64..1.5).prop_map(
            |(sender, event, shifted, dt)| WarningStep {
                sender,
                event,
                shifted,
                dt,
            },
        ),
        1..40,
    )
}

/// Every pending warning resolves exactly once, each expiry rejection
/// comes with exactly one report, and nothing is left waiting after a
/// maintenance pass beyond the TTL.
pub fn check_pending_single_resolution(steps: Vec<WarningStep>) -> Result<(), TestCaseError> {
    type Key = (EventId, VehicleId);
    let mut v = mixed_receiver();
    let ttl = v.config.pending_ttl;
    let mut now = 1.0;
    // A sender may be left pending again on the same event once the
    // earlier entry has expired, so count instances per key.
    let mut opened: BTreeMap<Key, u32> = BTreeMap::new();
    let mut closed: BTreeMap<Key, u32> = BTreeMap::new();

    fn settle(
        res: &[vanet_irs::protocol::Resolution],
        opened: &BTreeMap<Key, u32>,
        closed: &mut BTreeMap<Key, u32>,
    ) -> Result<(), TestCaseError> {
        for r in res {
            let key = (r.event_id, r.sender);
            let n = closed.entry(key).or_default();
            *n += 1;
            prop_assert!(*n <= opened.get(&key).copied().unwrap_or(0), "{:?} resolved twice", key);
            prop_assert!(r.disposition.is_final());
        }
        Ok(())
    }

    for s in steps {
        now += s.dt;
        refresh_beacons(&mut v, now);
        let exp = v.expire_pending(now);
        prop_assert_eq!(exp.reports.len(), exp.resolved.len());
        settle(&exp.resolved, &opened, &mut closed)?;

        let x = if s.shifted { 600.0 } else { 500.0 };
        let w = Warning {
            sender: VehicleId(s.sender),
            event_id: EventId(s.event),
            event_kind: HazardKind::Crash,
            event_position: Position::new(x, 500.0),
            timestamp: now,
        };
        let out = v.handle_warning(w, now);
        if out.disposition == Some(Disposition::Pending) {
            let key = (EventId(s.event), VehicleId(s.sender));
            let o = opened.entry(key).or_default();
            prop_assert_eq!(*o, closed.get(&key).copied().unwrap_or(0), "{:?} pending twice", key);
            *o += 1;
        }
        settle(&out.resolved, &opened, &mut closed)?;
    }

    let end = now + ttl + 0.5;
    let exp = v.expire_pending(end);
    prop_assert_eq!(exp.reports.len(), exp.resolved.len());
    settle(&exp.resolved, &opened, &mut closed)?;
    prop_assert_eq!(&opened, &closed);
    prop_assert!(v.pending.is_empty());
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ReportStep {
    pub reporter: u32,
    pub accused: u32,
    pub event: u64,
}

pub fn report_steps(vehicles: u32) -> impl Strategy<Value = Vec<ReportStep>> {
    prop::collection::vec(
        (0..vehicles, 0..vehicles, 0u64..3).prop_map(|(reporter, accused, event)| ReportStep {
            reporter,
            accused,
            event,
        }),
        1..60,
    )
}

fn report(s: &ReportStep) -> MisbehaviorReport {
    MisbehaviorReport {
        reporter: VehicleId(s.reporter),
        accused: VehicleId(s.accused),
        event_id: EventId(s.event),
        timestamp: 1.0,
        signature_valid: true,
    }
}

fn misbehavior(rsu: &RsuNode) -> BTreeMap<VehicleId, u32> {
    rsu.rrl
        .records()
        .map(|r| (r.vehicle, r.misbehavior_points))
        .collect()
}

/// Misbehavior points move only on an escalation backed by reports from
/// two distinct vehicles about the same event.
pub fn check_two_reporter_escalation(steps: Vec<ReportStep>) -> Result<(), TestCaseError> {
    let mut rsu = RsuNode::new(RsuId(0), Position::new(0.0, 0.0), 300.0, ProtocolConfig::default());
    let mut reporters: BTreeMap<EventId, BTreeSet<VehicleId>> = BTreeMap::new();
    for (i, s) in steps.iter().enumerate() {
        let before = misbehavior(&rsu);
        let outcome = rsu.rsu_handle_report(&report(s), i as f64 * 0.1);
        if s.reporter != s.accused {
            reporters
                .entry(EventId(s.event))
                .or_default()
                .insert(VehicleId(s.reporter));
        }
        let after = misbehavior(&rsu);
        let changed: Vec<VehicleId> = after
            .iter()
            .filter(|(id, m)| before.get(id).copied().unwrap_or(0) != **m)
            .map(|(id, _)| *id)
            .collect();
        match outcome {
            ReportOutcome::Escalated {
                accused,
                first_reporter,
                second_reporter,
            } => {
                prop_assert_ne!(first_reporter, second_reporter);
                prop_assert_ne!(second_reporter, accused);
                prop_assert_eq!(changed, vec![accused]);
                let filed = &reporters[&EventId(s.event)];
                prop_assert!(filed.contains(&first_reporter) && filed.contains(&second_reporter));
            }
            _ => prop_assert!(changed.is_empty(), "{:?} changed on {:?}", changed, outcome),
        }
    }
    Ok(())
}

/// A single reporter, however persistent, never escalates anyone.
pub fn check_single_reporter_never_escalates(steps: Vec<ReportStep>) -> Result<(), TestCaseError> {
    let mut rsu = RsuNode::new(RsuId(0), Position::new(0.0, 0.0), 300.0, ProtocolConfig::default());
    for s in &steps {
        let s = ReportStep {
            reporter: 99,
            ..s.clone()
        };
        rsu.rsu_handle_report(&report(&s), 1.0);
    }
    prop_assert!(rsu.rrl.records().all(|r| r.misbehavior_points == 0));
    Ok(())
}

/// RSU whose list has vehicles 0..4 at low points (Flagged) and 5..9 high.
pub fn rsu_with_flagged() -> RsuNode {
    let mut rsu = RsuNode::new(RsuId(0), Position::new(0.0, 0.0), 300.0, ProtocolConfig::default());
    for id in 0..10u32 {
        let points = if id < 5 { 0 } else { 12 };
        rsu.rrl.insert(ReputationRecord::new(VehicleId(id), points, 0.0));
    }
    rsu
}

pub fn check_flagged_reporter_immunity(steps: Vec<ReportStep>) -> Result<(), TestCaseError> {
    let mut rsu = rsu_with_flagged();
    let before = rsu.rrl.clone();
    for s in &steps {
        let s = ReportStep {
            reporter: s.reporter % 5,
            accused: s.accused,
            event: s.event,
        };
        prop_assert_eq!(rsu.rrl.standing(VehicleId(s.reporter)), RrlStanding::Flagged);
        rsu.rsu_handle_report(&report(&s), 1.0);
    }
    prop_assert_eq!(&rsu.rrl, &before);
    prop_assert!(rsu.suspicion.is_empty());
    Ok(())
}

pub fn radio_inputs() -> impl Strategy<Value = (f64, f64, f64, f64, f64, f64, u64)> {
    (
        0.0f64..1000.0,
        0.0f64..1000.0,
        0.0f64..1000.0,
        0.0f64..1000.0,
        1.0f64..600.0,
        0.0f64..=1.0,
        any::<u64>(),
    )
}

pub fn check_radio_range((x1, y1, x2, y2, range, loss, seed): (f64, f64, f64, f64, f64, f64, u64)) -> Result<(), TestCaseError> {
    let a = Position::new(x1, y1);
    let b = Position::new(x2, y2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delivered = deliver(&a, &b, range, loss, &mut rng);
    if a.distance_to(&b) > range {
        prop_assert!(!delivered);
    }
    if loss == 0.0 && a.distance_to(&b) <= range {
        prop_assert!(delivered);
    }
    Ok(())
}

pub const MONTE_CARLO_TRIALS: u32 = 100_000;
pub const MONTE_CARLO_LOSS: f64 = 0.3;
pub const MONTE_CARLO_EXPECTED: f64 = 0.7;
pub const MONTE_CARLO_TOLERANCE: f64 = 0.02;

/// Empirical delivery frequency at 100 m inside a 300 m range.
pub fn delivery_frequency(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Position::new(0.0, 0.0);
    let b = Position::new(100.0, 0.0);
    let hits = (0..MONTE_CARLO_TRIALS)
        .filter(|_| deliver(&a, &b, 300.0, MONTE_CARLO_LOSS, &mut rng))
        .count();
    hits as f64 / f64::from(MONTE_CARLO_TRIALS)
}
