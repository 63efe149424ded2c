//! One receiver working through the three lone-warning outcomes, then a
//! corroborated warning and an expired pending one.
//!
//! ```text
//! cargo run --example vehicle_pipeline
//! ```

use vanet_irs::protocol::{
    Beacon, EventId, HazardKind, Position, ProtocolConfig, RrlBroadcast, RrlEntry, VehicleKind,
    VehicleNode, Warning, WarningResult,
};
use vanet_irs::reputation::{ReputationRecord, RsuId, VehicleId};

const EVENT: Position = Position::new(500.0, 500.0);

fn beacon(id: u32, x: f64, t: f64) -> Beacon {
    Beacon {
        sender: VehicleId(id),
        position: Position::new(x, EVENT.y),
        speed: 25.0,
        heading: (1.0, 0.0),
        timestamp: t,
    }
}

fn warning(sender: u32, event: u64, x: f64, t: f64) -> Warning {
    Warning {
        sender: VehicleId(sender),
        event_id: EventId(event),
        event_kind: HazardKind::Ice,
        event_position: Position::new(x, EVENT.y),
        timestamp: t,
    }
}

fn show(label: &str, r: &WarningResult) {
    let signals = r
        .assessment
        .map(|a| format!(" [{:?}/{:?}/{:?}]", a.trust, a.heuristic, a.standing))
        .unwrap_or_default();
    println!(
        "{label:<34} {:?} via {:?}{signals}, {} report(s)",
        r.disposition.expect("not a duplicate"),
        r.path,
        r.reports.len()
    );
}

fn main() {
    let mut rx = VehicleNode::new(VehicleId(3), VehicleKind::Benign, ProtocolConfig::default());
    let lrl = [(26, 13), (18, 11), (2, 7), (57, 6), (14, 4), (11, 3), (23, 1), (38, 1)];
    for (i, &(id, points)) in lrl.iter().enumerate() {
        rx.lrl.insert(ReputationRecord::new(VehicleId(id), points, 0.0));
        rx.handle_beacon(beacon(id, EVENT.x + 10.0 + 30.0 * i as f64, 1.0), 1.0);
    }
    rx.handle_rrl_broadcast(&RrlBroadcast {
        issuer: RsuId(0),
        version: 1,
        entries: vec![
            RrlEntry { vehicle: VehicleId(14), points: 0, misbehavior_points: 3 },
            RrlEntry { vehicle: VehicleId(23), points: 6, misbehavior_points: 0 },
            RrlEntry { vehicle: VehicleId(26), points: 12, misbehavior_points: 0 },
        ],
        timestamp: 1.0,
        signature_valid: true,
    });

    show("V26 (top, near)", &rx.handle_warning(warning(26, 1, EVENT.x, 1.0), 1.0));
    show("V14 (low, flagged by RSU)", &rx.handle_warning(warning(14, 2, EVENT.x, 1.0), 1.0));
    show("V23 (low, watched by RSU)", &rx.handle_warning(warning(23, 3, EVENT.x, 1.0), 1.0));

    let first = rx.handle_warning(warning(2, 4, 700.0, 1.1), 1.1);
    show("V2 first report of E4", &first);
    let second = rx.handle_warning(warning(57, 4, 705.0, 1.2), 1.2);
    show("V57 agrees about E4", &second);
    let conflict = rx.handle_warning(warning(18, 4, 900.0, 1.3), 1.3);
    show("V18 places E4 elsewhere", &conflict);

    println!("\npending before expiry: {}", rx.pending.len());
    let expired = rx.expire_pending(3.5);
    for r in &expired.resolved {
        println!("expired: {} on {} -> {:?}", r.sender, r.event_id, r.disposition);
    }
    for rep in &expired.reports {
        println!("report to RSU: {} accuses {} over {}", rep.reporter, rep.accused, rep.event_id);
    }

    println!("\nLRL after the exchange:");
    for rec in rx.lrl.ranked() {
        println!("  {:<4} {:>3}", rec.vehicle.to_string(), rec.points);
    }
}
