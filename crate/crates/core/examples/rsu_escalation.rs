//! Roadside unit handling accusations: a single report only raises
//! suspicion, a second independent one confirms the misbehavior, and the
//! result is broadcast and forwarded to the neighboring RSU.
//!
//! ```text
//! cargo run --example rsu_escalation
//! ```

use vanet_irs::protocol::{EventId, MisbehaviorReport, Position, ProtocolConfig, RsuNode};
use vanet_irs::reputation::{RsuId, VehicleId};

fn report(reporter: u32, accused: u32, event: u64, t: f64) -> MisbehaviorReport {
    MisbehaviorReport {
        reporter: VehicleId(reporter),
        accused: VehicleId(accused),
        event_id: EventId(event),
        timestamp: t,
        signature_valid: true,
    }
}

fn main() {
    let config = ProtocolConfig::default();
    let mut west = RsuNode::new(RsuId(0), Position::new(250.0, 500.0), 300.0, config);
    let mut east = RsuNode::new(RsuId(1), Position::new(750.0, 500.0), 300.0, config);
    west.adjacent = vec![east.id];
    east.adjacent = vec![west.id];

    let steps = [
        ("V2 accuses V14", report(2, 14, 7, 1.0)),
        ("V2 accuses V14 again", report(2, 14, 7, 1.2)),
        ("V57 accuses V14", report(57, 14, 7, 1.4)),
        ("V14 accuses itself", report(14, 14, 7, 1.5)),
    ];
    for (label, r) in &steps {
        let outcome = west.rsu_handle_report(r, r.timestamp);
        println!("{label:<22} -> {outcome:?}");
    }

    println!("\nRRL at {}:", west.id.0);
    for rec in west.rrl.ranked() {
        println!(
            "  {:<4} points {:>2}  misbehavior {}",
            rec.vehicle.to_string(), rec.points, rec.misbehavior_points
        );
    }

    let tick = west.rsu_tick(2.0);
    for b in &tick.broadcasts {
        println!("\nbroadcast v{} with {} entries", b.version, b.entries.len());
    }
    for f in &tick.forwards {
        println!("forward {} -> {}: {:?}", f.from.0, f.to.0, f.entries);
        east.rsu_handle_forward(f, 2.0);
    }
    println!("RSU {} now lists {:?}", east.id.0, east.rrl.get(VehicleId(14)));

    // A lone accusation is forgotten once it outlives the suspicion TTL.
    west.rsu_handle_report(&report(11, 38, 9, 3.0), 3.0);
    let later = west.rsu_tick(3.0 + config.suspicion_ttl + 1.0);
    println!("\ndropped suspicions after the TTL: {:?}", later.dropped_suspicions);
    println!("V38 misbehavior points: {:?}", west.rrl.get(VehicleId(38)).map(|r| r.misbehavior_points));
}
