use std::collections::BTreeSet;

use super::record::{DecisionKey, DecisionLog, DecisionRecord};
use super::MetricsError;
use crate::protocol::Disposition;
use crate::reputation::VehicleId;
use crate::sim::{EventLog, LogKind, LogRecord, NodeRef};

/// Decisions and roster rebuilt from a persisted event log.
#[derive(Debug, Clone, Default)]
pub struct Replay {
    pub decisions: DecisionLog,
    pub benign: BTreeSet<VehicleId>,
}

fn vehicle(n: NodeRef, what: &str) -> Result<VehicleId, MetricsError> {
    match n {
        NodeRef::Vehicle(v) => Ok(v),
        other => Err(MetricsError::Replay(format!("{what} `{other}` is not a vehicle"))),
    }
}

fn disposition(s: &str) -> Result<Disposition, MetricsError> {
    match s {
        "accept" => Ok(Disposition::Accept),
        "reject" => Ok(Disposition::Reject),
        "pending" => Ok(Disposition::Pending),
        other => Err(MetricsError::Replay(format!("unknown disposition `{other}`"))),
    }
}

fn detail_field<'a>(rec: &'a LogRecord, key: &str) -> Result<&'a str, MetricsError> {
    rec.detail
        .split(';')
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .ok_or_else(|| MetricsError::Replay(format!("DELIVER detail lacks `{key}`: {}", rec.detail)))
}

/// Rebuilds the decision log from `NODE`, `DELIVER` and `RESOLVE` lines.
/// Wall-clock latency is not logged, so replayed records carry none.
pub fn replay(log: &EventLog) -> Result<Replay, MetricsError> {
    let mut out = Replay::default();
    for rec in log.records() {
        match rec.kind {
            LogKind::Node => {
                if rec.decision == "benign" {
                    out.benign.insert(vehicle(rec.sender, "node")?);
                }
            }
            LogKind::Deliver if rec.decision != "duplicate" => {
                let event_id = rec
                    .event
                    .ok_or_else(|| MetricsError::Replay("DELIVER without event".into()))?;
                let truth = detail_field(rec, "truth")?
                    .parse::<bool>()
                    .map_err(|e| MetricsError::Replay(e.to_string()))?;
                let dist = detail_field(rec, "dist")?
                    .parse::<f64>()
                    .map_err(|e| MetricsError::Replay(e.to_string()))?;
                out.decisions.record_decision(DecisionRecord {
                    time: rec.time_seconds(),
                    receiver: vehicle(rec.receiver, "receiver")?,
                    sender: vehicle(rec.sender, "sender")?,
                    event_id,
                    ground_truth: truth,
                    decision: disposition(&rec.decision)?,
                    sender_receiver_distance: Some(dist),
                    pipeline_latency_ns: 0,
                })?;
            }
            LogKind::Resolve => {
                let key = DecisionKey {
                    receiver: vehicle(rec.receiver, "receiver")?,
                    event_id: rec
                        .event
                        .ok_or_else(|| MetricsError::Replay("RESOLVE without event".into()))?,
                    sender: vehicle(rec.sender, "sender")?,
                };
                out.decisions.resolve(key, disposition(&rec.decision)?)?;
            }
            _ => {}
        }
    }
    Ok(out)
}
