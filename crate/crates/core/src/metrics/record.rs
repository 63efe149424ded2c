use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::protocol::{Disposition, EventId};
use crate::reputation::VehicleId;

/// One receiver's disposition of one sender's warning about one event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub time: f64,
    pub receiver: VehicleId,
    pub sender: VehicleId,
    pub event_id: EventId,
    /// Whether the warning's content was true.
    pub ground_truth: bool,
    pub decision: Disposition,
    pub sender_receiver_distance: Option<f64>,
    /// Wall-clock nanoseconds spent in the receive pipeline, 0 if not measured.
    pub pipeline_latency_ns: u64,
}

impl DecisionRecord {
    pub fn key(&self) -> DecisionKey {
        DecisionKey {
            receiver: self.receiver,
            event_id: self.event_id,
            sender: self.sender,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionKey {
    pub receiver: VehicleId,
    pub event_id: EventId,
    pub sender: VehicleId,
}

/// Decisions of one run. A pending record is later replaced in place by
/// its final disposition.
#[derive(Debug, Clone, Default)]
pub struct DecisionLog {
    records: Vec<DecisionRecord>,
    index: HashMap<DecisionKey, usize>,
}

impl DecisionLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[DecisionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, key: &DecisionKey) -> Option<&DecisionRecord> {
        self.index.get(key).map(|&i| &self.records[i])
    }

    /// Appends a decision, or finalizes a pending one for the same
    /// `(receiver, event, sender)`. A second final decision for a triple
    /// is a protocol invariant breach.
    pub fn record_decision(&mut self, record: DecisionRecord) -> Result<(), MetricsError> {
        let key = record.key();
        match self.index.get(&key) {
            None => {
                self.index.insert(key, self.records.len());
                self.records.push(record);
                Ok(())
            }
            Some(&i) => {
                let existing = &mut self.records[i];
                if existing.decision.is_final() || !record.decision.is_final() {
                    return Err(MetricsError::DuplicateDecision {
                        receiver: key.receiver,
                        event_id: key.event_id,
                        sender: key.sender,
                    });
                }
                existing.decision = record.decision;
                if existing.sender_receiver_distance.is_none() {
                    existing.sender_receiver_distance = record.sender_receiver_distance;
                }
                Ok(())
            }
        }
    }

    /// Finalizes an existing pending record.
    pub fn resolve(&mut self, key: DecisionKey, decision: Disposition) -> Result<(), MetricsError> {
        let existing = self
            .get(&key)
            .cloned()
            .ok_or(MetricsError::UnknownDecision {
                receiver: key.receiver,
                event_id: key.event_id,
                sender: key.sender,
            })?;
        self.record_decision(DecisionRecord {
            decision,
            ..existing
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(decision: Disposition) -> DecisionRecord {
        DecisionRecord {
            time: 1.0,
            receiver: VehicleId(1),
            sender: VehicleId(2),
            event_id: EventId(3),
            ground_truth: true,
            decision,
            sender_receiver_distance: Some(40.0),
            pipeline_latency_ns: 0,
        }
    }

    #[test]
    fn append_increments_count() {
        let mut log = DecisionLog::new();
        log.record_decision(rec(Disposition::Accept)).unwrap();
        assert_eq!(log.len(), 1);
    }

    #[test]
    fn pending_then_final_is_one_record() {
        let mut log = DecisionLog::new();
        log.record_decision(rec(Disposition::Pending)).unwrap();
        log.record_decision(rec(Disposition::Accept)).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log.records()[0].decision, Disposition::Accept);
    }

    #[test]
    fn two_finals_is_an_error() {
        let mut log = DecisionLog::new();
        log.record_decision(rec(Disposition::Accept)).unwrap();
        let err = log.record_decision(rec(Disposition::Reject)).unwrap_err();
        assert!(matches!(err, MetricsError::DuplicateDecision { .. }));
    }

    #[test]
    fn resolve_requires_existing_record() {
        let mut log = DecisionLog::new();
        let key = rec(Disposition::Pending).key();
        assert!(log.resolve(key, Disposition::Reject).is_err());
        log.record_decision(rec(Disposition::Pending)).unwrap();
        log.resolve(key, Disposition::Reject).unwrap();
        assert_eq!(log.get(&key).unwrap().decision, Disposition::Reject);
    }
}
