use std::collections::BTreeMap;

use super::config::ProtocolConfig;
use super::message::{EventId, MisbehaviorReport, Position, RrlBroadcast, RrlEntry, RsuForward};
use crate::reputation::{apply_point_delta, RrlStanding, RsuId, RsuReputationList, VehicleId};

/// One outstanding, unconfirmed accusation involving `vehicle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Suspicion {
    pub since: f64,
    pub reporter: VehicleId,
    pub accused: VehicleId,
    pub event_id: EventId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportIgnored {
    InvalidSignature,
    SelfReport,
    FlaggedReporter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportOutcome {
    Ignored(ReportIgnored),
    /// First accusation: the accused (and the reporter) are now suspicious.
    Suspected,
    /// Second, independent accusation confirmed the misbehavior.
    Escalated {
        accused: VehicleId,
        first_reporter: VehicleId,
        second_reporter: VehicleId,
    },
    /// Accepted but changed nothing (same reporter again, other event).
    Noted,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RsuTickOutput {
    pub broadcasts: Vec<RrlBroadcast>,
    pub forwards: Vec<RsuForward>,
    pub dropped_suspicions: Vec<VehicleId>,
}

/// Roadside unit holding the network-wide reputation list.
#[derive(Debug, Clone)]
pub struct RsuNode {
    pub id: RsuId,
    pub position: Position,
    pub coverage_radius: f64,
    pub rrl: RsuReputationList,
    pub suspicion: BTreeMap<VehicleId, Suspicion>,
    /// Next RSU along each direction of travel.
    pub adjacent: Vec<RsuId>,
    pub config: ProtocolConfig,
    next_broadcast: f64,
}

impl RsuNode {
    pub fn new(id: RsuId, position: Position, coverage_radius: f64, config: ProtocolConfig) -> Self {
        RsuNode {
            id,
            position,
            coverage_radius,
            rrl: RsuReputationList::new(id),
            suspicion: BTreeMap::new(),
            adjacent: Vec::new(),
            config,
            next_broadcast: 0.0,
        }
    }

    pub fn covers(&self, p: &Position) -> bool {
        self.position.distance_to(p) <= self.coverage_radius
    }

    pub fn next_broadcast(&self) -> f64 {
        self.next_broadcast
    }

    fn bump(&mut self, id: VehicleId, delta: i64, now: f64) {
        let rec = self.rrl.entry(id, self.config.initial_points, now);
        *rec = apply_point_delta(rec, delta);
        rec.last_update = now;
    }

    pub fn rsu_handle_report(&mut self, report: &MisbehaviorReport, now: f64) -> ReportOutcome {
        if !report.signature_valid {
            return ReportOutcome::Ignored(ReportIgnored::InvalidSignature);
        }
        if report.reporter == report.accused {
            return ReportOutcome::Ignored(ReportIgnored::SelfReport);
        }
        if self.rrl.standing(report.reporter) == RrlStanding::Flagged {
            return ReportOutcome::Ignored(ReportIgnored::FlaggedReporter);
        }

        let accused = report.accused;
        let reporter = report.reporter;
        let initial = self.config.initial_points;
        self.rrl.entry(accused, initial, now);
        self.rrl.entry(reporter, initial, now);

        if let Some(s) = self.suspicion.get(&accused).copied() {
            if s.event_id == report.event_id && s.reporter != reporter {
                let rec = self.rrl.entry(accused, initial, now);
                rec.misbehavior_points += 1;
                self.bump(accused, -1, now);
                if s.reporter != accused {
                    self.bump(s.reporter, 1, now);
                }
                self.bump(reporter, 1, now);
                self.suspicion.remove(&accused);
                if self
                    .suspicion
                    .get(&s.reporter)
                    .is_some_and(|o| o.accused == accused)
                {
                    self.suspicion.remove(&s.reporter);
                }
                return ReportOutcome::Escalated {
                    accused,
                    first_reporter: s.reporter,
                    second_reporter: reporter,
                };
            }
            return ReportOutcome::Noted;
        }

        let entry = Suspicion {
            since: now,
            reporter,
            accused,
            event_id: report.event_id,
        };
        self.suspicion.insert(accused, entry);
        self.suspicion.entry(reporter).or_insert(entry);
        ReportOutcome::Suspected
    }

    /// Current list as a signed broadcast, without bumping the version.
    pub fn snapshot(&self, now: f64) -> RrlBroadcast {
        RrlBroadcast {
            issuer: self.id,
            version: self.rrl.version,
            entries: self.rrl.records().map(RrlEntry::from).collect(),
            timestamp: now,
            signature_valid: true,
        }
    }

    /// Drops stale suspicions and, once per broadcast period, publishes a
    /// new RRL version and forwards the misbehaving subset to the adjacent
    /// RSUs.
    pub fn rsu_tick(&mut self, now: f64) -> RsuTickOutput {
        let mut out = RsuTickOutput::default();
        let ttl = self.config.suspicion_ttl;
        self.suspicion.retain(|id, s| {
            let keep = now - s.since <= ttl;
            if !keep {
                out.dropped_suspicions.push(*id);
            }
            keep
        });

        if now < self.next_broadcast {
            return out;
        }
        while self.next_broadcast <= now {
            self.next_broadcast += self.config.broadcast_period;
        }
        self.rrl.version += 1;
        out.broadcasts.push(self.snapshot(now));

        let misbehaving: Vec<RrlEntry> = self.rrl.misbehaving().map(RrlEntry::from).collect();
        if !misbehaving.is_empty() {
            for &to in &self.adjacent {
                out.forwards.push(RsuForward {
                    from: self.id,
                    to,
                    entries: misbehaving.clone(),
                    timestamp: now,
                });
            }
        }
        out
    }

    /// Merges misbehavior information received from another RSU, keeping
    /// the worse of the two views for each vehicle.
    pub fn rsu_handle_forward(&mut self, forward: &RsuForward, now: f64) {
        for e in &forward.entries {
            let rec = self.rrl.entry(e.vehicle, e.points, now);
            rec.misbehavior_points = rec.misbehavior_points.max(e.misbehavior_points);
            rec.points = rec.points.min(e.points);
            rec.last_update = now;
        }
    }
}
