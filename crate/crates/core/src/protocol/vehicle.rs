use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::config::ProtocolConfig;
use super::message::{Beacon, EventId, MisbehaviorReport, Position, RrlBroadcast, Warning};
use super::neighbors::NeighborTable;
use crate::reputation::{
    classify_heuristic, classify_trust, compute_heuristic_bands, decide_trust,
    heuristic_from_distance, HeuristicBand, LocalReputationList, ReputationRecord, RrlStanding,
    RsuReputationList, TrustDecision, TrustLevel, VehicleId,
};
use crate::sim::AttackerProfile;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VehicleKind {
    Benign,
    Attacker(AttackerProfile),
}

impl VehicleKind {
    pub fn is_attacker(&self) -> bool {
        matches!(self, VehicleKind::Attacker(_))
    }
}

/// How a receiver ended up treating a warning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Disposition {
    Accept,
    Reject,
    Pending,
}

impl Disposition {
    pub fn is_final(self) -> bool {
        self != Disposition::Pending
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PendingState {
    AwaitingCorroboration,
    Resolved,
}

/// First warning seen for an event, kept for `pending_ttl` so later
/// warnings about the same event can corroborate or contradict it.
///
/// A lone warning the receiver could not decide on is
/// `AwaitingCorroboration`; one decided on arrival starts `Resolved`.
#[derive(Debug, Clone, PartialEq)]
pub struct PendingWarning {
    pub warning: Warning,
    pub first_seen: f64,
    pub corroborators: BTreeSet<VehicleId>,
    pub state: PendingState,
}

impl PendingWarning {
    fn consistent_with(&self, other: &Warning, tolerance: f64) -> bool {
        self.warning.event_kind == other.event_kind
            && self.warning.event_position.distance_to(&other.event_position) <= tolerance
    }
}

/// Which rule produced a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecisionPath {
    /// Same event already reported by someone else, consistently.
    Corroborated,
    /// Same event already reported with a different kind or place.
    Conflict,
    /// Sender was out of plausible range of the event it reports.
    Implausible,
    /// Top local trust and close enough to the event.
    TrustedSender,
    /// Outcome of the LRL/RRL decision matrix.
    Matrix(TrustDecision),
    /// Event position is not a valid coordinate.
    Malformed,
    /// This sender already reported this event.
    Duplicate,
}

/// Signals the receiver computed for a lone warning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub trust: TrustLevel,
    pub heuristic: HeuristicBand,
    pub standing: RrlStanding,
}

/// Final outcome for a warning that was earlier left pending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub sender: VehicleId,
    pub event_id: EventId,
    pub disposition: Disposition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarningResult {
    /// `None` only for duplicates, which are dropped without a decision.
    pub disposition: Option<Disposition>,
    pub path: DecisionPath,
    pub assessment: Option<Assessment>,
    pub resolved: Vec<Resolution>,
    pub reports: Vec<MisbehaviorReport>,
}

impl WarningResult {
    fn new(disposition: Disposition, path: DecisionPath) -> Self {
        WarningResult {
            disposition: Some(disposition),
            path,
            assessment: None,
            resolved: Vec::new(),
            reports: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpiryResult {
    pub resolved: Vec<Resolution>,
    pub reports: Vec<MisbehaviorReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RrlUpdate {
    /// Cache replaced; `seeded` when the LRL was bootstrapped from it.
    Installed { seeded: bool },
    Stale,
    InvalidSignature,
}

/// On-board state of one vehicle.
#[derive(Debug, Clone)]
pub struct VehicleNode {
    pub id: VehicleId,
    pub kind: VehicleKind,
    pub lrl: LocalReputationList,
    pub cached_rrl: Option<RsuReputationList>,
    pub pending: BTreeMap<EventId, PendingWarning>,
    pub neighbors: NeighborTable,
    pub config: ProtocolConfig,
}

impl VehicleNode {
    pub fn new(id: VehicleId, kind: VehicleKind, config: ProtocolConfig) -> Self {
        VehicleNode {
            id,
            kind,
            lrl: LocalReputationList::new(),
            cached_rrl: None,
            pending: BTreeMap::new(),
            neighbors: NeighborTable::new(),
            config,
        }
    }

    /// Refreshes the neighbor table. Returns `false` if the beacon was
    /// dropped (own beacon, or stamped in the future).
    pub fn handle_beacon(&mut self, beacon: Beacon, now: f64) -> bool {
        if beacon.sender == self.id || beacon.timestamp > now {
            return false;
        }
        self.neighbors.evict_expired(now, self.config.neighbor_ttl);
        self.neighbors.observe(beacon, now);
        true
    }

    pub fn rrl_standing(&self, id: VehicleId) -> RrlStanding {
        self.cached_rrl
            .as_ref()
            .map_or(RrlStanding::Clear, |rrl| rrl.standing(id))
    }

    fn report(&self, accused: VehicleId, event_id: EventId, now: f64) -> MisbehaviorReport {
        MisbehaviorReport {
            reporter: self.id,
            accused,
            event_id,
            timestamp: now,
            signature_valid: true,
        }
    }

    fn penalize(&mut self, sender: VehicleId, now: f64) {
        self.lrl
            .ensure(sender, self.config.initial_points, now);
        self.lrl.adjust(sender, -1, now);
    }

    fn reward(&mut self, sender: VehicleId, now: f64) {
        self.lrl
            .ensure(sender, self.config.initial_points, now);
        self.lrl.adjust(sender, 1, now);
    }

    fn position_is_valid(&self, p: &Position) -> bool {
        if !p.is_finite() {
            return false;
        }
        match self.config.grid {
            Some((w, h)) => (0.0..=w).contains(&p.x) && (0.0..=h).contains(&p.y),
            None => true,
        }
    }

    /// Runs the receive pipeline for one warning.
    ///
    /// Order of checks: malformed position, corroboration or conflict with
    /// an earlier warning for the same event, sender-to-event plausibility,
    /// then the trust/heuristic/RRL decision for a lone warning.
    pub fn handle_warning(&mut self, warning: Warning, now: f64) -> WarningResult {
        let sender = warning.sender;
        let event_id = warning.event_id;

        if !self.position_is_valid(&warning.event_position) {
            return WarningResult::new(Disposition::Reject, DecisionPath::Malformed);
        }

        let tolerance = self.config.corroboration_tolerance;
        if let Some(tracked) = self.pending.get(&event_id) {
            if tracked.corroborators.contains(&sender) {
                return WarningResult {
                    disposition: None,
                    path: DecisionPath::Duplicate,
                    assessment: None,
                    resolved: Vec::new(),
                    reports: Vec::new(),
                };
            }
            if !tracked.consistent_with(&warning, tolerance) {
                self.penalize(sender, now);
                return WarningResult::new(Disposition::Reject, DecisionPath::Conflict);
            }
            return self.corroborate(event_id, sender, now);
        }

        let sender_position = self.neighbors.get(sender).map(|n| n.beacon.position);
        if let Some(pos) = sender_position {
            if pos.distance_to(&warning.event_position) > self.config.plausibility_radius {
                self.penalize(sender, now);
                let mut result = WarningResult::new(Disposition::Reject, DecisionPath::Implausible);
                result.reports.push(self.report(sender, event_id, now));
                self.track(warning, now, PendingState::Resolved);
                return result;
            }
        }

        let assessment = match sender_position {
            Some(pos) => self.assess(sender, pos, &warning.event_position, now),
            // Never heard a beacon from this sender: assume the worst.
            None => {
                self.lrl.ensure(sender, self.config.initial_points, now);
                Assessment {
                    trust: TrustLevel::Low,
                    heuristic: HeuristicBand::Away,
                    standing: self.rrl_standing(sender),
                }
            }
        };

        let close_enough = match assessment.heuristic {
            HeuristicBand::Near => true,
            HeuristicBand::Middle => !self.config.strict_heuristic,
            HeuristicBand::Away => false,
        };

        let mut result = if assessment.trust == TrustLevel::Top && close_enough {
            WarningResult::new(Disposition::Accept, DecisionPath::TrustedSender)
        } else {
            let decision = decide_trust(assessment.trust, assessment.standing);
            let path = DecisionPath::Matrix(decision);
            match decision {
                TrustDecision::Accept => WarningResult::new(Disposition::Accept, path),
                TrustDecision::Reject => {
                    self.penalize(sender, now);
                    let mut r = WarningResult::new(Disposition::Reject, path);
                    r.reports.push(self.report(sender, event_id, now));
                    r
                }
                TrustDecision::Unsure => WarningResult::new(Disposition::Pending, path),
            }
        };
        result.assessment = Some(assessment);

        let state = if result.disposition == Some(Disposition::Pending) {
            PendingState::AwaitingCorroboration
        } else {
            PendingState::Resolved
        };
        self.track(warning, now, state);
        result
    }

    fn assess(
        &mut self,
        sender: VehicleId,
        sender_pos: Position,
        event: &Position,
        now: f64,
    ) -> Assessment {
        let points = self
            .lrl
            .ensure(sender, self.config.initial_points, now)
            .points;
        let bands = self.lrl.bands().expect("sender entry exists");
        let trust = classify_trust(points, &bands);

        let to_event = |p: &Position| {
            heuristic_from_distance(p.distance_to(event)).unwrap_or(f64::INFINITY)
        };
        let sender_h = to_event(&sender_pos);
        let heuristic = compute_heuristic_bands(
            self.neighbors
                .iter()
                .map(|(_, n)| to_event(&n.beacon.position))
                .chain(std::iter::once(sender_h)),
        )
        .map_or(HeuristicBand::Away, |b| classify_heuristic(sender_h, &b));

        Assessment {
            trust,
            heuristic,
            standing: self.rrl_standing(sender),
        }
    }

    fn track(&mut self, warning: Warning, now: f64, state: PendingState) {
        let sender = warning.sender;
        self.pending.insert(
            warning.event_id,
            PendingWarning {
                warning,
                first_seen: now,
                corroborators: BTreeSet::from([sender]),
                state,
            },
        );
    }

    fn corroborate(&mut self, event_id: EventId, sender: VehicleId, now: f64) -> WarningResult {
        let tracked = self.pending.get_mut(&event_id).expect("caller checked");
        let first_corroboration = tracked.corroborators.len() == 1;
        let mut credit = Vec::with_capacity(2);
        if first_corroboration {
            credit.extend(tracked.corroborators.iter().copied());
        }
        credit.push(sender);
        tracked.corroborators.insert(sender);

        let mut result = WarningResult::new(Disposition::Accept, DecisionPath::Corroborated);
        if tracked.state == PendingState::AwaitingCorroboration {
            tracked.state = PendingState::Resolved;
            result.resolved.push(Resolution {
                sender: tracked.warning.sender,
                event_id,
                disposition: Disposition::Accept,
            });
        }
        for id in credit {
            self.reward(id, now);
        }
        result
    }

    /// Resolves warnings that waited longer than `pending_ttl`. Lone
    /// unsure warnings become rejections with a report; already resolved
    /// ones are simply forgotten.
    pub fn expire_pending(&mut self, now: f64) -> ExpiryResult {
        let ttl = self.config.pending_ttl;
        let expired: Vec<EventId> = self
            .pending
            .iter()
            .filter(|(_, p)| now - p.first_seen > ttl)
            .map(|(id, _)| *id)
            .collect();

        let mut out = ExpiryResult::default();
        for event_id in expired {
            let p = self.pending.remove(&event_id).expect("collected above");
            if p.state == PendingState::AwaitingCorroboration && p.corroborators.len() == 1 {
                let sender = p.warning.sender;
                self.penalize(sender, now);
                out.reports.push(self.report(sender, event_id, now));
                out.resolved.push(Resolution {
                    sender,
                    event_id,
                    disposition: Disposition::Reject,
                });
            }
        }
        out
    }

    /// Earliest time at which [`Self::expire_pending`] has work to do.
    pub fn next_expiry(&self) -> Option<f64> {
        self.pending
            .values()
            .map(|p| p.first_seen + self.config.pending_ttl)
            .min_by(f64::total_cmp)
    }

    pub fn handle_rrl_broadcast(&mut self, broadcast: &RrlBroadcast) -> RrlUpdate {
        if !broadcast.signature_valid {
            return RrlUpdate::InvalidSignature;
        }
        if let Some(cached) = &self.cached_rrl {
            if broadcast.version <= cached.version {
                return RrlUpdate::Stale;
            }
        }
        let now = broadcast.timestamp;
        let records: Vec<ReputationRecord> =
            broadcast.entries.iter().map(|e| e.to_record(now)).collect();
        let seeded = self.lrl.is_empty() && !records.is_empty();
        if seeded {
            for r in &records {
                self.lrl.insert(r.clone());
            }
        }
        self.cached_rrl = Some(RsuReputationList::from_records(
            broadcast.issuer,
            broadcast.version,
            records,
        ));
        RrlUpdate::Installed { seeded }
    }

    /// True when the vehicle should ask an RSU for a fresh list.
    pub fn maybe_request_rrl(&self) -> bool {
        match &self.cached_rrl {
            None => true,
            Some(rrl) => crate::reputation::rrl_is_stale(rrl, self.neighbors.ids()),
        }
    }
}
