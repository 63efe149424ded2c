use std::collections::BTreeSet;
use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::attacker::{attacker_emit, AttackSurface, AttackerProfile};
use super::config::{ScenarioConfig, ScenarioError};
use super::log::{EventLog, LogKind, LogRecord, NodeRef};
use super::mobility::{Direction, Highway, Motion};
use super::queue::{to_seconds, to_sim_time, EventQueue, SimTime};
use super::radio::{deliver, derive_seed};
use super::registry::EventRegistry;
use crate::metrics::{
    finalize, DecisionKey, DecisionLog, DecisionRecord, FinalizeContext, MetricsError,
    MetricsReport, RunIdentity,
};
use crate::protocol::{
    Beacon, DecisionPath, Disposition, EventId, HazardKind, MisbehaviorReport, Position,
    ProtocolConfig, ReportOutcome, Resolution, RrlUpdate, RsuForward, RsuNode, VehicleKind,
    VehicleNode, Warning,
};
use crate::reputation::{RsuId, TrustDecision, VehicleId};

/// One-hop delivery delay for warnings, reports and RSU forwards.
pub const DELIVERY_LATENCY: SimTime = 1_000;

/// How many of the closest benign vehicles report a genuine hazard.
pub const HAZARD_WITNESSES: usize = 3;

// Independent random streams, so that e.g. turning beacons off does not
// shift warning deliveries.
const STREAM_SETUP: u64 = 1;
const STREAM_HAZARD: u64 = 2;
const STREAM_BEACON: u64 = 3;
const STREAM_NOISE: u64 = 4;
const STREAM_WARNING: u64 = 5;
const STREAM_CONTROL: u64 = 6;
const STREAM_ATTACKER: u64 = 7;

/// How receivers treat warnings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Irs,
    /// Every warning accepted unconditionally; no beacons, reports or RSUs.
    AcceptAll,
}

impl Pipeline {
    pub const ALL: [Pipeline; 2] = [Pipeline::Irs, Pipeline::AcceptAll];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Irs => "irs",
            Pipeline::AcceptAll => "accept-all",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown pipeline `{s}` (expected irs or accept-all)"))
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ScenarioError),
    #[error("protocol invariant broken: {0}")]
    Invariant(#[from] MetricsError),
}

enum Payload {
    BeaconRound,
    HazardSpawn,
    AttackerFire(usize),
    DeliverWarning {
        receiver: usize,
        warning: Warning,
        distance: f64,
    },
    DeliverReport {
        rsu: usize,
        report: MisbehaviorReport,
    },
    DeliverForward(RsuForward),
    RsuTick,
    Expire(usize),
}

/// Everything a finished run produced.
#[derive(Debug)]
pub struct RunOutput {
    pub log: EventLog,
    pub decisions: DecisionLog,
    pub report: MetricsReport,
    pub vehicles: Vec<VehicleNode>,
    pub rsus: Vec<RsuNode>,
    pub registry: EventRegistry,
}

/// A built scenario, ready to [`run`](SimWorld::run).
pub struct SimWorld {
    config: ScenarioConfig,
    pipeline: Pipeline,
    timing: bool,
    highway: Highway,
    motions: Vec<Motion>,
    vehicles: Vec<VehicleNode>,
    rsus: Vec<RsuNode>,
    registry: EventRegistry,
    contradicted: Vec<BTreeSet<EventId>>,
    queue: EventQueue<Payload>,
    log: EventLog,
    decisions: DecisionLog,
    expiry_at: Vec<Option<SimTime>>,
    rng_hazard: ChaCha8Rng,
    rng_beacon: ChaCha8Rng,
    rng_noise: ChaCha8Rng,
    rng_warning: ChaCha8Rng,
    rng_control: ChaCha8Rng,
    rng_attackers: Vec<ChaCha8Rng>,
}

fn stream(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, parts))
}

fn path_name(path: DecisionPath) -> &'static str {
    match path {
        DecisionPath::Corroborated => "corroborated",
        DecisionPath::Conflict => "conflict",
        DecisionPath::Implausible => "implausible",
        DecisionPath::TrustedSender => "trusted-sender",
        DecisionPath::Matrix(TrustDecision::Accept) => "matrix-accept",
        DecisionPath::Matrix(TrustDecision::Reject) => "matrix-reject",
        DecisionPath::Matrix(TrustDecision::Unsure) => "matrix-unsure",
        DecisionPath::Malformed => "malformed",
        DecisionPath::Duplicate => "duplicate",
    }
}

fn disposition_name(d: Disposition) -> &'static str {
    match d {
        Disposition::Accept => "accept",
        Disposition::Reject => "reject",
        Disposition::Pending => "pending",
    }
}

fn outcome_name(o: &ReportOutcome) -> &'static str {
    match o {
        ReportOutcome::Ignored(_) => "ignored",
        ReportOutcome::Suspected => "suspected",
        ReportOutcome::Escalated { .. } => "escalated",
        ReportOutcome::Noted => "noted",
    }
}

fn profile_name(p: &AttackerProfile) -> &'static str {
    match p {
        AttackerProfile::FalseWarning { .. } => "false-warning",
        AttackerProfile::ConflictingInfo => "conflicting-info",
        AttackerProfile::FarEventClaim { .. } => "far-event-claim",
    }
}

fn vref(i: usize) -> NodeRef {
    NodeRef::Vehicle(VehicleId(i as u32))
}

fn accept_all(w: &Warning) -> Disposition {
    black_box(w);
    Disposition::Accept
}

impl SimWorld {
    /// Places vehicles and RSUs for `config`. Vehicle `i` gets id `Vi`;
    /// which vehicles attack is drawn from the seed.
    pub fn build(config: ScenarioConfig) -> Result<Self, ScenarioError> {
        config.validate()?;
        let seed = config.seed;
        let protocol = config.protocol();
        let highway = Highway::new(config.grid, config.lanes_per_direction);
        let mut setup = stream(seed, &[STREAM_SETUP]);

        let n = config.vehicle_count;
        let (lo, hi) = config.speed_range;
        let motions: Vec<Motion> = (0..n)
            .map(|_| {
                let direction = if setup.random_bool(0.5) {
                    Direction::East
                } else {
                    Direction::West
                };
                let lane = setup.random_range(0..config.lanes_per_direction);
                Motion {
                    start_x: setup.random_range(0.0..highway.length),
                    lane_y: highway.lane_y(direction, lane),
                    direction,
                    speed: setup.random_range(lo..=hi),
                }
            })
            .collect();

        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut setup);
        let attackers: BTreeSet<usize> = order.into_iter().take(config.attacker_count).collect();

        let vehicles = (0..n)
            .map(|i| {
                let kind = if attackers.contains(&i) {
                    VehicleKind::Attacker(config.attacker_profile)
                } else {
                    VehicleKind::Benign
                };
                VehicleNode::new(VehicleId(i as u32), kind, protocol)
            })
            .collect();

        let rsus = Self::place_rsus(&config, protocol);

        Ok(SimWorld {
            pipeline: Pipeline::Irs,
            timing: false,
            highway,
            motions,
            vehicles,
            rsus,
            registry: EventRegistry::new(),
            contradicted: vec![BTreeSet::new(); n],
            queue: EventQueue::new(),
            log: EventLog::new(),
            decisions: DecisionLog::new(),
            expiry_at: vec![None; n],
            rng_hazard: stream(seed, &[STREAM_HAZARD]),
            rng_beacon: stream(seed, &[STREAM_BEACON]),
            rng_noise: stream(seed, &[STREAM_NOISE]),
            rng_warning: stream(seed, &[STREAM_WARNING]),
            rng_control: stream(seed, &[STREAM_CONTROL]),
            rng_attackers: (0..n)
                .map(|i| stream(seed, &[STREAM_ATTACKER, i as u64]))
                .collect(),
            config,
        })
    }

    /// RSUs in configuration order; each is adjacent to its neighbors along
    /// the (ring) road in both directions.
    fn place_rsus(config: &ScenarioConfig, protocol: ProtocolConfig) -> Vec<RsuNode> {
        let mut rsus: Vec<RsuNode> = config
            .rsu_positions
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                RsuNode::new(
                    RsuId(k as u32),
                    Position::new(x, y),
                    config.transmission_range,
                    protocol,
                )
            })
            .collect();
        let mut by_x: Vec<usize> = (0..rsus.len()).collect();
        by_x.sort_by(|&a, &b| rsus[a].position.x.total_cmp(&rsus[b].position.x).then(a.cmp(&b)));
        let m = by_x.len();
        for (pos, &k) in by_x.iter().enumerate() {
            let mut adjacent = Vec::new();
            for step in [m - 1, 1] {
                let other = by_x[(pos + step) % m];
                let id = RsuId(other as u32);
                if other != k && !adjacent.contains(&id) {
                    adjacent.push(id);
                }
            }
            rsus[k].adjacent = adjacent;
        }
        rsus
    }

    pub fn with_pipeline(mut self, pipeline: Pipeline) -> Self {
        self.pipeline = pipeline;
        self
    }

    /// Measure wall-clock time spent in the receive pipeline. Latencies
    /// are not reproducible, so they are off by default.
    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn pipeline(&self) -> Pipeline {
        self.pipeline
    }

    pub fn vehicles(&self) -> &[VehicleNode] {
        &self.vehicles
    }

    pub fn rsus(&self) -> &[RsuNode] {
        &self.rsus
    }

    pub fn position_of(&self, i: usize, t: SimTime) -> Position {
        self.motions[i].position(&self.highway, to_seconds(t))
    }

    pub fn benign(&self) -> BTreeSet<VehicleId> {
        self.vehicles
            .iter()
            .filter(|v| !v.kind.is_attacker())
            .map(|v| v.id)
            .collect()
    }

    fn irs(&self) -> bool {
        self.pipeline == Pipeline::Irs
    }

    /// Processes every event up to and including `duration`.
    pub fn run(mut self) -> Result<RunOutput, SimError> {
        let end = to_sim_time(self.config.duration);
        self.start();
        while let Some(t) = self.queue.peek_time() {
            if t > end {
                break;
            }
            let (t, _, payload) = self.queue.pop().expect("peeked");
            self.dispatch(t, payload)?;
        }
        let ctx = FinalizeContext {
            run: RunIdentity {
                config_hash: self.config.config_hash(),
                seed: self.config.seed,
                pipeline: self.pipeline.name().to_string(),
            },
            benign: self.benign(),
            include_latency: self.timing,
        };
        let report = finalize(&self.decisions, &ctx);
        Ok(RunOutput {
            log: self.log,
            decisions: self.decisions,
            report,
            vehicles: self.vehicles,
            rsus: self.rsus,
            registry: self.registry,
        })
    }

    fn start(&mut self) {
        for (i, v) in self.vehicles.iter().enumerate() {
            let (decision, detail) = match &v.kind {
                VehicleKind::Benign => ("benign", "-"),
                VehicleKind::Attacker(p) => ("attacker", profile_name(p)),
            };
            self.log.push(
                LogRecord::new(0, LogKind::Node)
                    .sender(vref(i))
                    .decision(decision)
                    .detail(detail),
            );
        }
        if self.vehicles.is_empty() {
            return;
        }
        if self.irs() {
            self.queue.schedule(0, Payload::BeaconRound);
            if !self.rsus.is_empty() {
                self.queue.schedule(0, Payload::RsuTick);
            }
        }
        self.schedule_hazard(0);
        for i in 0..self.vehicles.len() {
            self.schedule_attacker(i, 0);
        }
    }

    fn schedule_hazard(&mut self, t: SimTime) {
        let rate = self.config.hazard_rate_per_minute / 60.0;
        if rate > 0.0 {
            let dt = Exp::new(rate).expect("positive rate").sample(&mut self.rng_hazard);
            self.queue
                .schedule(t + to_sim_time(dt).max(1), Payload::HazardSpawn);
        }
    }

    fn schedule_attacker(&mut self, i: usize, t: SimTime) {
        if let VehicleKind::Attacker(profile) = self.vehicles[i].kind {
            if let Some(dt) = profile.next_fire_delay(&mut self.rng_attackers[i]) {
                self.queue
                    .schedule(t + to_sim_time(dt).max(1), Payload::AttackerFire(i));
            }
        }
    }

    fn dispatch(&mut self, t: SimTime, payload: Payload) -> Result<(), SimError> {
        match payload {
            Payload::BeaconRound => self.beacon_round(t),
            Payload::HazardSpawn => self.hazard_spawn(t),
            Payload::AttackerFire(i) => self.attacker_fire(i, t),
            Payload::DeliverWarning {
                receiver,
                warning,
                distance,
            } => self.deliver_warning(t, receiver, warning, distance)?,
            Payload::DeliverReport { rsu, report } => self.deliver_report(t, rsu, report),
            Payload::DeliverForward(f) => {
                self.rsus[f.to.0 as usize].rsu_handle_forward(&f, to_seconds(t));
            }
            Payload::RsuTick => self.rsu_tick(t),
            Payload::Expire(i) => self.expire(t, i)?,
        }
        Ok(())
    }

    fn beacon_round(&mut self, t: SimTime) {
        let now = to_seconds(t);
        let positions: Vec<Position> = (0..self.vehicles.len())
            .map(|i| self.position_of(i, t))
            .collect();
        let sigma = self.config.position_noise_sigma;
        let noise = (sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("valid sigma"));
        let range = self.config.transmission_range;
        let loss = self.config.delivery_loss_probability;
        let mut delivered = 0u64;
        for s in 0..positions.len() {
            for r in 0..positions.len() {
                if r == s || !deliver(&positions[s], &positions[r], range, loss, &mut self.rng_beacon)
                {
                    continue;
                }
                // The receiver only estimates where the sender is.
                let mut seen = positions[s];
                if let Some(n) = &noise {
                    seen.x += n.sample(&mut self.rng_noise);
                    seen.y += n.sample(&mut self.rng_noise);
                }
                let m = &self.motions[s];
                let beacon = Beacon {
                    sender: VehicleId(s as u32),
                    position: seen,
                    speed: m.speed,
                    heading: m.heading(),
                    timestamp: now,
                };
                if self.vehicles[r].handle_beacon(beacon, now) {
                    delivered += 1;
                }
            }
        }
        self.log
            .push(LogRecord::new(t, LogKind::Beacon).detail(delivered.to_string()));
        let period = to_sim_time(self.config.beacon_interval.0).max(1);
        self.queue.schedule(t + period, Payload::BeaconRound);
    }

    fn hazard_spawn(&mut self, t: SimTime) {
        let now = to_seconds(t);
        let kind = HazardKind::ALL[self.rng_hazard.random_range(0..HazardKind::ALL.len())];
        let at = self.highway.random_point(&mut self.rng_hazard);
        let event_id = self.registry.spawn_hazard(kind, at, now);
        self.log.push(
            LogRecord::new(t, LogKind::Spawn)
                .event(event_id)
                .decision("genuine")
                .detail(kind.to_string()),
        );

        let mut witnesses: Vec<(f64, usize)> = (0..self.vehicles.len())
            .filter(|&i| !self.vehicles[i].kind.is_attacker())
            .map(|i| (self.position_of(i, t).distance_to(&at), i))
            .collect();
        witnesses.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, i) in witnesses.iter().take(HAZARD_WITNESSES) {
            let w = Warning {
                sender: VehicleId(i as u32),
                event_id,
                event_kind: kind,
                event_position: at,
                timestamp: now,
            };
            self.emit(t, w);
        }
        self.schedule_hazard(t);
    }

    fn attacker_emit_at(&mut self, i: usize, t: SimTime) {
        let VehicleKind::Attacker(profile) = self.vehicles[i].kind else {
            return;
        };
        let before = self.registry.len() as u64;
        let position = self.position_of(i, t);
        let mut surface = AttackSurface {
            registry: &mut self.registry,
            highway: self.highway,
            transmission_range: self.config.transmission_range,
            plausibility_radius: self.config.transmission_range,
            corroboration_tolerance: self.config.corroboration_tolerance,
            contradicted: &mut self.contradicted[i],
        };
        let warnings = attacker_emit(
            &self.vehicles[i],
            position,
            profile,
            to_seconds(t),
            &mut self.rng_attackers[i],
            &mut surface,
        );
        for id in before..self.registry.len() as u64 {
            let e = self.registry.get(EventId(id)).expect("just registered");
            self.log.push(
                LogRecord::new(t, LogKind::Spawn)
                    .sender(vref(i))
                    .event(EventId(id))
                    .decision("fabricated")
                    .detail(e.kind.to_string()),
            );
        }
        for w in warnings {
            self.emit(t, w);
        }
    }

    fn attacker_fire(&mut self, i: usize, t: SimTime) {
        self.attacker_emit_at(i, t);
        self.schedule_attacker(i, t);
    }

    fn emit(&mut self, t: SimTime, warning: Warning) {
        let s = warning.sender.0 as usize;
        let truth = self
            .registry
            .is_truthful(&warning, self.config.corroboration_tolerance)
            .expect("every warning refers to a registered event");
        self.log.push(
            LogRecord::new(t, LogKind::Emit)
                .sender(vref(s))
                .event(warning.event_id)
                .decision(truth.to_string())
                .detail(warning.event_kind.to_string()),
        );
        let from = self.position_of(s, t);
        for r in 0..self.vehicles.len() {
            if r == s {
                continue;
            }
            let to = self.position_of(r, t);
            if deliver(
                &from,
                &to,
                self.config.transmission_range,
                self.config.delivery_loss_probability,
                &mut self.rng_warning,
            ) {
                self.queue.schedule(
                    t + DELIVERY_LATENCY,
                    Payload::DeliverWarning {
                        receiver: r,
                        warning: warning.clone(),
                        distance: from.distance_to(&to),
                    },
                );
            }
        }
    }

    fn deliver_warning(
        &mut self,
        t: SimTime,
        r: usize,
        warning: Warning,
        distance: f64,
    ) -> Result<(), SimError> {
        let now = to_seconds(t);
        let truth = self
            .registry
            .is_truthful(&warning, self.config.corroboration_tolerance)
            .expect("registered event");
        let sender = warning.sender;
        let event_id = warning.event_id;
        let started = self.timing.then(Instant::now);
        let (disposition, path, resolved, reports) = match self.pipeline {
            Pipeline::AcceptAll => (Some(accept_all(&warning)), "accept-all", vec![], vec![]),
            Pipeline::Irs => {
                let res = self.vehicles[r].handle_warning(warning, now);
                (res.disposition, path_name(res.path), res.resolved, res.reports)
            }
        };
        let latency_ns = started.map_or(0, |s| s.elapsed().as_nanos() as u64);

        let mut rec = LogRecord::new(t, LogKind::Deliver)
            .sender(NodeRef::Vehicle(sender))
            .receiver(vref(r))
            .event(event_id);
        match disposition {
            Some(d) => {
                self.decisions.record_decision(DecisionRecord {
                    time: now,
                    receiver: VehicleId(r as u32),
                    sender,
                    event_id,
                    ground_truth: truth,
                    decision: d,
                    sender_receiver_distance: Some(distance),
                    pipeline_latency_ns: latency_ns,
                })?;
                rec = rec
                    .decision(disposition_name(d))
                    .detail(format!("truth={truth};dist={distance};path={path}"));
            }
            None => rec = rec.decision("duplicate").detail(format!("path={path}")),
        }
        self.log.push(rec);

        self.apply_resolutions(t, r, &resolved)?;
        for report in reports {
            self.send_report(t, r, report);
        }
        self.schedule_expiry(r);

        if let VehicleKind::Attacker(AttackerProfile::ConflictingInfo) = self.vehicles[r].kind {
            self.attacker_emit_at(r, t);
        }
        Ok(())
    }

    fn apply_resolutions(
        &mut self,
        t: SimTime,
        r: usize,
        resolved: &[Resolution],
    ) -> Result<(), SimError> {
        for res in resolved {
            let key = DecisionKey {
                receiver: VehicleId(r as u32),
                event_id: res.event_id,
                sender: res.sender,
            };
            self.decisions.resolve(key, res.disposition)?;
            self.log.push(
                LogRecord::new(t, LogKind::Resolve)
                    .sender(NodeRef::Vehicle(res.sender))
                    .receiver(vref(r))
                    .event(res.event_id)
                    .decision(disposition_name(res.disposition)),
            );
        }
        Ok(())
    }

    fn schedule_expiry(&mut self, r: usize) {
        let Some(due) = self.vehicles[r].next_expiry() else {
            return;
        };
        // Expiry needs strictly more than the TTL to have passed.
        let at = to_sim_time(due) + 1;
        if self.expiry_at[r].is_none_or(|cur| at < cur) {
            self.expiry_at[r] = Some(at);
            self.queue.schedule(at, Payload::Expire(r));
        }
    }

    fn expire(&mut self, t: SimTime, r: usize) -> Result<(), SimError> {
        if self.expiry_at[r] == Some(t) {
            self.expiry_at[r] = None;
        }
        let out = self.vehicles[r].expire_pending(to_seconds(t));
        self.apply_resolutions(t, r, &out.resolved)?;
        for report in out.reports {
            self.send_report(t, r, report);
        }
        self.schedule_expiry(r);
        Ok(())
    }

    /// Sends a report to the closest RSU whose coverage includes the reporter.
    fn send_report(&mut self, t: SimTime, r: usize, report: MisbehaviorReport) {
        let at = self.position_of(r, t);
        let target = self
            .rsus
            .iter()
            .enumerate()
            .filter(|(_, rsu)| rsu.covers(&at))
            .min_by(|a, b| {
                a.1.position
                    .distance_to(&at)
                    .total_cmp(&b.1.position.distance_to(&at))
            })
            .map(|(k, rsu)| (k, rsu.position, rsu.coverage_radius));
        let delivered = target.filter(|&(_, pos, radius)| {
            deliver(
                &at,
                &pos,
                radius,
                self.config.delivery_loss_probability,
                &mut self.rng_control,
            )
        });
        let base = LogRecord::new(t, LogKind::Report)
            .sender(vref(r))
            .event(report.event_id)
            .detail(report.accused.to_string());
        match delivered {
            Some((k, _, _)) => {
                self.log.push(base.receiver(NodeRef::Rsu(RsuId(k as u32))));
                self.queue
                    .schedule(t + DELIVERY_LATENCY, Payload::DeliverReport { rsu: k, report });
            }
            None => {
                let mut rec = base;
                rec.kind = LogKind::ReportDropped;
                self.log.push(rec);
            }
        }
    }

    fn deliver_report(&mut self, t: SimTime, k: usize, report: MisbehaviorReport) {
        let outcome = self.rsus[k].rsu_handle_report(&report, to_seconds(t));
        self.log.push(
            LogRecord::new(t, LogKind::RsuReport)
                .sender(NodeRef::Vehicle(report.reporter))
                .receiver(NodeRef::Rsu(RsuId(k as u32)))
                .event(report.event_id)
                .decision(outcome_name(&outcome))
                .detail(report.accused.to_string()),
        );
    }

    fn rsu_tick(&mut self, t: SimTime) {
        let now = to_seconds(t);
        for k in 0..self.rsus.len() {
            let out = self.rsus[k].rsu_tick(now);
            for b in &out.broadcasts {
                let (pos, radius) = (self.rsus[k].position, self.rsus[k].coverage_radius);
                let mut installed = 0u32;
                for i in 0..self.vehicles.len() {
                    let at = self.position_of(i, t);
                    if deliver(
                        &pos,
                        &at,
                        radius,
                        self.config.delivery_loss_probability,
                        &mut self.rng_control,
                    ) && matches!(
                        self.vehicles[i].handle_rrl_broadcast(b),
                        RrlUpdate::Installed { .. }
                    ) {
                        installed += 1;
                    }
                }
                self.log.push(
                    LogRecord::new(t, LogKind::Broadcast)
                        .sender(NodeRef::Rsu(b.issuer))
                        .decision(b.version.to_string())
                        .detail(installed.to_string()),
                );
            }
            for f in out.forwards {
                self.log.push(
                    LogRecord::new(t, LogKind::Forward)
                        .sender(NodeRef::Rsu(f.from))
                        .receiver(NodeRef::Rsu(f.to))
                        .detail(f.entries.len().to_string()),
                );
                self.queue
                    .schedule(t + DELIVERY_LATENCY, Payload::DeliverForward(f));
            }
        }
        let period = to_sim_time(self.config.broadcast_period).max(1);
        self.queue.schedule(t + period, Payload::RsuTick);
    }
}
