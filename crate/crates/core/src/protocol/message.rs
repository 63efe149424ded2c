use std::fmt;

use serde::{Deserialize, Serialize};

use crate::reputation::{Points, ReputationRecord, RsuId, VehicleId};

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance_to(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(pub u64);

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HazardKind {
    Crash,
    Ice,
    SuddenBrake,
}

impl HazardKind {
    pub const ALL: [HazardKind; 3] = [HazardKind::Crash, HazardKind::Ice, HazardKind::SuddenBrake];

    pub(crate) fn tag(self) -> u8 {
        match self {
            HazardKind::Crash => 0,
            HazardKind::Ice => 1,
            HazardKind::SuddenBrake => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.get(usize::from(tag)).copied()
    }
}

impl fmt::Display for HazardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HazardKind::Crash => "crash",
            HazardKind::Ice => "ice",
            HazardKind::SuddenBrake => "sudden-brake",
        })
    }
}

/// Periodic status message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beacon {
    pub sender: VehicleId,
    pub position: Position,
    pub speed: f64,
    /// Unit vector of travel direction.
    pub heading: (f64, f64),
    pub timestamp: f64,
}

/// Event-driven hazard warning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub sender: VehicleId,
    pub event_id: EventId,
    pub event_kind: HazardKind,
    pub event_position: Position,
    pub timestamp: f64,
}

/// Vehicle-to-RSU accusation. Signing is modeled by `signature_valid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisbehaviorReport {
    pub reporter: VehicleId,
    pub accused: VehicleId,
    pub event_id: EventId,
    pub timestamp: f64,
    pub signature_valid: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RrlEntry {
    pub vehicle: VehicleId,
    pub points: Points,
    pub misbehavior_points: u32,
}

impl From<&ReputationRecord> for RrlEntry {
    fn from(r: &ReputationRecord) -> Self {
        RrlEntry {
            vehicle: r.vehicle,
            points: r.points,
            misbehavior_points: r.misbehavior_points,
        }
    }
}

impl RrlEntry {
    pub fn to_record(self, now: f64) -> ReputationRecord {
        ReputationRecord {
            vehicle: self.vehicle,
            points: self.points,
            misbehavior_points: self.misbehavior_points,
            last_update: now,
        }
    }
}

/// Signed snapshot of an RSU's reputation list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrlBroadcast {
    pub issuer: RsuId,
    pub version: u64,
    pub entries: Vec<RrlEntry>,
    pub timestamp: f64,
    pub signature_valid: bool,
}

/// Misbehaving-vehicle subset handed from one RSU to the next one along
/// the direction of travel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsuForward {
    pub from: RsuId,
    pub to: RsuId,
    pub entries: Vec<RrlEntry>,
    pub timestamp: f64,
}

/// The four over-the-air payloads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Message {
    Beacon(Beacon),
    Warning(Warning),
    MisbehaviorReport(MisbehaviorReport),
    RrlBroadcast(RrlBroadcast),
}

impl From<Beacon> for Message {
    fn from(m: Beacon) -> Self {
        Message::Beacon(m)
    }
}

impl From<Warning> for Message {
    fn from(m: Warning) -> Self {
        Message::Warning(m)
    }
}

impl From<MisbehaviorReport> for Message {
    fn from(m: MisbehaviorReport) -> Self {
        Message::MisbehaviorReport(m)
    }
}

impl From<RrlBroadcast> for Message {
    fn from(m: RrlBroadcast) -> Self {
        Message::RrlBroadcast(m)
    }
}
