//! Deterministic discrete-event highway simulation.
//!
//! A [`SimWorld`] owns the vehicles, RSUs, ground-truth registry and event
//! queue of one run. Runs are single-threaded; a given configuration and
//! seed always produce the same event log.

mod attacker;
mod config;
pub mod log;
mod mobility;
mod queue;
pub mod radio;
mod registry;
mod world;

pub use attacker::{
    attacker_emit, AttackSurface, AttackerProfile, CONFLICT_WINDOW, NEARBY_CLAIM_RANGE,
};
pub use config::{ScenarioConfig, ScenarioError};
pub use log::{EventLog, LogKind, LogParseError, LogRecord, NodeRef};
pub use mobility::{Direction, Highway, Motion, LANE_WIDTH};
pub use queue::{to_seconds, to_sim_time, EventClass, EventQueue, SimTime};
pub use radio::{deliver, derive_seed};
pub use registry::{EventRegistry, RegisteredEvent};
pub use world::{
    Pipeline, RunOutput, SimError, SimWorld, DELIVERY_LATENCY, HAZARD_WITNESSES,
};
