//! Vehicle and roadside-unit state machines.
//!
//! A [`VehicleNode`] decides whether to believe incoming hazard warnings
//! and files [`MisbehaviorReport`]s; an [`RsuNode`] turns reports into
//! network-wide reputation and publishes it. Nodes are single-owner state
//! machines driven one handler call at a time.

mod config;
mod message;
mod neighbors;
mod rsu;
mod vehicle;
pub mod wire;

pub use config::ProtocolConfig;
pub use message::{
    Beacon, EventId, HazardKind, Message, MisbehaviorReport, Position, RrlBroadcast, RrlEntry,
    RsuForward, Warning,
};
pub use neighbors::{NeighborEntry, NeighborTable};
pub use rsu::{ReportIgnored, ReportOutcome, RsuNode, RsuTickOutput, Suspicion};
pub use vehicle::{
    Assessment, DecisionPath, Disposition, ExpiryResult, PendingState, PendingWarning,
    Resolution, RrlUpdate, VehicleKind, VehicleNode, WarningResult,
};
pub use wire::WireError;
