//! Reputation arithmetic shared by vehicles and roadside units.
//!
//! Everything in here is a pure function of its inputs: band computation
//! over reputation points and sender-to-event heuristics, the LRL/RRL
//! decision matrix, the RRL staleness predicate and floored point updates.

mod bands;
mod decision;
mod lists;

pub use bands::{
    classify_heuristic, classify_trust, compute_heuristic_bands, compute_trust_bands,
    heuristic_from_distance, HeuristicBand, HeuristicBands, TrustBands, TrustLevel,
};
pub use decision::{decide_trust, RrlStanding, TrustDecision};
pub use lists::{
    apply_point_delta, rrl_is_stale, LocalReputationList, ReputationRecord, RsuId,
    RsuReputationList,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reputation points assigned to a vehicle. Never negative.
pub type Points = u32;

/// Points a vehicle starts with when nothing else is known about the network.
pub const DEFAULT_INITIAL_POINTS: Points = 5;

/// Identifier of a vehicle, unique within a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VehicleId(pub u32);

impl fmt::Display for VehicleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReputationError {
    #[error("no reputation data")]
    NoReputationData,
    #[error("no neighbor heuristics")]
    NoNeighborHeuristics,
    #[error("heuristic must be a finite value >= 0, got {0}")]
    InvalidHeuristic(f64),
    #[error("distance must be a finite value >= 0, got {0}")]
    InvalidDistance(f64),
}
