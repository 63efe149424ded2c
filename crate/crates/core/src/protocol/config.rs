use serde::{Deserialize, Serialize};

use crate::reputation::{Points, DEFAULT_INITIAL_POINTS};

/// Timing and tolerance knobs shared by vehicles and RSUs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Seconds a lone, unsure warning waits for corroboration.
    pub pending_ttl: f64,
    /// Seconds without a beacon before a neighbor is dropped.
    pub neighbor_ttl: f64,
    /// Seconds an RSU keeps a single unconfirmed accusation.
    pub suspicion_ttl: f64,
    /// Seconds between RRL publications.
    pub broadcast_period: f64,
    /// A sender farther than this from the event it reports is not credible.
    pub plausibility_radius: f64,
    /// Two warnings for one event agree if their positions are within this.
    pub corroboration_tolerance: f64,
    /// Accept Top senders only when Near (instead of Near or Middle).
    pub strict_heuristic: bool,
    /// Points for a vehicle when the local list is empty, and for new RRL rows.
    pub initial_points: Points,
    /// Valid event coordinates; positions outside are malformed.
    pub grid: Option<(f64, f64)>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            pending_ttl: 2.0,
            neighbor_ttl: 1.5,
            suspicion_ttl: 30.0,
            broadcast_period: 1.0,
            plausibility_radius: 300.0,
            corroboration_tolerance: 20.0,
            strict_heuristic: false,
            initial_points: DEFAULT_INITIAL_POINTS,
            grid: None,
        }
    }
}
