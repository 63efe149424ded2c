use serde::{Deserialize, Serialize};

use super::TrustLevel;

/// Where a vehicle sits in the RSU's list, seen from the receiver.
///
/// The RSU list is published with low-reputation vehicles on top, so
/// `Flagged` is the list's top band, `Watch` the middle and `Clear` the
/// bottom. Vehicles the RSU has never heard of are `Clear`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RrlStanding {
    Flagged,
    Watch,
    Clear,
}

impl RrlStanding {
    pub const ALL: [RrlStanding; 3] = [RrlStanding::Flagged, RrlStanding::Watch, RrlStanding::Clear];

    /// Maps a trust level computed over RRL points onto the inverted RRL view.
    pub fn from_rrl_level(level: TrustLevel) -> Self {
        match level {
            TrustLevel::Top => RrlStanding::Clear,
            TrustLevel::Medium => RrlStanding::Watch,
            TrustLevel::Low => RrlStanding::Flagged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrustDecision {
    Accept,
    Reject,
    Unsure,
}

/// Combined decision from the receiver's own view (LRL) and the network
/// view (RRL).
///
/// | LRL    | RRL     | decision |
/// |--------|---------|----------|
/// | Top    | Clear   | Accept   |
/// | Top    | Watch   | Accept   |
/// | Top    | Flagged | Reject   |
/// | Medium | Clear   | Accept   |
/// | Medium | Watch   | Unsure   |
/// | Medium | Flagged | Reject   |
/// | Low    | Clear   | Reject   |
/// | Low    | Watch   | Reject   |
/// | Low    | Flagged | Unsure   |
pub fn decide_trust(local: TrustLevel, global: RrlStanding) -> TrustDecision {
    use RrlStanding::*;
    use TrustDecision::*;
    use TrustLevel::*;

    match (local, global) {
        (Top, Clear) | (Top, Watch) => Accept,
        (Top, Flagged) => Reject,
        (Medium, Clear) => Accept,
        (Medium, Watch) => Unsure,
        (Medium, Flagged) => Reject,
        (Low, Clear) | (Low, Watch) => Reject,
        // Both views are negative here, yet the published matrix says unsure.
        (Low, Flagged) => Unsure,
    }
}
