use std::collections::BTreeMap;

use super::message::Beacon;
use crate::reputation::VehicleId;

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborEntry {
    pub beacon: Beacon,
    pub last_seen: f64,
}

/// Latest beacon per nearby vehicle.
///
/// Eviction runs at most once per distinct `now`, so a burst of beacons
/// delivered at the same instant costs a single sweep.
#[derive(Debug, Clone, Default)]
pub struct NeighborTable {
    entries: BTreeMap<VehicleId, NeighborEntry>,
    last_sweep: Option<f64>,
}

impl NeighborTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: VehicleId) -> Option<&NeighborEntry> {
        self.entries.get(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &VehicleId> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VehicleId, &NeighborEntry)> {
        self.entries.iter()
    }

    pub fn observe(&mut self, beacon: Beacon, now: f64) {
        self.entries.insert(
            beacon.sender,
            NeighborEntry {
                beacon,
                last_seen: now,
            },
        );
    }

    /// Drops entries not refreshed within `ttl` seconds.
    pub fn evict_expired(&mut self, now: f64, ttl: f64) {
        if self.last_sweep == Some(now) {
            return;
        }
        self.last_sweep = Some(now);
        self.entries.retain(|_, e| now - e.last_seen <= ttl);
    }
}
