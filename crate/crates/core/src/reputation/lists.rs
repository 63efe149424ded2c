use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    classify_trust, compute_trust_bands, Points, RrlStanding, TrustBands, TrustLevel, VehicleId,
    DEFAULT_INITIAL_POINTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RsuId(pub u32);

impl fmt::Display for RsuId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReputationRecord {
    pub vehicle: VehicleId,
    pub points: Points,
    pub misbehavior_points: u32,
    pub last_update: f64,
}

impl ReputationRecord {
    pub fn new(vehicle: VehicleId, points: Points, now: f64) -> Self {
        ReputationRecord {
            vehicle,
            points,
            misbehavior_points: 0,
            last_update: now,
        }
    }
}

/// Adds `delta` to the record's points, flooring at zero.
pub fn apply_point_delta(record: &ReputationRecord, delta: i64) -> ReputationRecord {
    let raw = i64::from(record.points).saturating_add(delta);
    ReputationRecord {
        points: raw.clamp(0, i64::from(Points::MAX)) as Points,
        ..record.clone()
    }
}

fn bands_of(entries: &BTreeMap<VehicleId, ReputationRecord>) -> Option<TrustBands> {
    compute_trust_bands(entries.values().map(|r| r.points)).ok()
}

/// A vehicle's private ledger, built from what it has observed first-hand.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LocalReputationList {
    entries: BTreeMap<VehicleId, ReputationRecord>,
}

impl LocalReputationList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: VehicleId) -> Option<&ReputationRecord> {
        self.entries.get(&id)
    }

    pub fn points(&self, id: VehicleId) -> Option<Points> {
        self.entries.get(&id).map(|r| r.points)
    }

    pub fn insert(&mut self, record: ReputationRecord) {
        self.entries.insert(record.vehicle, record);
    }

    pub fn records(&self) -> impl Iterator<Item = &ReputationRecord> {
        self.entries.values()
    }

    pub fn bands(&self) -> Option<TrustBands> {
        bands_of(&self.entries)
    }

    /// Starting points for a vehicle not yet in the list: the floor of the
    /// midpoint of the current range, or `fallback` when the list is empty.
    pub fn entry_points(&self, fallback: Points) -> Points {
        match self.bands() {
            Some(b) => {
                ((u64::from(b.min_points) + u64::from(b.max_points)) / 2) as Points
            }
            None => fallback,
        }
    }

    /// Returns the record for `id`, creating it at [`Self::entry_points`]
    /// if the vehicle is unknown.
    pub fn ensure(&mut self, id: VehicleId, fallback: Points, now: f64) -> &mut ReputationRecord {
        if !self.entries.contains_key(&id) {
            let points = self.entry_points(fallback);
            self.entries.insert(id, ReputationRecord::new(id, points, now));
        }
        self.entries.get_mut(&id).expect("inserted above")
    }

    /// Applies a floored point change, creating the entry first if needed.
    pub fn adjust(&mut self, id: VehicleId, delta: i64, now: f64) -> Points {
        let rec = self.ensure(id, DEFAULT_INITIAL_POINTS, now);
        *rec = apply_point_delta(rec, delta);
        rec.last_update = now;
        rec.points
    }

    pub fn trust_level(&self, id: VehicleId) -> Option<TrustLevel> {
        let points = self.points(id)?;
        Some(classify_trust(points, &self.bands()?))
    }

    /// Records ordered by points, highest first (ties by id).
    pub fn ranked(&self) -> Vec<&ReputationRecord> {
        let mut v: Vec<_> = self.entries.values().collect();
        v.sort_by(|a, b| b.points.cmp(&a.points).then(a.vehicle.cmp(&b.vehicle)));
        v
    }
}

/// The RSU's network-wide ledger. Points are stored with the same
/// orientation as the LRL (higher is better); the published view with
/// low-reputation vehicles on top is [`RsuReputationList::ranked`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsuReputationList {
    pub issuer: RsuId,
    pub version: u64,
    entries: BTreeMap<VehicleId, ReputationRecord>,
}

impl RsuReputationList {
    pub fn new(issuer: RsuId) -> Self {
        RsuReputationList {
            issuer,
            version: 0,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_records<I>(issuer: RsuId, version: u64, records: I) -> Self
    where
        I: IntoIterator<Item = ReputationRecord>,
    {
        RsuReputationList {
            issuer,
            version,
            entries: records.into_iter().map(|r| (r.vehicle, r)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: VehicleId) -> bool {
        self.entries.contains_key(&id)
    }

    pub fn get(&self, id: VehicleId) -> Option<&ReputationRecord> {
        self.entries.get(&id)
    }

    pub fn records(&self) -> impl Iterator<Item = &ReputationRecord> {
        self.entries.values()
    }

    pub fn remove(&mut self, id: VehicleId) -> Option<ReputationRecord> {
        self.entries.remove(&id)
    }

    pub fn entry(&mut self, id: VehicleId, initial: Points, now: f64) -> &mut ReputationRecord {
        self.entries
            .entry(id)
            .or_insert_with(|| ReputationRecord::new(id, initial, now))
    }

    pub fn insert(&mut self, record: ReputationRecord) {
        self.entries.insert(record.vehicle, record);
    }

    pub fn bands(&self) -> Option<TrustBands> {
        bands_of(&self.entries)
    }

    /// Standing of `id` under bands computed over the whole RRL.
    pub fn standing(&self, id: VehicleId) -> RrlStanding {
        self.standing_with(id, self.bands())
    }

    /// Same as [`Self::standing`] with precomputed bands.
    pub fn standing_with(&self, id: VehicleId, bands: Option<TrustBands>) -> RrlStanding {
        match (self.entries.get(&id), bands) {
            (Some(rec), Some(b)) => RrlStanding::from_rrl_level(classify_trust(rec.points, &b)),
            _ => RrlStanding::Clear,
        }
    }

    /// Vehicles with at least one confirmed misbehavior.
    pub fn misbehaving(&self) -> impl Iterator<Item = &ReputationRecord> {
        self.entries.values().filter(|r| r.misbehavior_points > 0)
    }

    /// Records ordered by points, lowest first (ties by id).
    pub fn ranked(&self) -> Vec<&ReputationRecord> {
        let mut v: Vec<_> = self.entries.values().collect();
        v.sort_by(|a, b| a.points.cmp(&b.points).then(a.vehicle.cmp(&b.vehicle)));
        v
    }
}

/// True when fewer than half of the current neighbors appear in the RRL.
pub fn rrl_is_stale<'a, I>(rrl: &RsuReputationList, neighbors: I) -> bool
where
    I: IntoIterator<Item = &'a VehicleId>,
{
    let unique: HashSet<VehicleId> = neighbors.into_iter().copied().collect();
    let present = unique.iter().filter(|id| rrl.contains(**id)).count();
    2 * present < unique.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rrl_with(ids: &[u32]) -> RsuReputationList {
        RsuReputationList::from_records(
            RsuId(0),
            1,
            ids.iter().map(|&i| ReputationRecord::new(VehicleId(i), 5, 0.0)),
        )
    }

    #[test]
    fn point_delta_floor() {
        let r = ReputationRecord::new(VehicleId(1), 1, 0.0);
        assert_eq!(apply_point_delta(&r, -1).points, 0);
        let r = ReputationRecord::new(VehicleId(1), 13, 0.0);
        assert_eq!(apply_point_delta(&r, 1).points, 14);
        let r = ReputationRecord::new(VehicleId(1), 0, 0.0);
        assert_eq!(apply_point_delta(&r, -1).points, 0);
    }

    #[test]
    fn point_delta_keeps_misbehavior() {
        let mut r = ReputationRecord::new(VehicleId(1), 3, 0.0);
        r.misbehavior_points = 2;
        assert_eq!(apply_point_delta(&r, -5).misbehavior_points, 2);
    }

    #[test]
    fn staleness_examples() {
        let neighbors: Vec<VehicleId> = (0..10).map(VehicleId).collect();
        assert!(rrl_is_stale(&rrl_with(&[0, 1, 2, 3]), &neighbors));
        assert!(!rrl_is_stale(&rrl_with(&[0, 1, 2]), &[]));
        let six: Vec<VehicleId> = (0..6).map(VehicleId).collect();
        assert!(!rrl_is_stale(&rrl_with(&[0, 1, 2]), &six));
    }

    #[test]
    fn lrl_ordering_and_entry_points() {
        let mut lrl = LocalReputationList::new();
        assert_eq!(lrl.entry_points(5), 5);
        for (id, p) in [(26, 13), (2, 7), (14, 4), (23, 1)] {
            lrl.insert(ReputationRecord::new(VehicleId(id), p, 0.0));
        }
        let order: Vec<u32> = lrl.ranked().iter().map(|r| r.vehicle.0).collect();
        assert_eq!(order, vec![26, 2, 14, 23]);
        // floor((1 + 13) / 2)
        assert_eq!(lrl.entry_points(5), 7);
        assert_eq!(lrl.trust_level(VehicleId(2)), Some(TrustLevel::Medium));
    }

    #[test]
    fn rrl_ranked_ascending_and_standing() {
        let mut rrl = rrl_with(&[]);
        for (id, p) in [(26, 13), (2, 7), (14, 1)] {
            rrl.insert(ReputationRecord::new(VehicleId(id), p, 0.0));
        }
        let order: Vec<u32> = rrl.ranked().iter().map(|r| r.vehicle.0).collect();
        assert_eq!(order, vec![14, 2, 26]);
        assert_eq!(rrl.standing(VehicleId(14)), RrlStanding::Flagged);
        assert_eq!(rrl.standing(VehicleId(2)), RrlStanding::Watch);
        assert_eq!(rrl.standing(VehicleId(26)), RrlStanding::Clear);
        assert_eq!(rrl.standing(VehicleId(99)), RrlStanding::Clear);
    }
}
