use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::config::ScenarioError;
use super::mobility::Highway;
use super::registry::EventRegistry;
use crate::protocol::{EventId, HazardKind, Position, VehicleNode, Warning};

/// What an attacking vehicle does.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AttackerProfile {
    /// Invents hazards close to itself, `rate` warnings per second.
    FalseWarning { rate: f64 },
    /// Repeats genuine hazards it hears about with the wrong kind or place.
    ConflictingInfo,
    /// Invents hazards beyond radio range of itself, `rate` per second.
    FarEventClaim { rate: f64 },
}

impl Default for AttackerProfile {
    fn default() -> Self {
        AttackerProfile::FalseWarning { rate: 0.1 }
    }
}

impl AttackerProfile {
    pub fn rate(&self) -> Option<f64> {
        match *self {
            AttackerProfile::FalseWarning { rate } | AttackerProfile::FarEventClaim { rate } => {
                Some(rate)
            }
            AttackerProfile::ConflictingInfo => None,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), ScenarioError> {
        match self.rate() {
            Some(r) if !(r.is_finite() && r >= 0.0) => Err(ScenarioError::InvalidField {
                field: "attacker_profile",
                reason: format!("rate must be a finite value >= 0, got {r}"),
            }),
            _ => Ok(()),
        }
    }

    /// Delay until the next spontaneous emission, or `None` for profiles
    /// that only react to other traffic (or have a zero rate).
    pub fn next_fire_delay<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<f64> {
        let rate = self.rate().filter(|r| *r > 0.0)?;
        Some(Exp::new(rate).expect("positive rate").sample(rng))
    }
}

/// Distance band, in meters ahead of or behind the attacker, where a
/// fabricated nearby hazard is placed.
pub const NEARBY_CLAIM_RANGE: (f64, f64) = (10.0, 60.0);
/// How long after spawning a genuine hazard is still worth contradicting.
pub const CONFLICT_WINDOW: f64 = 5.0;

/// What attackers can see and touch when they act.
pub struct AttackSurface<'a> {
    pub registry: &'a mut EventRegistry,
    pub highway: Highway,
    pub transmission_range: f64,
    pub plausibility_radius: f64,
    pub corroboration_tolerance: f64,
    /// Genuine events this attacker has already contradicted.
    pub contradicted: &'a mut BTreeSet<EventId>,
}

/// `x + offset`, mirrored to `x - offset` if that would leave the road, so
/// a nearby point stays nearby instead of wrapping to the far end.
fn along_road(highway: &Highway, x: f64, offset: f64) -> f64 {
    let target = x + offset;
    if (0.0..highway.length).contains(&target) {
        target
    } else {
        highway.wrap(x - offset)
    }
}

fn random_kind<R: Rng + ?Sized>(rng: &mut R) -> HazardKind {
    HazardKind::ALL[rng.random_range(0..HazardKind::ALL.len())]
}

/// Warnings the attacker sends at `now`.
///
/// Fabricated events are registered as not genuine. A conflicting copy of
/// a genuine event changes either its kind or moves it by more than the
/// corroboration tolerance.
pub fn attacker_emit<R: Rng + ?Sized>(
    attacker: &VehicleNode,
    position: Position,
    profile: AttackerProfile,
    now: f64,
    rng: &mut R,
    surface: &mut AttackSurface<'_>,
) -> Vec<Warning> {
    let sender = attacker.id;
    match profile {
        AttackerProfile::FalseWarning { .. } => {
            let (lo, hi) = NEARBY_CLAIM_RANGE;
            let offset = rng.random_range(lo..hi) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let at = Position::new(along_road(&surface.highway, position.x, offset), position.y);
            let kind = random_kind(rng);
            let event_id = surface.registry.fabricate(sender, kind, at, now);
            vec![Warning {
                sender,
                event_id,
                event_kind: kind,
                event_position: at,
                timestamp: now,
            }]
        }
        AttackerProfile::FarEventClaim { .. } => {
            let len = surface.highway.length;
            let min = surface.plausibility_radius + 1.0;
            // On a ring road the farthest point is half the length away.
            let max = (len / 2.0).max(min + 1.0);
            let at = if max <= len / 2.0 {
                let d = rng.random_range(min..max);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                Position::new(surface.highway.wrap(position.x + sign * d), position.y)
            } else {
                // Road too short to be far along it: step off the road instead.
                Position::new(position.x, position.y + min)
            };
            let kind = random_kind(rng);
            let event_id = surface.registry.fabricate(sender, kind, at, now);
            vec![Warning {
                sender,
                event_id,
                event_kind: kind,
                event_position: at,
                timestamp: now,
            }]
        }
        AttackerProfile::ConflictingInfo => {
            let live: Vec<_> = surface
                .registry
                .live_genuine_near(&position, surface.transmission_range, now, CONFLICT_WINDOW)
                .into_iter()
                .filter(|(id, _)| !surface.contradicted.contains(id))
                .map(|(id, e)| (id, e.kind, e.position))
                .collect();
            let mut out = Vec::with_capacity(live.len());
            for (event_id, kind, at) in live.into_iter().rev() {
                surface.contradicted.insert(event_id);
                let (event_kind, event_position) = if rng.random_bool(0.5) {
                    let others: Vec<_> = HazardKind::ALL.iter().filter(|k| **k != kind).collect();
                    (*others[rng.random_range(0..others.len())], at)
                } else {
                    let shift = surface.corroboration_tolerance + rng.random_range(30.0..80.0);
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    (kind, Position::new(along_road(&surface.highway, at.x, sign * shift), at.y))
                };
                out.push(Warning {
                    sender,
                    event_id,
                    event_kind,
                    event_position,
                    timestamp: now,
                });
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{ProtocolConfig, VehicleKind};
    use crate::reputation::VehicleId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn attacker(profile: AttackerProfile) -> VehicleNode {
        VehicleNode::new(
            VehicleId(1),
            VehicleKind::Attacker(profile),
            ProtocolConfig::default(),
        )
    }

    #[test]
    fn far_claims_exceed_plausibility_radius() {
        let mut reg = EventRegistry::new();
        let mut seen = BTreeSet::new();
        let mut surface = AttackSurface {
            registry: &mut reg,
            highway: Highway::new((1000.0, 1000.0), 3),
            transmission_range: 300.0,
            plausibility_radius: 300.0,
            corroboration_tolerance: 20.0,
            contradicted: &mut seen,
        };
        let profile = AttackerProfile::FarEventClaim { rate: 1.0 };
        let node = attacker(profile);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..200 {
            let pos = Position::new(f64::from(i) * 5.0, 502.0);
            let w = attacker_emit(&node, pos, profile, 0.0, &mut rng, &mut surface);
            assert_eq!(w.len(), 1);
            // Ring distance along the road.
            let dx = (w[0].event_position.x - pos.x).abs();
            let ring = dx.min(1000.0 - dx);
            assert!(ring > 300.0, "claim only {ring} m away");
        }
        assert!(reg.get(EventId(0)).is_some_and(|e| !e.genuine));
    }

    #[test]
    fn conflicting_copy_breaks_tolerance() {
        let mut reg = EventRegistry::new();
        let pos = Position::new(400.0, 502.0);
        let real = reg.spawn_hazard(HazardKind::Crash, pos, 1.0);
        let mut seen = BTreeSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            seen.clear();
            let mut surface = AttackSurface {
                registry: &mut reg,
                highway: Highway::new((1000.0, 1000.0), 3),
                transmission_range: 300.0,
                plausibility_radius: 300.0,
                corroboration_tolerance: 20.0,
                contradicted: &mut seen,
            };
            let node = attacker(AttackerProfile::ConflictingInfo);
            let w = attacker_emit(
                &node,
                Position::new(450.0, 498.0),
                AttackerProfile::ConflictingInfo,
                1.05,
                &mut rng,
                &mut surface,
            );
            assert_eq!(w.len(), 1);
            assert_eq!(w[0].event_id, real);
            let differs = w[0].event_kind != HazardKind::Crash
                || w[0].event_position.distance_to(&pos) > 20.0;
            assert!(differs);
            assert_eq!(reg.is_truthful(&w[0], 20.0), Some(false));
        }
    }

    #[test]
    fn false_warning_is_nearby_and_fabricated() {
        let mut reg = EventRegistry::new();
        let mut seen = BTreeSet::new();
        let mut surface = AttackSurface {
            registry: &mut reg,
            highway: Highway::new((1000.0, 1000.0), 3),
            transmission_range: 300.0,
            plausibility_radius: 300.0,
            corroboration_tolerance: 20.0,
            contradicted: &mut seen,
        };
        let profile = AttackerProfile::default();
        let node = attacker(profile);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        // Includes spots near both ends of the road.
        for x in [500.0, 3.0, 997.0, 40.0, 960.0] {
            let pos = Position::new(x, 502.0);
            for _ in 0..20 {
                let w = attacker_emit(&node, pos, profile, 3.0, &mut rng, &mut surface);
                let d = w[0].event_position.distance_to(&pos);
                assert!((NEARBY_CLAIM_RANGE.0..NEARBY_CLAIM_RANGE.1).contains(&d), "{x}: {d}");
                assert_eq!(surface.registry.is_truthful(&w[0], 20.0), Some(false));
            }
        }
    }
}
