use std::collections::BTreeMap;

use crate::protocol::{EventId, HazardKind, Position, Warning};
use crate::reputation::VehicleId;

#[derive(Debug, Clone, PartialEq)]
pub struct RegisteredEvent {
    /// `true` for a hazard that exists, `false` for one an attacker made up.
    pub genuine: bool,
    pub kind: HazardKind,
    pub position: Position,
    pub spawn_time: f64,
    pub fabricated_by: Option<VehicleId>,
}

/// Ground truth for every event any warning can refer to.
#[derive(Debug, Clone, Default)]
pub struct EventRegistry {
    events: BTreeMap<EventId, RegisteredEvent>,
    next_id: u64,
}

impl EventRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    fn register(&mut self, event: RegisteredEvent) -> EventId {
        let id = EventId(self.next_id);
        self.next_id += 1;
        self.events.insert(id, event);
        id
    }

    pub fn spawn_hazard(&mut self, kind: HazardKind, position: Position, t: f64) -> EventId {
        self.register(RegisteredEvent {
            genuine: true,
            kind,
            position,
            spawn_time: t,
            fabricated_by: None,
        })
    }

    pub fn fabricate(
        &mut self,
        by: VehicleId,
        kind: HazardKind,
        position: Position,
        t: f64,
    ) -> EventId {
        self.register(RegisteredEvent {
            genuine: false,
            kind,
            position,
            spawn_time: t,
            fabricated_by: Some(by),
        })
    }

    pub fn get(&self, id: EventId) -> Option<&RegisteredEvent> {
        self.events.get(&id)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Whether the warning tells the truth: the event exists and the
    /// warning agrees with it on kind and (within `tolerance`) position.
    /// `None` if the event id is unknown.
    pub fn is_truthful(&self, w: &Warning, tolerance: f64) -> Option<bool> {
        let e = self.events.get(&w.event_id)?;
        Some(
            e.genuine
                && e.kind == w.event_kind
                && e.position.distance_to(&w.event_position) <= tolerance,
        )
    }

    /// Genuine hazards spawned in `[now - window, now]` within `radius` of `around`.
    pub fn live_genuine_near(
        &self,
        around: &Position,
        radius: f64,
        now: f64,
        window: f64,
    ) -> Vec<(EventId, &RegisteredEvent)> {
        self.events
            .iter()
            .rev()
            .take_while(|(_, e)| now - e.spawn_time <= window)
            .filter(|(_, e)| {
                e.genuine && e.spawn_time <= now && e.position.distance_to(around) <= radius
            })
            .map(|(id, e)| (*id, e))
            .collect()
    }
}
