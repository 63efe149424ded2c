use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Simulation time in integer microseconds.
pub type SimTime = u64;

pub const MICROS_PER_SECOND: f64 = 1_000_000.0;

pub fn to_sim_time(seconds: f64) -> SimTime {
    (seconds * MICROS_PER_SECOND).round().max(0.0) as SimTime
}

pub fn to_seconds(t: SimTime) -> f64 {
    t as f64 / MICROS_PER_SECOND
}

/// Coarse event classes, used for logging and inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventClass {
    Emit,
    Deliver,
    Tick,
    HazardSpawn,
    Expire,
}

struct Entry<P> {
    time: SimTime,
    sequence: u64,
    payload: P,
}

impl<P> PartialEq for Entry<P> {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.sequence == other.sequence
    }
}

impl<P> Eq for Entry<P> {}

impl<P> PartialOrd for Entry<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<P> Ord for Entry<P> {
    // Reversed so the max-heap pops the earliest (time, sequence) first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .cmp(&self.time)
            .then_with(|| other.sequence.cmp(&self.sequence))
    }
}

/// Priority queue ordered by `(time, insertion sequence)`.
pub struct EventQueue<P> {
    heap: BinaryHeap<Entry<P>>,
    next_sequence: u64,
    now: SimTime,
}

impl<P> Default for EventQueue<P> {
    fn default() -> Self {
        EventQueue {
            heap: BinaryHeap::new(),
            next_sequence: 0,
            now: 0,
        }
    }
}

impl<P> EventQueue<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Schedules `payload` at `time`. Times in the past are clamped to now.
    pub fn schedule(&mut self, time: SimTime, payload: P) -> u64 {
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        self.heap.push(Entry {
            time: time.max(self.now),
            sequence,
            payload,
        });
        sequence
    }

    pub fn peek_time(&self) -> Option<SimTime> {
        self.heap.peek().map(|e| e.time)
    }

    pub fn pop(&mut self) -> Option<(SimTime, u64, P)> {
        let e = self.heap.pop()?;
        debug_assert!(e.time >= self.now);
        self.now = e.time;
        Some((e.time, e.sequence, e.payload))
    }
}
