//! Canonical flat encoding of the over-the-air payloads.
//!
//! Layout: one tag byte, then the fields in declaration order. Integers are
//! little-endian (`VehicleId`/`RsuId`/points as `u32`, event ids and
//! versions as `u64`), meters, seconds and speeds are little-endian `f64`,
//! booleans are a single `0`/`1` byte and hazard kinds a single byte.
//! RRL entry lists are prefixed with a `u32` count.

use thiserror::Error;

use super::message::*;
use crate::reputation::{RsuId, VehicleId};

const TAG_BEACON: u8 = 1;
const TAG_WARNING: u8 = 2;
const TAG_REPORT: u8 = 3;
const TAG_RRL: u8 = 4;

/// Nominal on-air size of a safety message (beacon, warning).
pub const SAFETY_MESSAGE_BYTES: usize = 100;
/// Nominal on-air size of a non-safety message (report, RRL broadcast).
pub const NON_SAFETY_MESSAGE_BYTES: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("truncated payload: needed {needed} more bytes at offset {offset}")]
    Truncated { offset: usize, needed: usize },
    #[error("unknown message tag {0}")]
    UnknownTag(u8),
    #[error("invalid {field} byte {value}")]
    InvalidByte { field: &'static str, value: u8 },
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn bool(&mut self, v: bool) {
        self.u8(u8::from(v));
    }
    fn position(&mut self, p: Position) {
        self.f64(p.x);
        self.f64(p.y);
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], WireError> {
        let end = self.pos + N;
        let slice = self.buf.get(self.pos..end).ok_or_else(|| WireError::Truncated {
            offset: self.pos,
            needed: end - self.buf.len(),
        })?;
        self.pos = end;
        Ok(slice.try_into().expect("length checked"))
    }
    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take::<1>()?[0])
    }
    fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64, WireError> {
        Ok(u64::from_le_bytes(self.take()?))
    }
    fn f64(&mut self) -> Result<f64, WireError> {
        Ok(f64::from_le_bytes(self.take()?))
    }
    fn bool(&mut self) -> Result<bool, WireError> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            value => Err(WireError::InvalidByte {
                field: "bool",
                value,
            }),
        }
    }
    fn position(&mut self) -> Result<Position, WireError> {
        Ok(Position::new(self.f64()?, self.f64()?))
    }
}

impl Message {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer(Vec::with_capacity(64));
        match self {
            Message::Beacon(b) => {
                w.u8(TAG_BEACON);
                w.u32(b.sender.0);
                w.position(b.position);
                w.f64(b.speed);
                w.f64(b.heading.0);
                w.f64(b.heading.1);
                w.f64(b.timestamp);
            }
            Message::Warning(m) => {
                w.u8(TAG_WARNING);
                w.u32(m.sender.0);
                w.u64(m.event_id.0);
                w.u8(m.event_kind.tag());
                w.position(m.event_position);
                w.f64(m.timestamp);
            }
            Message::MisbehaviorReport(r) => {
                w.u8(TAG_REPORT);
                w.u32(r.reporter.0);
                w.u32(r.accused.0);
                w.u64(r.event_id.0);
                w.f64(r.timestamp);
                w.bool(r.signature_valid);
            }
            Message::RrlBroadcast(b) => {
                w.u8(TAG_RRL);
                w.u32(b.issuer.0);
                w.u64(b.version);
                w.u32(b.entries.len() as u32);
                for e in &b.entries {
                    w.u32(e.vehicle.0);
                    w.u32(e.points);
                    w.u32(e.misbehavior_points);
                }
                w.f64(b.timestamp);
                w.bool(b.signature_valid);
            }
        }
        w.0
    }

    pub fn decode(buf: &[u8]) -> Result<Message, WireError> {
        let mut r = Reader { buf, pos: 0 };
        let msg = match r.u8()? {
            TAG_BEACON => Message::Beacon(Beacon {
                sender: VehicleId(r.u32()?),
                position: r.position()?,
                speed: r.f64()?,
                heading: (r.f64()?, r.f64()?),
                timestamp: r.f64()?,
            }),
            TAG_WARNING => {
                let sender = VehicleId(r.u32()?);
                let event_id = EventId(r.u64()?);
                let tag = r.u8()?;
                let event_kind = HazardKind::from_tag(tag).ok_or(WireError::InvalidByte {
                    field: "hazard kind",
                    value: tag,
                })?;
                Message::Warning(Warning {
                    sender,
                    event_id,
                    event_kind,
                    event_position: r.position()?,
                    timestamp: r.f64()?,
                })
            }
            TAG_REPORT => Message::MisbehaviorReport(MisbehaviorReport {
                reporter: VehicleId(r.u32()?),
                accused: VehicleId(r.u32()?),
                event_id: EventId(r.u64()?),
                timestamp: r.f64()?,
                signature_valid: r.bool()?,
            }),
            TAG_RRL => {
                let issuer = RsuId(r.u32()?);
                let version = r.u64()?;
                let count = r.u32()? as usize;
                // Bound the allocation by what the buffer can actually hold.
                let mut entries = Vec::with_capacity(count.min(buf.len() / 12));
                for _ in 0..count {
                    entries.push(RrlEntry {
                        vehicle: VehicleId(r.u32()?),
                        points: r.u32()?,
                        misbehavior_points: r.u32()?,
                    });
                }
                Message::RrlBroadcast(RrlBroadcast {
                    issuer,
                    version,
                    entries,
                    timestamp: r.f64()?,
                    signature_valid: r.bool()?,
                })
            }
            tag => return Err(WireError::UnknownTag(tag)),
        };
        match buf.len() - r.pos {
            0 => Ok(msg),
            n => Err(WireError::TrailingBytes(n)),
        }
    }

    pub fn is_safety(&self) -> bool {
        matches!(self, Message::Beacon(_) | Message::Warning(_))
    }

    /// Bytes charged against the channel: the nominal message size for
    /// its class, or the encoded size when that is larger.
    pub fn channel_bytes(&self) -> usize {
        let nominal = if self.is_safety() {
            SAFETY_MESSAGE_BYTES
        } else {
            NON_SAFETY_MESSAGE_BYTES
        };
        nominal.max(self.encode().len())
    }
}
