//! Append-only, tab-separated event log.
//!
//! One record per line with seven columns:
//! `time  kind  sender  receiver  event_id  decision  detail`.
//! Time is seconds with microsecond precision, absent fields are `-`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use super::queue::SimTime;
use crate::protocol::EventId;
use crate::reputation::{RsuId, VehicleId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogKind {
    /// Vehicle roster at t = 0; decision is `benign` or `attacker`.
    Node,
    /// Event registered; decision is `genuine` or `fabricated`.
    Spawn,
    /// Warning sent; decision is the ground truth of its content.
    Emit,
    /// Warning delivered and processed; decision is the receiver's disposition.
    Deliver,
    /// Final disposition of an earlier pending warning.
    Resolve,
    /// Vehicle filed a misbehavior report; receiver is the RSU.
    Report,
    /// Report could not reach any RSU.
    ReportDropped,
    /// RSU processed a report; decision is the outcome.
    RsuReport,
    /// RRL publication; decision is the version, detail the recipient count.
    Broadcast,
    /// Inter-RSU forward; detail is the entry count.
    Forward,
    /// Beacon round; detail is the number of deliveries.
    Beacon,
}

impl LogKind {
    const NAMES: [(LogKind, &'static str); 11] = [
        (LogKind::Node, "NODE"),
        (LogKind::Spawn, "SPAWN"),
        (LogKind::Emit, "EMIT"),
        (LogKind::Deliver, "DELIVER"),
        (LogKind::Resolve, "RESOLVE"),
        (LogKind::Report, "REPORT"),
        (LogKind::ReportDropped, "REPORT_DROPPED"),
        (LogKind::RsuReport, "RSU_REPORT"),
        (LogKind::Broadcast, "BROADCAST"),
        (LogKind::Forward, "FORWARD"),
        (LogKind::Beacon, "BEACON"),
    ];

    pub fn as_str(self) -> &'static str {
        Self::NAMES
            .iter()
            .find(|(k, _)| *k == self)
            .map(|(_, n)| *n)
            .expect("every kind is named")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRef {
    None,
    Vehicle(VehicleId),
    Rsu(RsuId),
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeRef::None => f.write_str("-"),
            NodeRef::Vehicle(v) => write!(f, "{v}"),
            NodeRef::Rsu(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("log line {line}: {reason}")]
pub struct LogParseError {
    pub line: usize,
    pub reason: String,
}

fn parse_u32(s: &str) -> Option<u32> {
    s.parse().ok()
}

impl FromStr for NodeRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(NodeRef::None);
        }
        let parsed = match s.split_at_checked(1) {
            Some(("V", n)) => parse_u32(n).map(|n| NodeRef::Vehicle(VehicleId(n))),
            Some(("R", n)) => parse_u32(n).map(|n| NodeRef::Rsu(RsuId(n))),
            _ => None,
        };
        parsed.ok_or_else(|| format!("bad node reference `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub time: SimTime,
    pub kind: LogKind,
    pub sender: NodeRef,
    pub receiver: NodeRef,
    pub event: Option<EventId>,
    pub decision: String,
    pub detail: String,
}

impl LogRecord {
    pub fn new(time: SimTime, kind: LogKind) -> Self {
        LogRecord {
            time,
            kind,
            sender: NodeRef::None,
            receiver: NodeRef::None,
            event: None,
            decision: "-".into(),
            detail: "-".into(),
        }
    }

    pub fn sender(mut self, n: NodeRef) -> Self {
        self.sender = n;
        self
    }

    pub fn receiver(mut self, n: NodeRef) -> Self {
        self.receiver = n;
        self
    }

    pub fn event(mut self, e: EventId) -> Self {
        self.event = Some(e);
        self
    }

    pub fn decision(mut self, d: impl Into<String>) -> Self {
        self.decision = d.into();
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    pub fn time_seconds(&self) -> f64 {
        super::queue::to_seconds(self.time)
    }

    fn parse(line: &str, lineno: usize) -> Result<Self, LogParseError> {
        let err = |reason: String| LogParseError {
            line: lineno,
            reason,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 7 {
            return Err(err(format!("expected 7 columns, found {}", cols.len())));
        }
        let time = parse_time(cols[0]).ok_or_else(|| err(format!("bad time `{}`", cols[0])))?;
        let kind = LogKind::NAMES
            .iter()
            .find(|(_, n)| *n == cols[1])
            .map(|(k, _)| *k)
            .ok_or_else(|| err(format!("unknown kind `{}`", cols[1])))?;
        let sender = cols[2].parse().map_err(err)?;
        let receiver = cols[3].parse().map_err(err)?;
        let event = match cols[4] {
            "-" => None,
            s => Some(EventId(
                s.strip_prefix('E')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| err(format!("bad event id `{s}`")))?,
            )),
        };
        Ok(LogRecord {
            time,
            kind,
            sender,
            receiver,
            event,
            decision: cols[5].to_string(),
            detail: cols[6].to_string(),
        })
    }
}

fn parse_time(s: &str) -> Option<SimTime> {
    let (secs, micros) = s.split_once('.')?;
    if micros.len() != 6 {
        return None;
    }
    Some(secs.parse::<u64>().ok()? * 1_000_000 + micros.parse::<u64>().ok()?)
}

impl fmt::Display for LogRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let event = self
            .event
            .map_or_else(|| "-".to_string(), |e| e.to_string());
        write!(
            f,
            "{}.{:06}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.time / 1_000_000,
            self.time % 1_000_000,
            self.kind.as_str(),
            self.sender,
            self.receiver,
            event,
            self.decision,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventLog {
    records: Vec<LogRecord>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: LogRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.time <= record.time));
        self.records.push(record);
    }

    pub fn records(&self) -> &[LogRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.records {
            writeln!(w, "{r}")?;
        }
        w.flush()
    }

    pub fn render(&self) -> String {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("log is utf-8")
    }

    pub fn parse(text: &str) -> Result<Self, LogParseError> {
        let records = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| LogRecord::parse(l, i + 1))
            .collect::<Result<_, _>>()?;
        Ok(EventLog { records })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_round_trip() {
        let rec = LogRecord::new(12_000_345, LogKind::Deliver)
            .sender(NodeRef::Vehicle(VehicleId(4)))
            .receiver(NodeRef::Vehicle(VehicleId(9)))
            .event(EventId(17))
            .decision("accept")
            .detail("123.5");
        let line = rec.to_string();
        assert_eq!(line, "12.000345\tDELIVER\tV4\tV9\tE17\taccept\t123.5");
        let log = EventLog::parse(&format!("{line}\n")).unwrap();
        assert_eq!(log.records()[0], rec);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(EventLog::parse("1.000000\tNODE\tV1\n").is_err());
        assert!(EventLog::parse("1.0\tNODE\tV1\t-\t-\tbenign\t-\n").is_err());
        assert!(EventLog::parse("1.000000\tNOPE\tV1\t-\t-\tbenign\t-\n").is_err());
        assert!(EventLog::parse("1.000000\tNODE\tX1\t-\t-\tbenign\t-\n").is_err());
    }
}
