//! Decision accounting for a run: victims, correctness by distance and
//! pipeline latency, plus CSV/JSON export and replay from an event log.

mod export;
mod record;
mod replay;
mod report;

pub use export::{export, from_csv, from_json, to_csv, to_json, ExportFormat, CSV_HEADER};
pub use record::{DecisionKey, DecisionLog, DecisionRecord};
pub use replay::{replay, Replay};
pub use report::{
    aggregate_buckets, finalize, DecisionHistogram, DistanceBucket, FinalizeContext,
    LatencyStats, MetricsReport, RunIdentity, BUCKET_WIDTH_M, REPORT_SCHEMA_VERSION,
};

use thiserror::Error;

use crate::protocol::EventId;
use crate::reputation::VehicleId;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("second final decision by {receiver} on {sender}'s warning about {event_id}")]
    DuplicateDecision {
        receiver: VehicleId,
        event_id: EventId,
        sender: VehicleId,
    },
    #[error("no decision by {receiver} on {sender}'s warning about {event_id} to resolve")]
    UnknownDecision {
        receiver: VehicleId,
        event_id: EventId,
        sender: VehicleId,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse report: {0}")]
    Parse(String),
    #[error("cannot replay log: {0}")]
    Replay(String),
}
