//! Reputation-based trust for VANET hazard warnings.
//!
//! - [`reputation`]: pure band, heuristic and decision-matrix arithmetic
//!   over local (LRL) and RSU (RRL) reputation lists.
//! - [`protocol`]: vehicle and RSU state machines built on top of it.
//! - [`sim`]: a deterministic discrete-event highway simulator driving
//!   those state machines.
//! - [`metrics`]: decision accounting, victims, per-distance correctness.
//! - [`cli`]: the scenario runner behind the `irs-sim` binary.
//!
//! The `examples/` directory walks through each layer.

pub mod cli;
pub mod metrics;
pub mod protocol;
pub mod reputation;
pub mod sim;
