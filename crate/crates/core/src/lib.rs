//! Continuous-time simulation of the one-dimensional Axelrod model of
//! cultural dissemination and of its interface particles.
//!
//! * [`model`]: cultures, overlaps, copy rates and the edge (interface) view.
//! * [`rng`]: keyed Poisson clocks with direction and thinning marks.
//! * [`engine`]: the event-driven simulator in vertex and interface mode.
//! * [`coupling`]: runs both modes on one set of marks and compares them.
//! * [`stats`]: parities, domains, event counters, densities, sweeps.

pub mod coupling;
pub mod engine;
pub mod error;
pub mod model;
pub mod rng;
pub mod stats;

pub use engine::{EventKind, EventRecord, Fault, Initial, Mode, RunSummary, Simulator, Snapshot};
pub use error::{Error, Result};
pub use model::{
    interface_view, jump_rate, sample_initial, Culture, InterfaceState, Rational, StopRule, SystemParams, Topology,
    VertexConfig,
};
pub use rng::{parse_seed, philox4x64_10, replica_seed, Mark, MarkSource, StreamKey};
