//! The Axelrod model and its interface view as plain values.

mod config;
mod interface;
mod params;
mod rates;

pub use config::{sample_initial, Culture, VertexConfig};
pub(crate) use interface::level_mask;
pub use interface::{interface_view, InterfaceState};
pub use params::{StopRule, SystemParams, Topology, MAX_FEATURES};
pub use rates::{directed_rate, jump_rate, jump_rate_table, Rational};
