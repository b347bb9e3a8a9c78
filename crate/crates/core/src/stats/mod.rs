//! Estimators and invariant checks over states, trajectories and replicas.

mod absorption;
mod density;
mod domains;
mod events;
mod parity;
mod probe;
mod summary;
mod sweep;

pub use absorption::{absorption_records, run_replica, run_replicas, AbsorptionRecord, ReplicaOutcome};
pub use density::{density_series, DensityPoint, DensitySample, DensitySeries};
pub use domains::{domain_lengths, domain_lengths_from_interface, n_c, s_max};
pub use events::{audit_freezing_separation, count_events, EventCounters, SeparationAudit};
pub use parity::{active_interval, counts_active, interval_parity, parity_mask, parity_vector};
pub use probe::{frozen_release_probe, ProbeRow, ProbeTable};
pub use summary::{mean_se, paired_difference, wilson_interval};
pub use sweep::{phase_sweep, GridPoint, SweepCell};
