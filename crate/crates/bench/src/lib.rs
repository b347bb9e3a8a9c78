//! Shared fixtures for the criterion benchmarks.

use axelrod_core::{Mode, Simulator, SystemParams, Topology};

/// Uniformly seeded torus simulator with `F` features and `q = 2`.
pub fn torus(features: usize, size: usize, mode: Mode, seed: u64) -> Simulator {
    let params = SystemParams::new(features, 2, size, Topology::Torus, seed).expect("valid parameters");
    Simulator::from_params(&params, mode, axelrod_core::Initial::Uniform).expect("valid simulator")
}
