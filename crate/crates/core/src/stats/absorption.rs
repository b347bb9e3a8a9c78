use rayon::prelude::*;
use serde::Serialize;

use super::domains::domain_lengths_from_interface;
use crate::engine::{Initial, Mode, RunSummary, Simulator};
use crate::error::Result;
use crate::model::{SystemParams, Topology};
use crate::rng::replica_seed;

/// Outcome of one replica run to absorption (or to its stopping rule).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorptionRecord {
    pub replica: u64,
    pub seed: u64,
    pub features: usize,
    pub states: u32,
    pub size: usize,
    pub topology: Topology,
    pub s_max: usize,
    pub n_c: usize,
    /// Absorption time, or the time the run stopped when censored.
    pub t_abs: f64,
    pub censored: bool,
    pub annihilations: u64,
    pub freezings: u64,
}

impl AbsorptionRecord {
    pub const CSV_HEADER: &'static str = "replica,seed,F,q,N,topology,s_max,n_c,t_abs,censored,annihilations,freezings";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.16e},{},{},{}",
            self.replica,
            self.seed,
            self.features,
            self.states,
            self.size,
            self.topology,
            self.s_max,
            self.n_c,
            self.t_abs,
            self.censored,
            self.annihilations,
            self.freezings
        )
    }

    /// `1 <= n_c, s_max <= N`, and `n_c = 1` exactly when `s_max = N`.
    pub fn is_consistent(&self) -> bool {
        (1..=self.size).contains(&self.n_c)
            && (1..=self.size).contains(&self.s_max)
            && ((self.n_c == 1) == (self.s_max == self.size))
    }
}

/// A replica's absorption record together with its snapshots.
#[derive(Debug, Clone)]
pub struct ReplicaOutcome {
    pub record: AbsorptionRecord,
    pub summary: RunSummary,
}

/// Runs replica `index` of `params` (seed `params.seed ^ index`).
pub fn run_replica(
    params: &SystemParams,
    index: u64,
    mode: Mode,
    initial: Initial,
    sample_times: &[f64],
) -> Result<ReplicaOutcome> {
    let seed = replica_seed(params.seed, index);
    let p = params.with_seed(seed);
    let mut sim = Simulator::from_params(&p, mode, initial)?;
    let summary = sim.run(&p.stop, sample_times);
    Ok(ReplicaOutcome { record: record_from(&p, index, &sim, &summary), summary })
}

pub(crate) fn record_from(p: &SystemParams, index: u64, sim: &Simulator, summary: &RunSummary) -> AbsorptionRecord {
    let lengths = domain_lengths_from_interface(sim.interface());
    AbsorptionRecord {
        replica: index,
        seed: p.seed,
        features: p.features,
        states: p.states,
        size: p.size,
        topology: p.topology,
        s_max: lengths.iter().copied().max().unwrap_or(0),
        n_c: lengths.len(),
        t_abs: summary.absorption_time.unwrap_or(summary.final_time),
        censored: !summary.absorbed,
        annihilations: summary.annihilations,
        freezings: summary.freezings,
    }
}

/// Runs `replicas` replicas in parallel; results come back in replica order.
pub fn run_replicas(
    params: &SystemParams,
    replicas: u64,
    mode: Mode,
    initial: Initial,
    sample_times: &[f64],
) -> Result<Vec<ReplicaOutcome>> {
    (0..replicas).into_par_iter().map(|r| run_replica(params, r, mode, initial, sample_times)).collect()
}

pub fn absorption_records(
    params: &SystemParams,
    replicas: u64,
    mode: Mode,
    initial: Initial,
) -> Result<Vec<AbsorptionRecord>> {
    Ok(run_replicas(params, replicas, mode, initial, &[])?.into_iter().map(|o| o.record).collect())
}
