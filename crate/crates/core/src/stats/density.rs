use serde::Serialize;

use super::absorption::{run_replicas, ReplicaOutcome};
use super::summary::{mean_se, paired_difference};
use crate::engine::{Initial, Mode, Snapshot};
use crate::error::{usage, Result};
use crate::model::SystemParams;

/// Spatial averages of one replica at one sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub mean_zeta: f64,
    pub active: f64,
    pub frozen: f64,
    pub p_frozen: f64,
    pub p_active: f64,
}

impl DensitySample {
    pub fn from_snapshot(s: &Snapshot, features: usize, num_edges: usize) -> Self {
        let e = num_edges as f64;
        let mean_zeta = s.total_particles as f64 / e;
        let frozen = (features * s.frozen_edges) as f64 / e;
        Self {
            mean_zeta,
            active: (s.total_particles as f64 - (features * s.frozen_edges) as f64) / e,
            frozen,
            p_frozen: s.frozen_edges as f64 / e,
            p_active: s.active_edges as f64 / e,
        }
    }
}

/// Replica mean and standard error of each density at one sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityPoint {
    pub t: f64,
    pub mean_zeta: f64,
    pub se: f64,
    pub active: f64,
    pub se_active: f64,
    pub frozen: f64,
    pub se_frozen: f64,
    pub p_frozen: f64,
    pub se_p_frozen: f64,
    pub p_active: f64,
    pub se_p_active: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensitySeries {
    pub features: usize,
    pub num_edges: usize,
    pub times: Vec<f64>,
    pub points: Vec<DensityPoint>,
    /// `samples[r][k]`: replica `r` at `times[k]`.
    pub samples: Vec<Vec<DensitySample>>,
}

impl DensitySeries {
    pub const CSV_HEADER: &'static str = "t,mean_zeta,se,active,se_active,frozen,se_frozen,p_F,p_active";

    /// Builds the series from per-replica snapshots. Sample times not reached
    /// by every replica (a run stopped by its event budget) are dropped.
    pub fn from_snapshots(features: usize, num_edges: usize, runs: &[Vec<Snapshot>]) -> Result<Self> {
        if runs.len() < 2 {
            return usage(format!("standard errors need at least 2 replicas, got {}", runs.len()));
        }
        let len = runs.iter().map(Vec::len).min().unwrap_or(0);
        let times: Vec<f64> = runs[0][..len].iter().map(|s| s.time).collect();
        let samples: Vec<Vec<DensitySample>> = runs
            .iter()
            .map(|r| r[..len].iter().map(|s| DensitySample::from_snapshot(s, features, num_edges)).collect())
            .collect();
        let points = (0..len)
            .map(|k| {
                let col = |f: fn(&DensitySample) -> f64| mean_se(&samples.iter().map(|r| f(&r[k])).collect::<Vec<_>>());
                let (mean_zeta, se) = col(|s| s.mean_zeta);
                let (active, se_active) = col(|s| s.active);
                let (frozen, se_frozen) = col(|s| s.frozen);
                let (p_frozen, se_p_frozen) = col(|s| s.p_frozen);
                let (p_active, se_p_active) = col(|s| s.p_active);
                DensityPoint {
                    t: times[k],
                    mean_zeta,
                    se,
                    active,
                    se_active,
                    frozen,
                    se_frozen,
                    p_frozen,
                    se_p_frozen,
                    p_active,
                    se_p_active,
                }
            })
            .collect();
        Ok(Self { features, num_edges, times, points, samples })
    }

    pub fn from_outcomes(features: usize, num_edges: usize, outcomes: &[ReplicaOutcome]) -> Result<Self> {
        let runs: Vec<Vec<Snapshot>> = outcomes.iter().map(|o| o.summary.snapshots.clone()).collect();
        Self::from_snapshots(features, num_edges, &runs)
    }

    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.points.iter().map(|p| {
            format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                p.t, p.mean_zeta, p.se, p.active, p.se_active, p.frozen, p.se_frozen, p.p_frozen, p.p_active
            )
        })
    }

    /// Paired mean and SE of `P(ζ=F)` at sample `a` minus sample `b`.
    pub fn frozen_drop(&self, a: usize, b: usize) -> (f64, f64) {
        let pa: Vec<f64> = self.samples.iter().map(|r| r[a].p_frozen).collect();
        let pb: Vec<f64> = self.samples.iter().map(|r| r[b].p_frozen).collect();
        paired_difference(&pa, &pb)
    }
}

/// Interface-mode replicas from uniform initial conditions, sampled at
/// `sample_times` (ascending). Requires `q = 2`.
pub fn density_series(params: &SystemParams, replicas: u64, sample_times: &[f64]) -> Result<DensitySeries> {
    if replicas < 2 {
        return usage(format!("standard errors need at least 2 replicas, got {replicas}"));
    }
    if sample_times.windows(2).any(|w| w[0] >= w[1]) {
        return usage("sample times must be strictly increasing");
    }
    let outcomes = run_replicas(params, replicas, Mode::Interface, Initial::Uniform, sample_times)?;
    DensitySeries::from_outcomes(params.features, params.num_edges(), &outcomes)
}
