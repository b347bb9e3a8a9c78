use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{Initial, Mode, Simulator};
use crate::error::{config, usage, Result};
use crate::model::{StopRule, SystemParams, Topology};
use crate::rng::replica_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    pub horizon: f64,
    pub replicas: u64,
    pub survivors: u64,
    pub survival: f64,
    pub se: f64,
}

/// Survival of the tagged frozen edge, one row per horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeTable {
    pub features: usize,
    pub width: usize,
    pub rows: Vec<ProbeRow>,
    /// First time edge 0 stopped being an `F`-site, per replica.
    pub exit_times: Vec<Option<f64>>,
}

impl ProbeTable {
    /// Mean and SE of `survival[a] - survival[b]`, paired by replica.
    pub fn drop_between(&self, a: usize, b: usize) -> (f64, f64) {
        let (ta, tb) = (self.rows[a].horizon, self.rows[b].horizon);
        let n = self.exit_times.len() as f64;
        let k = self.exit_times.iter().filter(|e| e.is_some_and(|t| t > ta && t <= tb)).count() as f64;
        let d = k / n;
        (d, (d * (1.0 - d) / n).sqrt())
    }

    /// Consecutive survival values drop by more than `z` paired SEs.
    pub fn strictly_decreasing(&self, z: f64) -> bool {
        (1..self.rows.len()).all(|k| {
            let (d, se) = self.drop_between(k - 1, k);
            d > z * se && d > 0.0
        })
    }
}

/// Starts the killed half-line from `F` particles on edge 0 and fair coin
/// levels elsewhere, and records whether edge 0 is still an `F`-site through
/// each horizon. Replica `r` uses seed `params.seed ^ r`.
pub fn frozen_release_probe(params: &SystemParams, horizons: &[f64], replicas: u64) -> Result<ProbeTable> {
    params.validate()?;
    if params.topology != Topology::KilledHalfLine || params.states != 2 {
        return config("the release probe runs on the killed half-line with q = 2");
    }
    if params.features < 2 {
        return usage("with F = 1 every particle is frozen forever; the probe needs F >= 2");
    }
    if replicas == 0 || horizons.is_empty() || horizons.windows(2).any(|w| w[0] >= w[1]) || horizons[0] < 0.0 {
        return usage("need at least one replica and strictly increasing non-negative horizons");
    }
    let t_max = *horizons.last().unwrap();
    let f = params.features as u32;
    let exit_times: Vec<Option<f64>> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let p = params.with_seed(replica_seed(params.seed, r));
            let mut sim = Simulator::from_params(&p, Mode::Interface, Initial::HalfLine)?;
            let mut exit = None;
            sim.run_observed(&StopRule::time(t_max), &[], |s, rec| {
                if s.interface().count(0) != f {
                    exit = Some(rec.time);
                    false
                } else {
                    true
                }
            });
            Ok(exit)
        })
        .collect::<Result<_>>()?;
    let n = replicas as f64;
    let rows = horizons
        .iter()
        .map(|&h| {
            let survivors = exit_times.iter().filter(|e| e.is_none_or(|t| t > h)).count() as u64;
            let p = survivors as f64 / n;
            ProbeRow { horizon: h, replicas, survivors, survival: p, se: (p * (1.0 - p) / n).sqrt() }
        })
        .collect();
    Ok(ProbeTable { features: params.features, width: params.num_edges(), rows, exit_times })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_line(features: usize, width: usize) -> SystemParams {
        SystemParams::new(features, 2, width + 1, Topology::KilledHalfLine, 17).unwrap()
    }

    #[test]
    fn zero_horizon_survives() {
        let t = frozen_release_probe(&half_line(3, 50), &[0.0, 5.0], 40).unwrap();
        assert_eq!(t.rows[0].survival, 1.0);
        assert!(t.rows[1].survival <= 1.0);
        assert_eq!(t.width, 50);
    }

    #[test]
    fn preconditions() {
        assert!(frozen_release_probe(&half_line(1, 10), &[1.0], 5).is_err());
        let torus = SystemParams::new(3, 2, 10, Topology::Torus, 0).unwrap();
        assert!(frozen_release_probe(&torus, &[1.0], 5).is_err());
        assert!(frozen_release_probe(&half_line(3, 10), &[2.0, 1.0], 5).is_err());
    }
}
