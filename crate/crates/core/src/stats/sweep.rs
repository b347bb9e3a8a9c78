use serde::Serialize;

use super::absorption::{absorption_records, AbsorptionRecord};
use super::summary::mean_se;
use crate::engine::{Initial, Mode};
use crate::error::Result;
use crate::model::{StopRule, SystemParams, Topology};

/// One `(F, q, N)` point of a phase sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub features: usize,
    pub states: u32,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub point: GridPoint,
    pub replicas: u64,
    pub censored: u64,
    pub mean_s_max: f64,
    pub se_s_max: f64,
    pub mean_s_max_frac: f64,
    pub se_s_max_frac: f64,
    pub mean_n_c_frac: f64,
    pub se_n_c_frac: f64,
    /// Set when the cell could not be run; the other fields are then NaN.
    pub error: Option<String>,
}

impl SweepCell {
    pub const CSV_HEADER: &'static str =
        "F,q,N,replicas,censored,mean_s_max,se_s_max,mean_s_max_over_N,se_s_max_over_N,mean_n_c_over_N,se_n_c_over_N,error";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            self.point.features,
            self.point.states,
            self.point.size,
            self.replicas,
            self.censored,
            self.mean_s_max,
            self.se_s_max,
            self.mean_s_max_frac,
            self.se_s_max_frac,
            self.mean_n_c_frac,
            self.se_n_c_frac,
            self.error.as_deref().unwrap_or("").replace(',', ";")
        )
    }

    pub fn from_records(point: GridPoint, records: &[AbsorptionRecord]) -> Self {
        let n = point.size as f64;
        let s: Vec<f64> = records.iter().map(|r| r.s_max as f64).collect();
        let (mean_s_max, se_s_max) = mean_se(&s);
        let (mean_n_c_frac, se_n_c_frac) = mean_se(&records.iter().map(|r| r.n_c as f64 / n).collect::<Vec<_>>());
        Self {
            point,
            replicas: records.len() as u64,
            censored: records.iter().filter(|r| r.censored).count() as u64,
            mean_s_max,
            se_s_max,
            mean_s_max_frac: mean_s_max / n,
            se_s_max_frac: se_s_max / n,
            mean_n_c_frac,
            se_n_c_frac,
            error: None,
        }
    }

    fn failed(point: GridPoint, err: String) -> Self {
        Self {
            point,
            replicas: 0,
            censored: 0,
            mean_s_max: f64::NAN,
            se_s_max: f64::NAN,
            mean_s_max_frac: f64::NAN,
            se_s_max_frac: f64::NAN,
            mean_n_c_frac: f64::NAN,
            se_n_c_frac: f64::NAN,
            error: Some(err),
        }
    }
}

/// Runs the culture chain from uniform initial conditions at every grid
/// point until absorption or `stop`. A failing cell is reported through
/// `on_error` and in its `error` field; the sweep carries on.
pub fn phase_sweep(
    grid: &[GridPoint],
    topology: Topology,
    replicas: u64,
    seed: u64,
    stop: StopRule,
    mut on_error: impl FnMut(&GridPoint, &crate::Error),
) -> Vec<SweepCell> {
    grid.iter()
        .map(|&point| {
            let run = || -> Result<Vec<AbsorptionRecord>> {
                let p = SystemParams::new(point.features, point.states, point.size, topology, seed)?.with_stop(stop);
                absorption_records(&p, replicas, Mode::Vertex, Initial::Uniform)
            };
            match run() {
                Ok(records) => SweepCell::from_records(point, &records),
                Err(e) => {
                    on_error(&point, &e);
                    SweepCell::failed(point, e.to_string())
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_cells_do_not_stop_the_sweep() {
        let grid = [
            GridPoint { features: 2, states: 3, size: 30 },
            GridPoint { features: 2, states: 1, size: 30 },
            GridPoint { features: 1, states: 2, size: 30 },
        ];
        let mut errors = 0;
        let cells = phase_sweep(&grid, Topology::Torus, 3, 1, StopRule::until_absorbed(), |_, _| errors += 1);
        assert_eq!(errors, 1);
        assert!(cells[0].error.is_none() && cells[0].censored == 0);
        assert!(cells[1].error.is_some() && cells[1].mean_s_max.is_nan());
        assert!(cells[2].mean_s_max >= 1.0);
        assert_eq!(cells[1].csv_row().split(',').count(), 12);
    }
}
