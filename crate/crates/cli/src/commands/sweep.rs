use anyhow::Result;
use axelrod_core::stats::{phase_sweep, GridPoint, SweepCell};

use super::Status;
use crate::config::ExperimentConfig;
use crate::output::Outputs;

pub fn sweep(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Status> {
    let mut grid = Vec::new();
    for &features in &cfg.grid_features {
        for &states in &cfg.grid_states {
            for &size in &cfg.grid_sizes {
                grid.push(GridPoint { features, states, size });
            }
        }
    }
    let mut failed = 0;
    let cells = phase_sweep(&grid, cfg.params.topology, cfg.replicas, cfg.params.seed, cfg.params.stop, |g, e| {
        failed += 1;
        eprintln!("cell F={} q={} N={} failed: {e}", g.features, g.states, g.size);
    });
    let mut csv = String::from(SweepCell::CSV_HEADER);
    csv.push('\n');
    for c in &cells {
        csv.push_str(&c.csv_row());
        csv.push('\n');
        if c.error.is_none() {
            println!(
                "F={} q={} N={}: s_max {:.2} ± {:.2}, s_max/N {:.4}, n_c/N {:.4} ± {:.4}, censored {}",
                c.point.features,
                c.point.states,
                c.point.size,
                c.mean_s_max,
                c.se_s_max,
                c.mean_s_max_frac,
                c.mean_n_c_frac,
                c.se_n_c_frac,
                c.censored
            );
        }
    }
    out.write("sweep.csv", csv.as_bytes())?;
    Ok(Status::from_bool(failed == 0))
}
