use anyhow::Result;

use super::Status;
use crate::config::{usage_error, ExperimentConfig};
use crate::output::Outputs;
use crate::raster::{build_raster, to_pgm};

/// Horizon used when neither the flags nor the file give one.
const DEFAULT_T_MAX: f64 = 1000.0;

pub fn raster(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Status> {
    let p = &cfg.params;
    if p.states != 2 {
        return Err(usage_error(format!("rasters show the particle system, which needs q = 2 (got q = {})", p.states)));
    }
    let t_max = p.stop.max_time.unwrap_or(DEFAULT_T_MAX);
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(usage_error("raster needs a positive --t-max"));
    }
    let r = build_raster(p, cfg.init, t_max, cfg.bins, cfg.level)?;
    let header = |panel: String| {
        vec![
            format!(
                "axelrod raster F={} q={} N={} topology={} seed={:#x} t_max={} bins={}",
                p.features, p.states, p.size, p.topology, p.seed, t_max, cfg.bins
            ),
            format!("panel={panel} rows=edges columns=time bins sampled at bin end"),
        ]
    };
    let maxval = p.features as u32;
    out.write("raster_total.pgm", to_pgm(&r.total, maxval, &header("total".into())).as_bytes())?;
    let name = format!("raster_level{}.pgm", cfg.level + 1);
    out.write(&name, to_pgm(&r.level, maxval, &header(format!("level {}", cfg.level + 1))).as_bytes())?;
    println!("wrote raster_total.pgm and {name} to {}", out.dir().display());
    Ok(Status::Pass)
}
