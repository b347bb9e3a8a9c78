use anyhow::Result;
use axelrod_core::stats::{mean_se, run_replicas, AbsorptionRecord, DensitySeries};

use super::Status;
use crate::config::ExperimentConfig;
use crate::output::Outputs;

pub fn simulate(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Status> {
    let p = &cfg.params;
    let outcomes = run_replicas(p, cfg.replicas, cfg.mode, cfg.init, &cfg.sample_times)?;

    let mut csv = String::from(AbsorptionRecord::CSV_HEADER);
    csv.push('\n');
    for o in &outcomes {
        csv.push_str(&o.record.csv_row());
        csv.push('\n');
    }
    out.write("absorption.csv", csv.as_bytes())?;

    if outcomes.len() >= 2 {
        let d = DensitySeries::from_outcomes(p.features, p.num_edges(), &outcomes)?;
        let mut csv = String::from(DensitySeries::CSV_HEADER);
        csv.push('\n');
        for row in d.csv_rows() {
            csv.push_str(&row);
            csv.push('\n');
        }
        out.write("density.csv", csv.as_bytes())?;
    } else {
        eprintln!("note: density.csv needs at least 2 replicas; skipped");
    }

    if cfg.snapshots {
        for o in &outcomes {
            let mut lines = String::new();
            for s in &o.summary.snapshots {
                lines.push_str(&serde_json::to_string(s)?);
                lines.push('\n');
            }
            out.write(&format!("snapshots/replica_{:06}.jsonl", o.record.replica), lines.as_bytes())?;
        }
    }

    let n_c: Vec<f64> = outcomes.iter().map(|o| o.record.n_c as f64).collect();
    let s_max: Vec<f64> = outcomes.iter().map(|o| o.record.s_max as f64).collect();
    let (nc, nc_se) = mean_se(&n_c);
    let (sm, sm_se) = mean_se(&s_max);
    let censored = outcomes.iter().filter(|o| o.record.censored).count();
    println!(
        "{} replicas ({censored} censored): mean n_c {nc:.4} ± {nc_se:.4}, mean s_max {sm:.4} ± {sm_se:.4} -> {}",
        outcomes.len(),
        out.dir().display()
    );
    let bad: Vec<u64> = outcomes.iter().filter(|o| !o.record.is_consistent()).map(|o| o.record.replica).collect();
    if !bad.is_empty() {
        eprintln!("inconsistent domain statistics in replicas {bad:?}");
    }
    Ok(Status::from_bool(bad.is_empty()))
}
