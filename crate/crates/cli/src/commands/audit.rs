use anyhow::Result;
use axelrod_core::coupling::{rate_audit, AuditStatus};

use super::Status;
use crate::config::{usage_error, ExperimentConfig};
use crate::output::Outputs;

pub fn audit(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Status> {
    let a = rate_audit(&cfg.params, cfg.trials, cfg.max_replicas).map_err(|e| usage_error(e.to_string()))?;
    out.write("audit.json", serde_json::to_string_pretty(&a)?.as_bytes())?;
    println!("j  trials  accepted  empirical  r(j)  99% CI  status");
    for r in &a.rows {
        println!(
            "{}  {}  {}  {:.5}  {}  [{:.5}, {:.5}]  {:?}",
            r.occupancy, r.trials, r.accepted, r.empirical, r.expected_exact, r.ci_low, r.ci_high, r.status
        );
    }
    if a.rows.iter().any(|r| r.status == AuditStatus::Insufficient) {
        eprintln!("some occupancy classes have fewer than {} trials", cfg.trials);
    }
    Ok(Status::from_bool(a.pass()))
}
