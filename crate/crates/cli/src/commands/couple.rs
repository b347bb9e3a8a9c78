use anyhow::Result;
use axelrod_core::coupling::{couple_from, couple_run, CouplingReport};
use axelrod_core::{replica_seed, Initial, VertexConfig};
use rayon::prelude::*;

use super::Status;
use crate::config::{usage_error, ExperimentConfig};
use crate::output::Outputs;

pub fn couple(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Status> {
    let p = &cfg.params;
    if p.states != 2 {
        return Err(usage_error(format!("the coupling needs q = 2, got q = {}", p.states)));
    }
    let reports: Vec<CouplingReport> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let q = p.with_seed(replica_seed(p.seed, r));
            match cfg.init {
                Initial::Monoculture => couple_from(&q, VertexConfig::monoculture(&q)?, &q.stop, cfg.fault),
                Initial::Uniform => couple_run(&q, &q.stop, cfg.fault),
                Initial::HalfLine => {
                    Err(axelrod_core::Error::Config("the coupling starts from a culture configuration".into()))
                }
            }
        })
        .collect::<axelrod_core::Result<_>>()
        .map_err(|e| usage_error(e.to_string()))?;
    let mut jsonl = String::new();
    for r in &reports {
        jsonl.push_str(&serde_json::to_string(r)?);
        jsonl.push('\n');
    }
    out.write("couple.jsonl", jsonl.as_bytes())?;
    let failed: Vec<&CouplingReport> = reports.iter().filter(|r| !r.pass).collect();
    let events: u64 = reports.iter().map(|r| r.events_compared).sum();
    println!("{} of {} coupled runs agree ({events} events compared)", reports.len() - failed.len(), reports.len());
    if let Some(r) = failed.first() {
        println!("first divergence (seed {:#x}): {}", r.seed, serde_json::to_string(&r.first_divergence)?);
    }
    Ok(Status::from_bool(failed.is_empty()))
}
