//! Cross-checks between the culture chain and the annihilating walks.
//!
//! Both simulators read one [`MarkSource`]; for `q = 2` the disagreement
//! pattern of the culture chain must equal the interface system bit for bit
//! after every event.

use serde::Serialize;

use crate::engine::{Fault, Initial, Mode, Simulator};
use crate::error::{config, usage, Result};
use crate::model::{interface_view, jump_rate, sample_initial, StopRule, SystemParams, VertexConfig};
use crate::rng::{replica_seed, MarkSource};
use crate::stats::wilson_interval;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Divergence {
    pub time: f64,
    pub edge: usize,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub features: usize,
    pub size: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
    pub events_compared: u64,
    pub first_divergence: Option<Divergence>,
    pub max_clock: f64,
    pub absorbed: bool,
    pub pass: bool,
}

/// Couples the two simulators from a uniform initial configuration drawn
/// from `params.seed`.
pub fn couple_run(params: &SystemParams, stop: &StopRule, fault: Option<Fault>) -> Result<CouplingReport> {
    params.validate()?;
    let cultures = sample_initial(params, &MarkSource::new(params.seed))?;
    couple_from(params, cultures, stop, fault)
}

/// Couples the two simulators starting from `cultures`. The interface
/// system starts from `interface_view(cultures)`.
pub fn couple_from(
    params: &SystemParams,
    cultures: VertexConfig,
    stop: &StopRule,
    fault: Option<Fault>,
) -> Result<CouplingReport> {
    params.validate()?;
    if params.states != 2 {
        return config(format!("the coupling needs q = 2, got q = {}", params.states));
    }
    let source = MarkSource::new(params.seed);
    let mut interface = Simulator::new_interface(params, interface_view(&cultures), source)?;
    let mut vertex = Simulator::new_vertex(cultures, source)?;
    match fault {
        Some(Fault::SwappedAdoption) => vertex.inject_fault(Fault::SwappedAdoption),
        Some(f) => interface.inject_fault(f),
        None => {}
    }
    let horizon = stop.max_time.unwrap_or(f64::INFINITY);
    let budget = stop.max_events.unwrap_or(u64::MAX);
    let mut compared = 0u64;
    let mut divergence = None;
    while compared < budget && !(vertex.is_absorbing() && interface.is_absorbing()) {
        let next = match (vertex.next_event_time(), interface.next_event_time()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => break,
        };
        if next > horizon {
            break;
        }
        let rv = vertex.step();
        let ri = interface.step();
        compared += 1;
        let time = rv.iter().chain(ri.iter()).map(|r| r.time).fold(0.0, f64::max);
        let touched: Vec<usize> =
            rv.iter().chain(ri.iter()).flat_map(|r| [Some(r.edge), r.destination]).flatten().collect();
        divergence = first_mismatch(&vertex, &interface, touched.into_iter(), time);
        if divergence.is_none() && rv.is_some() != ri.is_some() {
            divergence = first_mismatch(&vertex, &interface, 0..interface.interface().num_edges(), time);
        }
        if divergence.is_some() {
            break;
        }
    }
    if divergence.is_none() {
        let time = vertex.clock().max(interface.clock());
        divergence = first_mismatch(&vertex, &interface, 0..interface.interface().num_edges(), time);
    }
    Ok(CouplingReport {
        features: params.features,
        size: params.size,
        seed: params.seed,
        fault,
        events_compared: compared,
        first_divergence: divergence,
        max_clock: vertex.clock().max(interface.clock()),
        absorbed: vertex.is_absorbing() && interface.is_absorbing(),
        pass: divergence.is_none(),
    })
}

fn first_mismatch(
    vertex: &Simulator,
    interface: &Simulator,
    edges: impl Iterator<Item = usize>,
    time: f64,
) -> Option<Divergence> {
    let cultures = vertex.cultures().expect("vertex simulator");
    edges
        .filter_map(|e| {
            let diff = cultures.discordant_mask(e) ^ interface.interface().mask(e);
            (diff != 0).then(|| Divergence { time, edge: e, level: diff.trailing_zeros() as usize })
        })
        .min_by_key(|d| (d.edge, d.level))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    /// Expected rate inside the interval (and zero acceptances at `j = F`).
    Consistent,
    Flagged,
    /// Fewer trials than requested.
    Insufficient,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateAuditRow {
    pub occupancy: usize,
    pub trials: u64,
    pub accepted: u64,
    pub empirical: f64,
    pub expected: f64,
    pub expected_exact: String,
    pub ci_low: f64,
    pub ci_high: f64,
    pub status: AuditStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateAudit {
    pub features: usize,
    pub replicas: usize,
    pub rows: Vec<RateAuditRow>,
}

impl RateAudit {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.status != AuditStatus::Flagged)
    }
}

/// Acceptance frequency of marks landing on occupied levels of `j`-sites,
/// for each `j`, against `r(j)` with Wilson 99% intervals.
///
/// Replicas (seeds `params.seed ^ k`) run in interface mode until every
/// occupancy class has `trials` marks, up to `max_replicas` replicas.
pub fn rate_audit(params: &SystemParams, trials: u64, max_replicas: usize) -> Result<RateAudit> {
    params.validate()?;
    if params.states != 2 {
        return config("the rate audit runs the interface system and needs q = 2");
    }
    if trials < 1000 {
        return usage(format!("at least 1000 trials per occupancy class are needed, got {trials}"));
    }
    let f = params.features;
    let mut tally = vec![(0u64, 0u64); f + 1];
    let mut replicas = 0;
    let enough = |t: &[(u64, u64)]| t[1..].iter().all(|&(n, _)| n >= trials);
    while replicas < max_replicas && !enough(&tally) {
        let p = params.with_seed(replica_seed(params.seed, replicas as u64));
        let mut sim = Simulator::from_params(&p, Mode::Interface, Initial::Uniform)?;
        sim.run_observed(&params.stop, &[], |_, rec| {
            let slot = &mut tally[rec.occupancy as usize];
            slot.0 += 1;
            slot.1 += rec.accepted as u64;
            !enough(&tally)
        });
        replicas += 1;
    }
    let rows = (1..=f)
        .map(|j| {
            let (n, k) = tally[j];
            let exact = jump_rate(j, f).expect("j in range");
            let expected = *exact.numer() as f64 / *exact.denom() as f64;
            let (lo, hi) = wilson_interval(k, n, Z_99);
            let status = if n < trials {
                AuditStatus::Insufficient
            } else if (j == f && k != 0) || expected < lo || expected > hi {
                AuditStatus::Flagged
            } else {
                AuditStatus::Consistent
            };
            RateAuditRow {
                occupancy: j,
                trials: n,
                accepted: k,
                empirical: if n > 0 { k as f64 / n as f64 } else { f64::NAN },
                expected,
                expected_exact: exact.to_string(),
                ci_low: lo,
                ci_high: hi,
                status,
            }
        })
        .collect();
    Ok(RateAudit { features: f, replicas, rows })
}
