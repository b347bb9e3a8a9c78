use serde::Serialize;

use crate::engine::EventRecord;
use crate::model::Topology;

/// Per-edge annihilation and freezing counts along a trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EventCounters {
    pub annihilations: Vec<u64>,
    pub freezings: Vec<u64>,
}

impl EventCounters {
    pub fn new(num_edges: usize) -> Self {
        Self { annihilations: vec![0; num_edges], freezings: vec![0; num_edges] }
    }

    pub fn record(&mut self, event: &EventRecord) {
        if let Some(u) = event.annihilation_site() {
            self.annihilations[u] += 1;
        }
        if let Some(u) = event.freezing_site() {
            self.freezings[u] += 1;
        }
    }
}

/// Annihilations are counted at the left edge of the colliding pair,
/// freezings at the edge that became full.
pub fn count_events<'a>(trajectory: impl IntoIterator<Item = &'a EventRecord>, num_edges: usize) -> EventCounters {
    let mut c = EventCounters::new(num_edges);
    for e in trajectory {
        c.record(e);
    }
    c
}

/// Streaming check that two freezings at an edge are separated by an
/// annihilation at that edge or at its left neighbour.
#[derive(Debug, Clone)]
pub struct SeparationAudit {
    topology: Topology,
    armed: Vec<bool>,
    frozen_before: Vec<bool>,
    pub freezings: u64,
    /// Freezings at an edge that had frozen before: the pairs actually checked.
    pub repeats: u64,
    pub violations: u64,
    pub first_violation: Option<(usize, f64)>,
}

impl SeparationAudit {
    pub fn new(topology: Topology, num_edges: usize) -> Self {
        Self {
            topology,
            armed: vec![false; num_edges],
            frozen_before: vec![false; num_edges],
            freezings: 0,
            repeats: 0,
            violations: 0,
            first_violation: None,
        }
    }

    pub fn record(&mut self, event: &EventRecord) {
        if let Some(u) = event.annihilation_site() {
            self.armed[u] = false;
            if let Some(right) = self.topology.step_edge(u, 1, self.armed.len()) {
                self.armed[right] = false;
            }
        }
        if let Some(u) = event.freezing_site() {
            self.freezings += 1;
            self.repeats += self.frozen_before[u] as u64;
            self.frozen_before[u] = true;
            if self.armed[u] {
                self.violations += 1;
                self.first_violation.get_or_insert((u, event.time));
            }
            self.armed[u] = true;
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

pub fn audit_freezing_separation<'a>(
    trajectory: impl IntoIterator<Item = &'a EventRecord>,
    topology: Topology,
    num_edges: usize,
) -> SeparationAudit {
    let mut audit = SeparationAudit::new(topology, num_edges);
    for e in trajectory {
        audit.record(e);
    }
    audit
}
