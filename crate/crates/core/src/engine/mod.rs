//! Event-driven simulation of the culture chain and of its interface
//! particles, both driven by one [`MarkSource`].
//!
//! Each `(edge, level)` clock rings at rate one. When it rings at an
//! occupied level of a `j`-site, the particle jumps in the mark's direction
//! if the mark's uniform is at most `r(j)`. In vertex mode the jump is the
//! adoption of feature `level` by the receiving endpoint, which reproduces
//! the generator for any `q`; in interface mode particles move, annihilate
//! on collision and are killed when they leave an open lattice.

mod record;
mod schedule;

use serde::Serialize;

pub use record::{EventKind, EventRecord, Fault, RunSummary, Snapshot};

use crate::error::{config, usage, Error, Result};
use crate::model::{
    interface_view, jump_rate_table, sample_initial, InterfaceState, StopRule, SystemParams, Topology, VertexConfig,
};
use crate::rng::{Mark, MarkSource, StreamKey};
use schedule::Scheduler;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vertex,
    Interface,
}

/// Initial law used by [`Simulator::from_params`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initial {
    /// Independent uniform cultures (their interface view in interface mode).
    Uniform,
    /// A single culture everywhere.
    Monoculture,
    /// Full left-most edge, Bernoulli(1/2) levels elsewhere. Interface mode only.
    HalfLine,
}

#[derive(Debug, Clone)]
pub struct Simulator {
    features: usize,
    topology: Topology,
    mode: Mode,
    source: MarkSource,
    cultures: Option<VertexConfig>,
    iface: InterfaceState,
    rates: Vec<f64>,
    sched: Scheduler,
    clock: f64,
    events: u64,
    accepted: u64,
    annihilations: u64,
    freezings: u64,
    kills: u64,
    active_edges: usize,
    frozen_edges: usize,
    absorbed_at: Option<f64>,
    fault: Option<Fault>,
    full_audit: bool,
}

impl Simulator {
    /// Culture-chain simulator for any `q`, on the torus or the path.
    pub fn new_vertex(cultures: VertexConfig, source: MarkSource) -> Result<Self> {
        if cultures.topology() == Topology::KilledHalfLine {
            return config("the culture chain is not defined on the killed half-line");
        }
        let iface = interface_view(&cultures);
        Ok(Self::assemble(Mode::Vertex, Some(cultures), iface, source))
    }

    /// Annihilating-walk simulator; requires the two-state model.
    pub fn new_interface(params: &SystemParams, state: InterfaceState, source: MarkSource) -> Result<Self> {
        params.validate()?;
        if params.states != 2 {
            return config(format!("interface dynamics need q = 2, got q = {}", params.states));
        }
        if state.features() != params.features
            || state.num_edges() != params.num_edges()
            || state.topology() != params.topology
        {
            return config("interface state does not match the system parameters");
        }
        Ok(Self::assemble(Mode::Interface, None, state, source))
    }

    /// Samples the initial condition from `params.seed` and builds the simulator.
    pub fn from_params(params: &SystemParams, mode: Mode, initial: Initial) -> Result<Self> {
        params.validate()?;
        let source = MarkSource::new(params.seed);
        if mode == Mode::Vertex && params.topology == Topology::KilledHalfLine {
            return config("the culture chain is not defined on the killed half-line");
        }
        match (mode, initial) {
            (Mode::Interface, Initial::HalfLine) => {
                if params.topology != Topology::KilledHalfLine {
                    return config("the half-line law lives on the killed half-line");
                }
                let state = InterfaceState::half_line_initial(params.features, params.num_edges(), &source)?;
                Self::new_interface(params, state, source)
            }
            (Mode::Vertex, Initial::HalfLine) => config("the half-line law is an interface initial condition"),
            (_, init) => {
                if params.topology == Topology::KilledHalfLine {
                    return config("the killed half-line starts from the half-line law");
                }
                let cultures = match init {
                    Initial::Uniform => sample_initial(params, &source)?,
                    _ => VertexConfig::monoculture(params)?,
                };
                match mode {
                    Mode::Vertex => Self::new_vertex(cultures, source),
                    Mode::Interface => Self::new_interface(params, interface_view(&cultures), source),
                }
            }
        }
    }

    fn assemble(mode: Mode, cultures: Option<VertexConfig>, iface: InterfaceState, source: MarkSource) -> Self {
        let features = iface.features();
        let mut sim = Self {
            features,
            topology: iface.topology(),
            mode,
            source,
            cultures,
            sched: Scheduler::new(iface.num_edges(), features),
            rates: jump_rate_table(features),
            active_edges: iface.active_edges(),
            frozen_edges: iface.frozen_edges(),
            iface,
            clock: 0.0,
            events: 0,
            accepted: 0,
            annihilations: 0,
            freezings: 0,
            kills: 0,
            absorbed_at: None,
            fault: None,
            full_audit: false,
        };
        if sim.active_edges == 0 {
            sim.absorbed_at = Some(0.0);
        }
        sim.rebuild_queue();
        sim
    }

    /// Re-seeds the queue with every occupied clock, advanced past the clock.
    fn rebuild_queue(&mut self) {
        self.sched.clear();
        for u in 0..self.iface.num_edges() {
            let mut m = self.iface.mask(u);
            while m != 0 {
                let level = m.trailing_zeros() as usize;
                self.sched.schedule(&self.source, u, level, self.clock);
                m &= m - 1;
            }
        }
    }

    /// Replaces the dynamics by a deliberately wrong variant. Used to check
    /// that the coupling oracle notices.
    pub fn inject_fault(&mut self, fault: Fault) {
        self.fault = Some(fault);
    }

    /// Compare the maintained interface state with a fresh `interface_view`
    /// of the cultures after every event (vertex mode; `O(N F)` per event).
    pub fn set_full_audit(&mut self, on: bool) {
        self.full_audit = on;
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn source(&self) -> &MarkSource {
        &self.source
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn interface(&self) -> &InterfaceState {
        &self.iface
    }

    pub fn cultures(&self) -> Option<&VertexConfig> {
        self.cultures.as_ref()
    }

    /// Entries in the pending-event queue, stale ones included.
    pub fn pending_marks(&self) -> usize {
        self.sched.len()
    }

    /// Marks processed at occupied levels, accepted or not.
    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn annihilations(&self) -> u64 {
        self.annihilations
    }

    pub fn freezings(&self) -> u64 {
        self.freezings
    }

    pub fn kills(&self) -> u64 {
        self.kills
    }

    pub fn active_edges(&self) -> usize {
        self.active_edges
    }

    pub fn frozen_edges(&self) -> usize {
        self.frozen_edges
    }

    /// No edge with `0 < ζ < F`: no particle can ever move again.
    pub fn is_absorbing(&self) -> bool {
        self.active_edges == 0
    }

    /// Time of the accepted event that made the state absorbing.
    pub fn absorption_time(&self) -> Option<f64> {
        self.absorbed_at
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            time: self.clock,
            total_particles: self.iface.total_particles(),
            per_level_counts: self.iface.level_counts(),
            active_edges: self.active_edges,
            frozen_edges: self.frozen_edges,
        }
    }

    fn snapshot_at(&self, time: f64) -> Snapshot {
        Snapshot { time, ..self.snapshot() }
    }

    /// Time of the next mark that lands on an occupied level.
    pub fn next_event_time(&mut self) -> Option<f64> {
        while let Some((edge, level, time)) = self.sched.peek() {
            if self.iface.occupied(edge, level) {
                return Some(time);
            }
            self.sched.pop();
        }
        None
    }

    /// Processes the earliest mark landing on an occupied level. Returns
    /// `None` when no particle is left.
    pub fn step(&mut self) -> Option<EventRecord> {
        loop {
            let (key, mark) = self.sched.pop()?;
            if !self.iface.occupied(key.edge, key.level) {
                continue;
            }
            self.clock = mark.time;
            let record = self.process(key, &mark);
            if self.iface.occupied(key.edge, key.level) {
                self.sched.schedule(&self.source, key.edge, key.level, self.clock);
            }
            return Some(record);
        }
    }

    /// Applies an externally supplied mark at `key`, which need not be the
    /// next one in the queue, then rebuilds the queue from the new clock.
    /// A mark at an empty level is rejected and only moves the clock.
    pub fn apply_mark(&mut self, key: StreamKey, mark: &Mark) -> Result<EventRecord> {
        if key.edge >= self.iface.num_edges() || key.level >= self.features {
            return usage(format!("stream key {key:?} outside the lattice"));
        }
        if mark.time < self.clock {
            return usage(format!("mark at {} precedes the clock {}", mark.time, self.clock));
        }
        self.clock = mark.time;
        let record = if self.iface.occupied(key.edge, key.level) {
            self.process(key, mark)
        } else {
            EventRecord {
                time: mark.time,
                edge: key.edge,
                level: key.level,
                direction: mark.direction,
                occupancy: self.iface.count(key.edge),
                accepted: false,
                kind: EventKind::Rejected,
                destination: None,
            }
        };
        self.rebuild_queue();
        Ok(record)
    }

    fn process(&mut self, key: StreamKey, mark: &Mark) -> EventRecord {
        self.events += 1;
        let edge = key.edge;
        let level = key.level;
        let occupancy = self.iface.count(edge);
        let mut threshold = self.rates[occupancy as usize];
        if self.mode == Mode::Interface && self.fault == Some(Fault::HalvedRate) {
            threshold *= 0.5;
        }
        let mut record = EventRecord {
            time: mark.time,
            edge,
            level,
            direction: mark.direction,
            occupancy,
            accepted: false,
            kind: EventKind::Rejected,
            destination: None,
        };
        if mark.uniform > threshold {
            return record;
        }
        self.accepted += 1;
        record.accepted = true;
        let touched = match self.mode {
            Mode::Interface => self.jump_particle(&mut record),
            Mode::Vertex => self.adopt_feature(&mut record),
        };
        match record.kind {
            EventKind::Annihilate => self.annihilations += 1,
            EventKind::FreezeForming => self.freezings += 1,
            EventKind::Killed => self.kills += 1,
            _ => {}
        }
        if self.active_edges == 0 && self.absorbed_at.is_none() {
            self.absorbed_at = Some(self.clock);
        }
        if self.mode == Mode::Vertex {
            self.audit_vertex(touched);
        }
        record
    }

    /// Interface-mode jump of the particle at `(record.edge, record.level)`.
    fn jump_particle(&mut self, record: &mut EventRecord) -> [Option<usize>; 2] {
        let (edge, level) = (record.edge, record.level);
        let bit = 1u64 << level;
        let num_edges = self.iface.num_edges();
        let mut direction = record.direction;
        if self.fault == Some(Fault::FlippedDirection) {
            direction = -direction;
        }
        record.direction = direction;
        let mut dest = self.topology.step_edge(edge, direction, num_edges);
        if self.fault == Some(Fault::SkippedEdge) {
            dest = dest.and_then(|d| self.topology.step_edge(d, direction, num_edges));
        }
        record.destination = dest;
        self.set_mask(edge, self.iface.mask(edge) & !bit);
        match dest {
            None => record.kind = EventKind::Killed,
            Some(d) if self.iface.occupied(d, level) => {
                if self.fault == Some(Fault::Coalescence) {
                    record.kind = EventKind::Coalesce;
                } else {
                    self.set_mask(d, self.iface.mask(d) & !bit);
                    record.kind = EventKind::Annihilate;
                }
            }
            Some(d) => {
                self.set_mask(d, self.iface.mask(d) | bit);
                record.kind = if self.iface.count(d) as usize == self.features {
                    EventKind::FreezeForming
                } else {
                    EventKind::Move
                };
            }
        }
        [Some(edge), dest]
    }

    /// Vertex-mode adoption: a right jump of the particle on edge
    /// `(x, x + 1)` means `x + 1` copies feature `level` from `x`.
    fn adopt_feature(&mut self, record: &mut EventRecord) -> [Option<usize>; 2] {
        let (edge, level) = (record.edge, record.level);
        let bit = 1u64 << level;
        let num_edges = self.iface.num_edges();
        let mut direction = record.direction;
        if self.fault == Some(Fault::SwappedAdoption) {
            direction = -direction;
        }
        record.direction = direction;
        let cultures = self.cultures.as_mut().expect("vertex mode holds cultures");
        let size = cultures.size();
        let (left, right) = self.topology.edge_vertices(edge, size);
        let (target, from) = if direction > 0 { (right, left) } else { (left, right) };
        cultures.set(target, level, cultures.get(from, level));
        let dest = self.topology.step_edge(edge, direction, num_edges);
        record.destination = dest;
        self.set_mask(edge, self.iface.mask(edge) & !bit);
        match dest {
            None => record.kind = EventKind::Killed,
            Some(d) => {
                let before = self.iface.occupied(d, level);
                let after = self.cultures.as_ref().unwrap().discordant_mask(d) & bit != 0;
                let mask = if after { self.iface.mask(d) | bit } else { self.iface.mask(d) & !bit };
                self.set_mask(d, mask);
                record.kind = match (before, after) {
                    (true, false) => EventKind::Annihilate,
                    (true, true) => EventKind::Coalesce,
                    _ if self.iface.count(d) as usize == self.features => EventKind::FreezeForming,
                    _ => EventKind::Move,
                };
            }
        }
        [Some(edge), dest]
    }

    /// Removes the particle at `(edge, level)` after it jumped off an open
    /// lattice. Only meaningful for the interface system on a non-periodic
    /// topology.
    pub fn kill_boundary(&mut self, edge: usize, level: usize) -> Result<()> {
        if self.topology.is_periodic() {
            return Err(Error::Internal("boundary killing invoked on the torus".into()));
        }
        if self.mode != Mode::Interface {
            return Err(Error::Internal("boundary killing applies to the interface system".into()));
        }
        if edge >= self.iface.num_edges() || !self.iface.occupied(edge, level) {
            return usage(format!("no particle at edge {edge}, level {level}"));
        }
        self.set_mask(edge, self.iface.mask(edge) & !(1u64 << level));
        self.kills += 1;
        if self.active_edges == 0 && self.absorbed_at.is_none() {
            self.absorbed_at = Some(self.clock);
        }
        Ok(())
    }

    /// Writes a new occupation mask for `edge`, keeping the active/frozen
    /// tallies and the queue in step.
    #[inline]
    fn set_mask(&mut self, edge: usize, mask: u64) {
        let f = self.features as u32;
        let old = self.iface.mask(edge);
        if old == mask {
            return;
        }
        let before = self.iface.count(edge);
        self.iface.set_mask(edge, mask);
        let after = mask.count_ones();
        let active = |c: u32| c > 0 && c < f;
        self.active_edges = self.active_edges + active(after) as usize - active(before) as usize;
        self.frozen_edges = self.frozen_edges + (after == f) as usize - (before == f) as usize;
        let mut gained = mask & !old;
        while gained != 0 {
            let level = gained.trailing_zeros() as usize;
            self.sched.schedule(&self.source, edge, level, self.clock);
            gained &= gained - 1;
        }
    }

    fn audit_vertex(&self, touched: [Option<usize>; 2]) {
        let cultures = self.cultures.as_ref().expect("vertex mode holds cultures");
        if self.full_audit {
            assert_eq!(
                interface_view(cultures),
                self.iface,
                "interface state drifted from the cultures at t = {}",
                self.clock
            );
        } else if cfg!(debug_assertions) {
            for e in touched.into_iter().flatten() {
                debug_assert_eq!(
                    cultures.discordant_mask(e),
                    self.iface.mask(e),
                    "edge {e} drifted at t = {}",
                    self.clock
                );
            }
        }
    }

    /// Runs until absorption or until `stop` fires, recording a snapshot at
    /// each of `sample_times` (ascending).
    pub fn run(&mut self, stop: &StopRule, sample_times: &[f64]) -> RunSummary {
        self.run_observed(stop, sample_times, |_, _| true)
    }

    /// As [`run`](Self::run), calling `observe` after every event; the run
    /// ends early when it returns `false`.
    pub fn run_observed<F>(&mut self, stop: &StopRule, sample_times: &[f64], mut observe: F) -> RunSummary
    where
        F: FnMut(&Simulator, &EventRecord) -> bool,
    {
        let mut snapshots = Vec::new();
        let mut next_sample = 0;
        let mut halted_by_time = false;
        let horizon = stop.max_time.unwrap_or(f64::INFINITY);
        let emit_until = |sim: &Simulator, limit: f64, inclusive: bool, snaps: &mut Vec<Snapshot>, next: &mut usize| {
            while *next < sample_times.len() {
                let s = sample_times[*next];
                let due = if inclusive { s <= limit } else { s < limit };
                if !due || s > horizon {
                    break;
                }
                snaps.push(sim.snapshot_at(s));
                *next += 1;
            }
        };
        loop {
            if self.is_absorbing() {
                break;
            }
            if stop.max_events.is_some_and(|n| self.events >= n) {
                break;
            }
            let Some(t_next) = self.next_event_time() else { break };
            emit_until(self, t_next, false, &mut snapshots, &mut next_sample);
            if t_next > horizon {
                halted_by_time = true;
                break;
            }
            let record = self.step().expect("a pending event exists");
            if !observe(self, &record) {
                break;
            }
        }
        if self.is_absorbing() {
            emit_until(self, f64::INFINITY, true, &mut snapshots, &mut next_sample);
        } else if halted_by_time {
            self.clock = self.clock.max(horizon);
            emit_until(self, horizon, true, &mut snapshots, &mut next_sample);
        }
        RunSummary {
            snapshots,
            events: self.events,
            accepted: self.accepted,
            annihilations: self.annihilations,
            freezings: self.freezings,
            kills: self.kills,
            absorbed: self.is_absorbing(),
            absorption_time: self.absorbed_at,
            final_time: self.clock,
        }
    }
}

#[cfg(test)]
mod tests;
