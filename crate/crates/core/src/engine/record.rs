use serde::Serialize;

/// What an accepted or rejected mark did.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// The particle moved to an empty level of a neighbouring edge that is
    /// not full afterwards.
    Move,
    /// The particle landed on an occupied level; both vanished.
    Annihilate,
    /// The particle moved and completed an `F`-site.
    FreezeForming,
    /// The particle landed on an occupied level and only one particle
    /// remains. Happens in the culture chain when `q > 2`.
    Coalesce,
    /// The mark's uniform exceeded the jump rate.
    Rejected,
    /// The particle left an open lattice and was removed.
    Killed,
}

/// One processed mark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventRecord {
    pub time: f64,
    pub edge: usize,
    pub level: usize,
    /// Direction the particle moved in (or would have, when rejected).
    pub direction: i8,
    /// `ζ(edge)` just before the event.
    pub occupancy: u32,
    pub accepted: bool,
    pub kind: EventKind,
    /// Edge the particle jumped onto, `None` when it left the lattice.
    pub destination: Option<usize>,
}

impl EventRecord {
    /// Change in the total particle count caused by this event.
    pub fn particle_delta(&self) -> i64 {
        match self.kind {
            EventKind::Move | EventKind::FreezeForming | EventKind::Rejected => 0,
            EventKind::Annihilate => -2,
            EventKind::Coalesce | EventKind::Killed => -1,
        }
    }

    /// Left edge `u` of the colliding pair `(u, u + 1)` of an annihilation.
    pub fn annihilation_site(&self) -> Option<usize> {
        match (self.kind, self.destination) {
            (EventKind::Annihilate, Some(d)) => Some(if self.direction > 0 { self.edge } else { d }),
            _ => None,
        }
    }

    /// Edge that became an `F`-site, if any.
    pub fn freezing_site(&self) -> Option<usize> {
        match self.kind {
            EventKind::FreezeForming => self.destination,
            _ => None,
        }
    }
}

/// Deliberate errors for checking that the coupling oracle detects
/// divergence. All but [`Fault::SwappedAdoption`] act on the interface
/// system; that one acts on the culture chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Acceptance threshold `r(j) / 2` instead of `r(j)`.
    HalvedRate,
    /// Particles jump against the mark's direction.
    FlippedDirection,
    /// Collisions leave one particle instead of none.
    Coalescence,
    /// The sending vertex adopts instead of the receiving one.
    SwappedAdoption,
    /// Particles land two edges away.
    SkippedEdge,
}

impl Fault {
    pub const ALL: [Fault; 5] =
        [Fault::HalvedRate, Fault::FlippedDirection, Fault::Coalescence, Fault::SwappedAdoption, Fault::SkippedEdge];

    pub fn name(self) -> &'static str {
        match self {
            Fault::HalvedRate => "halved-rate",
            Fault::FlippedDirection => "flipped-direction",
            Fault::Coalescence => "coalescence",
            Fault::SwappedAdoption => "swapped-adoption",
            Fault::SkippedEdge => "skipped-edge",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Aggregate state written to the snapshot JSONL stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    pub total_particles: u64,
    pub per_level_counts: Vec<u64>,
    pub active_edges: usize,
    pub frozen_edges: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub snapshots: Vec<Snapshot>,
    pub events: u64,
    pub accepted: u64,
    pub annihilations: u64,
    pub freezings: u64,
    pub kills: u64,
    pub absorbed: bool,
    pub absorption_time: Option<f64>,
    pub final_time: f64,
}
