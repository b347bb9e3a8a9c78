use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{config, Error, Result};

/// Largest supported feature count. Edge occupations are stored as one
/// 64-bit mask per edge.
pub const MAX_FEATURES: usize = 64;

/// Boundary convention of the one-dimensional lattice.
///
/// Vertices are `0..N`. Edge `u` joins vertices `u` and `u + 1`
/// (modulo `N` on the torus), so the torus has `N` edges and the two open
/// topologies have `N - 1`. On the open topologies a particle leaving the
/// edge set is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Torus,
    Path,
    /// Finite truncation of the half-line `{0, 1, 2, ...}` with killing at
    /// both ends. Only valid for the interface system.
    KilledHalfLine,
}

impl Topology {
    pub fn num_edges(self, size: usize) -> usize {
        match self {
            Topology::Torus => size,
            Topology::Path | Topology::KilledHalfLine => size - 1,
        }
    }

    pub fn is_periodic(self) -> bool {
        matches!(self, Topology::Torus)
    }

    /// Endpoints `(left, right)` of edge `u`.
    #[inline]
    pub fn edge_vertices(self, edge: usize, size: usize) -> (usize, usize) {
        match self {
            Topology::Torus => (edge, if edge + 1 == size { 0 } else { edge + 1 }),
            _ => (edge, edge + 1),
        }
    }

    /// The edge reached from `edge` by a unit step in `direction`, or `None`
    /// when the step leaves the lattice.
    #[inline]
    pub fn step_edge(self, edge: usize, direction: i8, num_edges: usize) -> Option<usize> {
        if direction > 0 {
            if edge + 1 < num_edges {
                Some(edge + 1)
            } else if self.is_periodic() {
                Some(0)
            } else {
                None
            }
        } else if edge > 0 {
            Some(edge - 1)
        } else if self.is_periodic() {
            Some(num_edges - 1)
        } else {
            None
        }
    }

    /// The edge joining `x` and `y`, if they are nearest neighbours.
    pub fn edge_between(self, x: usize, y: usize, size: usize) -> Option<usize> {
        if x >= size || y >= size || x == y {
            return None;
        }
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        if hi == lo + 1 {
            Some(lo)
        } else if self.is_periodic() && lo == 0 && hi == size - 1 {
            Some(size - 1)
        } else {
            None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Torus => "torus",
            Topology::Path => "path",
            Topology::KilledHalfLine => "killed-half-line",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "torus" | "cycle" => Ok(Topology::Torus),
            "path" => Ok(Topology::Path),
            "killed-half-line" | "killed" | "half-line" => Ok(Topology::KilledHalfLine),
            other => Err(Error::Parse(format!("unknown topology `{other}`"))),
        }
    }
}

/// When a run stops. A run always stops on absorption; these bound it
/// further. With both fields `None` the run continues until absorption.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StopRule {
    pub max_time: Option<f64>,
    pub max_events: Option<u64>,
}

impl StopRule {
    pub fn until_absorbed() -> Self {
        Self::default()
    }

    pub fn time(t: f64) -> Self {
        Self { max_time: Some(t), max_events: None }
    }

    pub fn events(n: u64) -> Self {
        Self { max_time: None, max_events: Some(n) }
    }
}

/// Parameters of one system: `F` features with `q` states each on `N`
/// vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub features: usize,
    pub states: u32,
    pub size: usize,
    pub topology: Topology,
    pub seed: u64,
    pub stop: StopRule,
}

impl SystemParams {
    pub fn new(features: usize, states: u32, size: usize, topology: Topology, seed: u64) -> Result<Self> {
        let params = Self { features, states, size, topology, seed, stop: StopRule::default() };
        params.validate()?;
        Ok(params)
    }

    pub fn with_stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.features == 0 || self.features > MAX_FEATURES {
            return config(format!("feature count must be in 1..={MAX_FEATURES}, got {}", self.features));
        }
        if self.states < 2 {
            return config(format!("state count must be at least 2, got {}", self.states));
        }
        if self.size < 2 {
            return config(format!("lattice size must be at least 2, got {}", self.size));
        }
        if self.topology == Topology::KilledHalfLine && self.states != 2 {
            return config("the killed half-line is only defined for the two-state interface system");
        }
        if let Some(t) = self.stop.max_time {
            if t.is_nan() || t < 0.0 {
                return config(format!("time horizon must be nonnegative, got {t}"));
            }
        }
        Ok(())
    }

    pub fn num_edges(&self) -> usize {
        self.topology.num_edges(self.size)
    }

    /// Whether the autonomous interface (annihilating walk) dynamics apply.
    pub fn interface_capable(&self) -> bool {
        self.states == 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_per_topology() {
        assert_eq!(Topology::Torus.num_edges(10), 10);
        assert_eq!(Topology::Path.num_edges(10), 9);
        assert_eq!(Topology::Torus.edge_vertices(9, 10), (9, 0));
        assert_eq!(Topology::Torus.step_edge(9, 1, 10), Some(0));
        assert_eq!(Topology::Torus.step_edge(0, -1, 10), Some(9));
        assert_eq!(Topology::Path.step_edge(8, 1, 9), None);
        assert_eq!(Topology::KilledHalfLine.step_edge(0, -1, 9), None);
        assert_eq!(Topology::Path.step_edge(3, -1, 9), Some(2));
    }

    #[test]
    fn adjacency() {
        assert_eq!(Topology::Torus.edge_between(0, 9, 10), Some(9));
        assert_eq!(Topology::Path.edge_between(0, 9, 10), None);
        assert_eq!(Topology::Path.edge_between(4, 3, 10), Some(3));
        assert_eq!(Topology::Torus.edge_between(2, 4, 10), None);
        assert_eq!(Topology::Torus.edge_between(2, 2, 10), None);
    }

    #[test]
    fn validation() {
        assert!(SystemParams::new(3, 2, 10, Topology::Torus, 0).is_ok());
        assert!(SystemParams::new(0, 2, 10, Topology::Torus, 0).is_err());
        assert!(SystemParams::new(3, 1, 10, Topology::Torus, 0).is_err());
        assert!(SystemParams::new(3, 2, 1, Topology::Torus, 0).is_err());
        assert!(SystemParams::new(3, 3, 10, Topology::KilledHalfLine, 0).is_err());
        assert!(SystemParams::new(65, 2, 10, Topology::Torus, 0).is_err());
    }

    #[test]
    fn topology_names_round_trip() {
        for t in [Topology::Torus, Topology::Path, Topology::KilledHalfLine] {
            assert_eq!(t.as_str().parse::<Topology>().unwrap(), t);
        }
        assert!("mobius".parse::<Topology>().is_err());
    }
}
