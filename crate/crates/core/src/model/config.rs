use std::fmt::Write as _;

use super::params::{SystemParams, Topology};
use super::rates::{directed_rate, Rational};
use crate::error::{config, usage, Error, Result};
use crate::rng::{MarkSource, DOMAIN_CULTURES};

/// One individual's culture: `F` feature states, each in `0..q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Culture(Vec<u32>);

impl Culture {
    pub fn new(values: Vec<u32>, states: u32) -> Result<Self> {
        if values.is_empty() {
            return usage("a culture needs at least one feature");
        }
        if let Some(v) = values.iter().find(|&&v| v >= states) {
            return usage(format!("feature state {v} outside 0..{states}"));
        }
        Ok(Self(values))
    }

    pub fn features(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// The culture map `η`: one culture per vertex, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexConfig {
    features: usize,
    states: u32,
    topology: Topology,
    data: Vec<u32>,
}

impl VertexConfig {
    pub fn new(features: usize, states: u32, topology: Topology, cultures: &[Culture]) -> Result<Self> {
        let mut data = Vec::with_capacity(cultures.len() * features);
        for c in cultures {
            if c.features() != features {
                return usage(format!("culture has {} features, expected {features}", c.features()));
            }
            if let Some(v) = c.as_slice().iter().find(|&&v| v >= states) {
                return usage(format!("feature state {v} outside 0..{states}"));
            }
            data.extend_from_slice(c.as_slice());
        }
        Self::from_flat(features, states, topology, data)
    }

    /// Builds a configuration from `N * F` states laid out vertex by vertex.
    pub fn from_flat(features: usize, states: u32, topology: Topology, data: Vec<u32>) -> Result<Self> {
        if features == 0 || !data.len().is_multiple_of(features) {
            return usage("flat culture data length must be a multiple of F");
        }
        if data.len() / features < 2 {
            return usage("a lattice needs at least two vertices");
        }
        if topology == Topology::KilledHalfLine {
            return config("the culture chain is not defined on the killed half-line");
        }
        if data.iter().any(|&v| v >= states) {
            return usage(format!("feature state outside 0..{states}"));
        }
        Ok(Self { features, states, topology, data })
    }

    /// Every vertex holds the all-zero culture.
    pub fn monoculture(params: &SystemParams) -> Result<Self> {
        Self::from_flat(params.features, params.states, params.topology, vec![0; params.size * params.features])
    }

    pub fn size(&self) -> usize {
        self.data.len() / self.features
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn num_edges(&self) -> usize {
        self.topology.num_edges(self.size())
    }

    #[inline]
    pub fn culture(&self, x: usize) -> &[u32] {
        &self.data[x * self.features..(x + 1) * self.features]
    }

    #[inline]
    pub fn get(&self, x: usize, level: usize) -> u32 {
        self.data[x * self.features + level]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, level: usize, value: u32) {
        self.data[x * self.features + level] = value;
    }

    /// Bit `i` set iff the endpoints of `edge` disagree at level `i`.
    #[inline]
    pub fn discordant_mask(&self, edge: usize) -> u64 {
        let (a, b) = self.topology.edge_vertices(edge, self.size());
        self.culture(a)
            .iter()
            .zip(self.culture(b))
            .enumerate()
            .fold(0u64, |m, (i, (p, q))| if p != q { m | (1 << i) } else { m })
    }

    fn check_pair(&self, x: usize, y: usize) -> Result<usize> {
        self.topology
            .edge_between(x, y, self.size())
            .ok_or_else(|| Error::Usage(format!("vertices {x} and {y} are not nearest neighbours")))
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level >= self.features {
            return usage(format!("level {level} outside 0..{}", self.features));
        }
        Ok(())
    }

    fn agreements(&self, x: usize, y: usize) -> usize {
        self.culture(x).iter().zip(self.culture(y)).filter(|(a, b)| a == b).count()
    }

    /// Fraction of features shared by adjacent vertices `x` and `y`.
    pub fn overlap(&self, x: usize, y: usize) -> Result<Rational> {
        self.check_pair(x, y)?;
        Ok(Rational::new(self.agreements(x, y) as i64, self.features as i64))
    }

    /// Zero-based levels at which adjacent `x` and `y` disagree.
    pub fn discordant_levels(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check_pair(x, y)?;
        Ok((0..self.features).filter(|&i| self.get(x, i) != self.get(y, i)).collect())
    }

    /// The configuration in which `x` has copied feature `level` from `y`.
    pub fn apply_copy(&self, x: usize, y: usize, level: usize) -> Result<Self> {
        self.check_pair(x, y)?;
        self.check_level(level)?;
        let mut next = self.clone();
        next.set(x, level, self.get(y, level));
        Ok(next)
    }

    /// Rate at which `x` copies feature `level` from adjacent `y`.
    pub fn copy_rate(&self, x: usize, y: usize, level: usize) -> Result<Rational> {
        self.check_pair(x, y)?;
        self.check_level(level)?;
        if self.get(x, level) == self.get(y, level) {
            return Ok(Rational::from_integer(0));
        }
        let j = self.features - self.agreements(x, y);
        directed_rate(j, self.features)
    }

    /// One line per vertex, features as comma-separated integers.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 2);
        for x in 0..self.size() {
            for (i, v) in self.culture(x).iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, states: u32, topology: Topology) -> Result<Self> {
        let mut data = Vec::new();
        let mut features = None;
        for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let row = line
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            match features {
                None => features = Some(row.len()),
                Some(f) if f != row.len() => {
                    return Err(Error::Parse(format!("line {}: expected {f} features, got {}", lineno + 1, row.len())))
                }
                _ => {}
            }
            data.extend(row);
        }
        let features = features.ok_or_else(|| Error::Parse("empty configuration".into()))?;
        Self::from_flat(features, states, topology, data)
    }
}

/// Independent uniform cultures over `q^F` at every vertex, determined by
/// the source's seed.
pub fn sample_initial(params: &SystemParams, source: &MarkSource) -> Result<VertexConfig> {
    params.validate()?;
    let q = params.states as u128;
    let mut data = Vec::with_capacity(params.size * params.features);
    for x in 0..params.size {
        for i in 0..params.features {
            let word = source.block(DOMAIN_CULTURES, x as u64, i as u64, 0)[0];
            data.push(((word as u128 * q) >> 64) as u32);
        }
    }
    VertexConfig::from_flat(params.features, params.states, params.topology, data)
}
