use super::config::VertexConfig;
use super::params::Topology;
use crate::error::{usage, Error, Result};
use crate::rng::{MarkSource, DOMAIN_HALF_LINE};

/// Particles on edges: `ξ(u, i)` as one bit mask per edge and the per-edge
/// count `ζ(u)`.
///
/// Text form is one line per edge holding `F` binary digits, level `F`
/// first, so level 1 (index 0) is the least significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceState {
    features: usize,
    topology: Topology,
    masks: Vec<u64>,
    counts: Vec<u32>,
}

impl InterfaceState {
    pub fn empty(features: usize, topology: Topology, num_edges: usize) -> Self {
        Self { features, topology, masks: vec![0; num_edges], counts: vec![0; num_edges] }
    }

    pub fn from_masks(features: usize, topology: Topology, masks: Vec<u64>) -> Result<Self> {
        if features == 0 || features > 64 {
            return usage(format!("feature count {features} outside 1..=64"));
        }
        let limit = level_mask(features);
        if masks.iter().any(|m| m & !limit != 0) {
            return usage(format!("occupation bit above level {features}"));
        }
        let counts = masks.iter().map(|m| m.count_ones()).collect();
        Ok(Self { features, topology, masks, counts })
    }

    /// Half-line law: edge 0 carries `F` particles, every level of every
    /// other edge independently carries one with probability 1/2.
    pub fn half_line_initial(features: usize, num_edges: usize, source: &MarkSource) -> Result<Self> {
        if num_edges == 0 {
            return usage("the half-line needs at least one edge");
        }
        let full = level_mask(features);
        let masks = (0..num_edges)
            .map(|u| if u == 0 { full } else { source.block(DOMAIN_HALF_LINE, u as u64, 0, 0)[0] & full })
            .collect();
        Self::from_masks(features, Topology::KilledHalfLine, masks)
    }

    pub fn features(&self) -> usize {
        self.features
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn num_edges(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    pub fn mask(&self, edge: usize) -> u64 {
        self.masks[edge]
    }

    #[inline]
    pub fn occupied(&self, edge: usize, level: usize) -> bool {
        self.masks[edge] >> level & 1 == 1
    }

    /// `ζ(u)`.
    #[inline]
    pub fn count(&self, edge: usize) -> u32 {
        self.counts[edge]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    #[inline]
    pub(crate) fn set_mask(&mut self, edge: usize, mask: u64) {
        self.masks[edge] = mask;
        self.counts[edge] = mask.count_ones();
    }

    pub fn total_particles(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn level_counts(&self) -> Vec<u64> {
        (0..self.features).map(|i| self.masks.iter().filter(|m| *m >> i & 1 == 1).count() as u64).collect()
    }

    /// Edges with `0 < ζ < F`.
    pub fn active_edges(&self) -> usize {
        let f = self.features as u32;
        self.counts.iter().filter(|&&c| c > 0 && c < f).count()
    }

    /// Edges with `ζ = F`.
    pub fn frozen_edges(&self) -> usize {
        let f = self.features as u32;
        self.counts.iter().filter(|&&c| c == f).count()
    }

    /// `ζ(u) = Σ_i ξ(u, i)` on every edge.
    pub fn is_consistent(&self) -> bool {
        self.masks.len() == self.counts.len() && self.masks.iter().zip(&self.counts).all(|(m, &c)| m.count_ones() == c)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.masks.len() * (self.features + 1));
        for m in &self.masks {
            for i in (0..self.features).rev() {
                out.push(if m >> i & 1 == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, topology: Topology) -> Result<Self> {
        let mut masks = Vec::new();
        let mut features = None;
        for (lineno, line) in text.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty()) {
            if features.is_some_and(|f| f != line.len()) {
                return Err(Error::Parse(format!("line {}: inconsistent level count", lineno + 1)));
            }
            features = Some(line.len());
            let mask = u64::from_str_radix(line, 2).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            masks.push(mask);
        }
        let features = features.ok_or_else(|| Error::Parse("empty interface state".into()))?;
        Self::from_masks(features, topology, masks)
    }
}

#[inline]
pub(crate) fn level_mask(features: usize) -> u64 {
    if features >= 64 {
        u64::MAX
    } else {
        (1u64 << features) - 1
    }
}

/// Disagreement indicators along the edges of `config`.
pub fn interface_view(config: &VertexConfig) -> InterfaceState {
    let masks = (0..config.num_edges()).map(|u| config.discordant_mask(u)).collect();
    InterfaceState::from_masks(config.features(), config.topology(), masks).expect("masks within F levels")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monoculture_has_no_particles() {
        let c = VertexConfig::from_flat(2, 3, Topology::Torus, vec![1; 12]).unwrap();
        let v = interface_view(&c);
        assert_eq!(v.total_particles(), 0);
        assert_eq!(v.num_edges(), 6);
    }

    #[test]
    fn small_torus_example() {
        // Cultures (0,0,1,1) on a 4-torus: boundaries between vertices 1|2 and 3|0,
        // i.e. one-based edges (2,3) and (4,1), zero-based edges 1 and 3.
        let c = VertexConfig::from_flat(1, 2, Topology::Torus, vec![0, 0, 1, 1]).unwrap();
        let v = interface_view(&c);
        assert_eq!(v.counts(), &[0, 1, 0, 1]);
        assert_eq!(v.total_particles(), 2);
    }

    #[test]
    fn path_has_one_edge_fewer() {
        let c = VertexConfig::from_flat(1, 2, Topology::Path, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(interface_view(&c).counts(), &[0, 1, 0]);
    }

    #[test]
    fn text_layout_puts_level_one_last() {
        let s = InterfaceState::from_masks(3, Topology::Torus, vec![0b001, 0b110]).unwrap();
        assert_eq!(s.to_text(), "001\n110\n");
        assert_eq!(InterfaceState::parse(&s.to_text(), Topology::Torus).unwrap(), s);
        assert!(InterfaceState::parse("01\n011\n", Topology::Torus).is_err());
        assert!(InterfaceState::from_masks(2, Topology::Torus, vec![0b100]).is_err());
    }

    #[test]
    fn half_line_law() {
        let s = InterfaceState::half_line_initial(3, 500, &MarkSource::new(5)).unwrap();
        assert_eq!(s.count(0), 3);
        assert!(s.is_consistent());
        let per_level = s.level_counts();
        for c in per_level {
            assert!((200..=300).contains(&c), "level count {c}");
        }
    }
}
