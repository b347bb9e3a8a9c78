use crate::model::{InterfaceState, Topology, VertexConfig};

/// Lengths of the maximal monocultural runs, cyclic on the torus.
pub fn domain_lengths(config: &VertexConfig) -> Vec<usize> {
    let boundaries: Vec<bool> = (0..config.num_edges()).map(|e| config.discordant_mask(e) != 0).collect();
    runs(&boundaries, config.size(), config.topology())
}

/// Domain lengths read off the interface: neighbours share a culture iff
/// their edge carries no particle.
pub fn domain_lengths_from_interface(state: &InterfaceState) -> Vec<usize> {
    let boundaries: Vec<bool> = state.counts().iter().map(|&c| c != 0).collect();
    let size = if state.topology().is_periodic() { state.num_edges() } else { state.num_edges() + 1 };
    runs(&boundaries, size, state.topology())
}

/// Largest monocultural run.
pub fn s_max(config: &VertexConfig) -> usize {
    domain_lengths(config).into_iter().max().unwrap_or(0)
}

/// Number of monocultural runs.
pub fn n_c(config: &VertexConfig) -> usize {
    domain_lengths(config).len()
}

fn runs(boundaries: &[bool], size: usize, topology: Topology) -> Vec<usize> {
    let cuts: Vec<usize> = (0..boundaries.len()).filter(|&e| boundaries[e]).collect();
    if topology.is_periodic() {
        // Edge e separates vertices e and e + 1.
        match cuts.len() {
            0 => vec![size],
            k => (0..k)
                .map(|i| {
                    let (a, b) = (cuts[i], cuts[(i + 1) % k]);
                    if b > a {
                        b - a
                    } else {
                        b + size - a
                    }
                })
                .collect(),
        }
    } else {
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut start = 0;
        for &e in &cuts {
            out.push(e + 1 - start);
            start = e + 1;
        }
        out.push(size - start);
        out
    }
}
