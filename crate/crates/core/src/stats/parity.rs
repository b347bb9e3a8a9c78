use crate::error::{usage, Result};
use crate::model::InterfaceState;

/// Per-level parity of the particle count over `edges`, one bit per level.
pub fn parity_mask(state: &InterfaceState, edges: impl IntoIterator<Item = usize>) -> u64 {
    edges.into_iter().fold(0, |acc, e| acc ^ state.mask(e))
}

fn unpack(mask: u64, features: usize) -> Vec<u8> {
    (0..features).map(|i| ((mask >> i) & 1) as u8).collect()
}

/// Per-level particle count mod 2 over the whole lattice.
pub fn parity_vector(state: &InterfaceState) -> Vec<u8> {
    unpack(parity_mask(state, 0..state.num_edges()), state.features())
}

/// Per-level particle count mod 2 over the edges `u..=v`.
pub fn interval_parity(state: &InterfaceState, u: usize, v: usize) -> Result<Vec<u8>> {
    check_interval(state, u, v)?;
    Ok(unpack(parity_mask(state, u..=v), state.features()))
}

/// True when two levels carry particle counts of different parity over the
/// edges `u..=v`.
pub fn active_interval(state: &InterfaceState, u: usize, v: usize) -> Result<bool> {
    check_interval(state, u, v)?;
    let full = crate::model::level_mask(state.features());
    let m = parity_mask(state, u..=v);
    Ok(m != 0 && m != full)
}

/// Same test on explicit per-level counts.
pub fn counts_active(counts: &[u64]) -> bool {
    counts.windows(2).any(|w| w[0] % 2 != w[1] % 2)
}

fn check_interval(state: &InterfaceState, u: usize, v: usize) -> Result<()> {
    if u > v || v >= state.num_edges() {
        return usage(format!("interval {u}..={v} is not inside 0..{}", state.num_edges()));
    }
    Ok(())
}
