//! Space-time images of the interface system.

use axelrod_core::{Initial, Mode, Simulator, SystemParams};

/// `pixels[edge][bin]`, sampled at the end of each of `bins` equal time bins
/// over `[0, t_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub total: Vec<Vec<u32>>,
    pub level: Vec<Vec<u32>>,
}

pub fn build_raster(
    params: &SystemParams,
    initial: Initial,
    t_max: f64,
    bins: usize,
    level: usize,
) -> axelrod_core::Result<Raster> {
    let mut sim = Simulator::from_params(params, Mode::Interface, initial)?;
    let edges = params.num_edges();
    let mut total = vec![vec![0; bins]; edges];
    let mut single = vec![vec![0; bins]; edges];
    for b in 0..bins {
        let t = t_max * (b + 1) as f64 / bins as f64;
        while sim.next_event_time().is_some_and(|next| next <= t) {
            sim.step();
        }
        let state = sim.interface();
        for e in 0..edges {
            total[e][b] = state.count(e);
            single[e][b] = state.occupied(e, level) as u32;
        }
    }
    Ok(Raster { total, level: single })
}

/// Plain PGM (`P2`) with the given comment lines.
pub fn to_pgm(pixels: &[Vec<u32>], maxval: u32, comments: &[String]) -> String {
    let height = pixels.len();
    let width = pixels.first().map_or(0, Vec::len);
    let mut s = String::from("P2\n");
    for c in comments {
        s.push_str("# ");
        s.push_str(c);
        s.push('\n');
    }
    s.push_str(&format!("{width} {height}\n{maxval}\n"));
    for row in pixels {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}
