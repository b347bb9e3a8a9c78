//! Sample-time grids.

use anyhow::{bail, Context, Result};

/// Parses `geom:T0:FACTOR:COUNT`, `lin:T0:T1:COUNT` or a comma-separated
/// list of times. The result is strictly increasing and non-negative.
pub fn parse_sample_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let num = |s: &str| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?} in sample grid"));
    let times = if let Some(rest) = spec.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [t0, factor, count] = parts[..] else { bail!("expected geom:T0:FACTOR:COUNT, got {spec:?}") };
        let (t0, factor) = (num(t0)?, num(factor)?);
        let count: u32 = count.trim().parse().context("bad count in sample grid")?;
        if t0 <= 0.0 || factor <= 1.0 {
            bail!("geometric grid needs T0 > 0 and FACTOR > 1");
        }
        (0..count).map(|k| t0 * factor.powi(k as i32)).collect()
    } else if let Some(rest) = spec.strip_prefix("lin:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [a, b, count] = parts[..] else { bail!("expected lin:T0:T1:COUNT, got {spec:?}") };
        let (a, b) = (num(a)?, num(b)?);
        let count: usize = count.trim().parse().context("bad count in sample grid")?;
        match count {
            0 => Vec::new(),
            1 => vec![a],
            n => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
        }
    } else if spec.is_empty() {
        Vec::new()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<f64>>>()?
    };
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        bail!("sample times must be finite and non-negative");
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        bail!("sample times must be strictly increasing");
    }
    Ok(times)
}
