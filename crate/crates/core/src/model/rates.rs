use num_rational::Ratio;

use crate::error::{usage, Result};

/// Exact rational used for overlaps and rates.
pub type Rational = Ratio<i64>;

/// Jump rate of each particle at a `j`-site: `r(j) = 1/j - 1/F`.
///
/// Defined for `1 <= j <= F`; an empty site carries no particle to move.
pub fn jump_rate(j: usize, features: usize) -> Result<Rational> {
    if features == 0 {
        return usage("feature count must be positive");
    }
    if j == 0 || j > features {
        return usage(format!("occupancy {j} outside 1..={features}"));
    }
    Ok(Rational::new(1, j as i64) - Rational::new(1, features as i64))
}

/// Directed per-feature copy rate for a pair with `j` discordant features:
/// `(1 / 2F) * overlap / (1 - overlap) = (F - j) / (2 F j)`.
pub fn directed_rate(j: usize, features: usize) -> Result<Rational> {
    if j == 0 || j > features {
        return usage(format!("discordance {j} outside 1..={features}"));
    }
    let f = features as i64;
    let overlap = Rational::new(f - j as i64, f);
    Ok(Rational::new(1, 2 * f) * overlap / (Rational::from_integer(1) - overlap))
}

/// Table of `r(j)` as `f64` for `j = 0..=F`; entry 0 is unused and zero.
pub fn jump_rate_table(features: usize) -> Vec<f64> {
    let mut table = vec![0.0; features + 1];
    for (j, slot) in table.iter_mut().enumerate().skip(1) {
        let r = jump_rate(j, features).expect("j in range");
        *slot = *r.numer() as f64 / *r.denom() as f64;
    }
    table
}
