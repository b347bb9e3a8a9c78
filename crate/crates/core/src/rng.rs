//! Addressable randomness for the graphical representation.
//!
//! Every `(edge, level)` pair owns a rate-one Poisson clock. The `n`th
//! arrival carries a time, a direction `±1` and a uniform thinning mark.
//! All three are pure functions of `(seed, edge, level, n)`, computed with
//! the Philox4x64-10 counter-based generator, so two engines reading the
//! same [`MarkSource`] see identical marks no matter in which order they
//! request them.

use crate::error::{usage, Error, Result};

const PHILOX_M0: u64 = 0xD2E7_470E_E14C_6C93;
const PHILOX_M1: u64 = 0xCA5A_8263_9512_1157;
const PHILOX_W0: u64 = 0x9E37_79B9_7F4A_7C15;
const PHILOX_W1: u64 = 0xBB67_AE85_84CA_A73B;

/// Counter lane tags separating independent uses of one seed.
pub(crate) const DOMAIN_MARKS: u64 = 0;
pub(crate) const DOMAIN_CULTURES: u64 = 1;
pub(crate) const DOMAIN_HALF_LINE: u64 = 2;

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

#[inline(always)]
fn mulhilo(a: u64, b: u64) -> (u64, u64) {
    let p = (a as u128) * (b as u128);
    ((p >> 64) as u64, p as u64)
}

/// The Philox4x64 block function with 10 rounds.
#[inline]
pub fn philox4x64_10(mut ctr: [u64; 4], mut key: [u64; 2]) -> [u64; 4] {
    for round in 0..10 {
        if round > 0 {
            key[0] = key[0].wrapping_add(PHILOX_W0);
            key[1] = key[1].wrapping_add(PHILOX_W1);
        }
        let (hi0, lo0) = mulhilo(PHILOX_M0, ctr[0]);
        let (hi1, lo1) = mulhilo(PHILOX_M1, ctr[2]);
        ctr = [hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0];
    }
    ctr
}

/// Uniform on `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_closed_open(x: u64) -> f64 {
    (x >> 11) as f64 * TWO_POW_M53
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
#[inline]
pub fn unit_open(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * TWO_POW_M53
}

/// Identifies one Poisson clock. Levels are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StreamKey {
    pub edge: usize,
    pub level: usize,
}

impl StreamKey {
    pub fn new(edge: usize, level: usize) -> Self {
        Self { edge, level }
    }
}

/// One arrival of a clock: the `index`-th arrow drawn at `(edge, level)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mark {
    pub index: u64,
    pub time: f64,
    pub direction: i8,
    pub uniform: f64,
}

/// Stateless keyed source of marks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkSource {
    seed: u64,
}

impl MarkSource {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub(crate) fn block(&self, domain: u64, a: u64, b: u64, c: u64) -> [u64; 4] {
        philox4x64_10([a, b, c, domain], [self.seed, 0])
    }

    #[inline]
    fn lanes(&self, key: StreamKey, n: u64) -> [u64; 4] {
        self.block(DOMAIN_MARKS, n, key.edge as u64, key.level as u64)
    }

    /// Builds mark `n` given the arrival time of mark `n - 1`.
    #[inline]
    fn assemble(&self, key: StreamKey, n: u64, previous_time: f64) -> Mark {
        let lanes = self.lanes(key, n);
        let u = unit_closed_open(lanes[0]);
        let gap = -(-u).ln_1p();
        Mark {
            index: n,
            time: previous_time + gap,
            direction: if lanes[1] >> 63 == 1 { 1 } else { -1 },
            uniform: unit_open(lanes[2]),
        }
    }

    /// The `n`th arrival (`n >= 1`) of the clock at `key`.
    pub fn mark_at(&self, key: StreamKey, n: u64) -> Result<Mark> {
        if n == 0 {
            return usage("arrival indices start at 1");
        }
        let mut mark = self.first(key);
        while mark.index < n {
            mark = self.successor(key, &mark);
        }
        Ok(mark)
    }

    #[inline]
    pub fn first(&self, key: StreamKey) -> Mark {
        self.assemble(key, 1, 0.0)
    }

    /// The arrival after `mark`. Accumulates times in the same order as
    /// [`mark_at`](Self::mark_at), so the results are bit-identical.
    #[inline]
    pub fn successor(&self, key: StreamKey, mark: &Mark) -> Mark {
        self.assemble(key, mark.index + 1, mark.time)
    }

    /// The first arrival strictly after time `after`.
    pub fn next_arrival(&self, key: StreamKey, after: f64) -> Mark {
        let mut mark = self.first(key);
        while mark.time <= after {
            mark = self.successor(key, &mark);
        }
        mark
    }
}

/// Seed of replica `index` under master seed `master`: `master XOR index`.
pub fn replica_seed(master: u64, index: u64) -> u64 {
    master ^ index
}

/// Parses a seed given in decimal or as `0x`-prefixed hexadecimal.
pub fn parse_seed(text: &str) -> Result<u64> {
    let t = text.trim();
    let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u64::from_str_radix(&hex.replace('_', ""), 16)
    } else {
        t.replace('_', "").parse::<u64>()
    };
    parsed.map_err(|e| Error::Parse(format!("invalid seed `{t}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn philox_known_answers() {
        assert_eq!(
            philox4x64_10([0; 4], [0; 2]),
            [0x16554d9eca36314c, 0xdb20fe9d672d0fdc, 0xd7e772cee186176b, 0x7e68b68aec7ba23b]
        );
        assert_eq!(
            philox4x64_10(
                [0x243f6a8885a308d3, 0x13198a2e03707344, 0xa4093822299f31d0, 0x082efa98ec4e6c89],
                [0x452821e638d01377, 0xbe5466cf34e90c6c]
            ),
            [0xa528f45403e61d95, 0x38c72dbd566e9788, 0xa5a1610e72fd18b5, 0x57bd43b5e52b7fe6]
        );
        assert_eq!(
            philox4x64_10([1, 2, 3, 4], [5, 6]),
            [0xa39b5519339fe354, 0xaceb1228efc25196, 0xa0a2e3c25aa5f4fc, 0x08d0cfa9332720df]
        );
    }

    #[test]
    fn marks_are_deterministic() {
        let src = MarkSource::new(42);
        let key = StreamKey::new(7, 2);
        let a = src.mark_at(key, 5).unwrap();
        let b = src.mark_at(key, 5).unwrap();
        assert_eq!(a.time.to_bits(), b.time.to_bits());
        assert_eq!(a.uniform.to_bits(), b.uniform.to_bits());
        assert_eq!(a.direction, b.direction);
        assert_eq!(a.index, 5);
    }

    #[test]
    fn index_zero_is_rejected() {
        assert!(matches!(MarkSource::new(1).mark_at(StreamKey::new(0, 0), 0), Err(Error::Usage(_))));
    }

    #[test]
    fn times_increase_and_fields_in_range() {
        let src = MarkSource::new(3);
        let key = StreamKey::new(1, 0);
        let mut prev = src.first(key);
        for _ in 0..1000 {
            let next = src.successor(key, &prev);
            assert!(next.time > prev.time);
            assert!(next.uniform > 0.0 && next.uniform < 1.0);
            assert!(next.direction == 1 || next.direction == -1);
            prev = next;
        }
    }

    #[test]
    fn next_arrival_matches_mark_at() {
        let src = MarkSource::new(11);
        let key = StreamKey::new(4, 1);
        assert_eq!(src.next_arrival(key, 0.0), src.mark_at(key, 1).unwrap());
        let third = src.mark_at(key, 3).unwrap();
        assert_eq!(src.next_arrival(key, third.time), src.mark_at(key, 4).unwrap());
        assert_eq!(src.next_arrival(key, third.time - 1e-12).index, 3);
    }

    #[test]
    fn seeds_parse_in_both_bases() {
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert_eq!(parse_seed("0x2A").unwrap(), 42);
        assert_eq!(parse_seed("0xffff_ffff_ffff_ffff").unwrap(), u64::MAX);
        assert!(parse_seed("forty-two").is_err());
        assert_eq!(replica_seed(0b1010, 3), 0b1001);
    }
}
