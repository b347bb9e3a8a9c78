use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::rng::{Mark, MarkSource, StreamKey};

/// Heap entry; ordered so that the earliest mark sits on top, ties broken
/// by `(edge, level)`.
#[derive(Debug, Clone, Copy)]
struct Pending {
    time: f64,
    edge: u32,
    level: u32,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.edge.cmp(&self.edge))
            .then_with(|| other.level.cmp(&self.level))
    }
}

const UNSTARTED: Mark = Mark { index: 0, time: 0.0, direction: 1, uniform: 0.5 };

/// Pending-event queue holding at most one entry per clock.
///
/// Each clock keeps a cursor on the last mark computed for it. Only clocks
/// whose level is occupied need an entry; a clock whose particle left keeps
/// its stale entry until popped, and a newly occupied clock is advanced past
/// the current time before being pushed.
#[derive(Debug, Clone)]
pub(crate) struct Scheduler {
    features: usize,
    heap: BinaryHeap<Pending>,
    cursors: Vec<Mark>,
    scheduled: Vec<bool>,
}

impl Scheduler {
    pub fn new(num_edges: usize, features: usize) -> Self {
        let keys = num_edges * features;
        Self {
            features,
            heap: BinaryHeap::with_capacity(keys),
            cursors: vec![UNSTARTED; keys],
            scheduled: vec![false; keys],
        }
    }

    #[inline]
    fn index(&self, edge: usize, level: usize) -> usize {
        edge * self.features + level
    }

    /// Ensures the clock at `(edge, level)` has an entry later than `now`.
    #[inline]
    pub fn schedule(&mut self, source: &MarkSource, edge: usize, level: usize, now: f64) {
        let k = self.index(edge, level);
        if self.scheduled[k] {
            return;
        }
        let key = StreamKey::new(edge, level);
        let mut mark = self.cursors[k];
        while mark.index == 0 || mark.time <= now {
            mark = source.successor(key, &mark);
        }
        self.cursors[k] = mark;
        self.scheduled[k] = true;
        self.heap.push(Pending { time: mark.time, edge: edge as u32, level: level as u32 });
    }

    /// Removes and returns the earliest pending mark.
    #[inline]
    pub fn pop(&mut self) -> Option<(StreamKey, Mark)> {
        let top = self.heap.pop()?;
        let (edge, level) = (top.edge as usize, top.level as usize);
        let k = self.index(edge, level);
        self.scheduled[k] = false;
        Some((StreamKey::new(edge, level), self.cursors[k]))
    }

    #[inline]
    pub fn peek(&self) -> Option<(usize, usize, f64)> {
        self.heap.peek().map(|p| (p.edge as usize, p.level as usize, p.time))
    }

    pub fn clear(&mut self) {
        self.heap.clear();
        self.scheduled.iter_mut().for_each(|s| *s = false);
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_time_order_and_matches_addressing() {
        let src = MarkSource::new(8);
        let mut s = Scheduler::new(4, 2);
        for e in 0..4 {
            for l in 0..2 {
                s.schedule(&src, e, l, 0.0);
            }
        }
        assert_eq!(s.len(), 8);
        let mut last = 0.0;
        while let Some((key, mark)) = s.pop() {
            assert!(mark.time >= last);
            assert_eq!(mark, src.mark_at(key, 1).unwrap());
            last = mark.time;
        }
    }

    #[test]
    fn one_entry_per_clock() {
        let src = MarkSource::new(1);
        let mut s = Scheduler::new(1, 1);
        s.schedule(&src, 0, 0, 0.0);
        s.schedule(&src, 0, 0, 0.0);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn rescheduling_skips_past_now() {
        let src = MarkSource::new(2);
        let key = StreamKey::new(0, 0);
        let mut s = Scheduler::new(1, 1);
        s.schedule(&src, 0, 0, 0.0);
        let (_, first) = s.pop().unwrap();
        let later = src.mark_at(key, 5).unwrap().time;
        s.schedule(&src, 0, 0, later);
        let (_, next) = s.pop().unwrap();
        assert_eq!(next.index, 6);
        assert!(next.time > later && first.index == 1);
    }
}
