//! Exact minimum MUFI for tiny conflict graphs.
//!
//! Take any optimal assignment and list its vertices by block start. Placing
//! them in that order, each at the lowest slice clear of its already placed
//! neighbors, never ends a block later than the optimum did. So the optimum
//! is the best lowest-placement over all vertex orders, which this module
//! searches depth first with pruning on the running MUFI.

use crate::error::{Error, Result};
use crate::rsa::{ConflictGraph, Interval};

/// Largest graph the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 10;

/// Serial stacking bound `Σ weights + (n − 1)·GB`, which always admits a
/// valid assignment.
pub fn default_cap(g: &ConflictGraph, gb: u32) -> u32 {
    let n = g.vertex_count() as u32;
    g.weights().iter().sum::<u32>() + n.saturating_sub(1) * gb
}

struct Search<'a> {
    g: &'a ConflictGraph,
    gb: u32,
    placed: Vec<Option<Interval>>,
    best: u32,
}

impl Search<'_> {
    /// Lowest start clear of placed neighbors, scanning upward slice by slice.
    fn lowest_start(&self, v: usize) -> u32 {
        let width = self.g.weight(v);
        let mut start = 1;
        'scan: loop {
            let candidate = Interval::with_width(start, width);
            for &u in self.g.neighbors(v) {
                if let Some(other) = self.placed[u] {
                    if candidate.distance(&other) < self.gb as i64 {
                        start += 1;
                        continue 'scan;
                    }
                }
            }
            return start;
        }
    }

    fn run(&mut self, remaining: usize, current: u32) {
        if remaining == 0 {
            self.best = self.best.min(current);
            return;
        }
        for v in 0..self.g.vertex_count() {
            if self.placed[v].is_some() {
                continue;
            }
            let iv = Interval::with_width(self.lowest_start(v), self.g.weight(v));
            let reach = current.max(iv.end);
            if reach >= self.best {
                continue;
            }
            self.placed[v] = Some(iv);
            self.run(remaining - 1, reach);
            self.placed[v] = None;
        }
    }
}

/// Minimum MUFI over all valid assignments of `g`. Fails when `g` has more
/// than [`BRUTE_FORCE_LIMIT`] vertices or when the optimum exceeds `cap`.
pub fn brute_force_optimal_mufi(g: &ConflictGraph, gb: u32, cap: u32) -> Result<u32> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Err(Error::DegenerateInput("graph has no vertices".into()));
    }
    let mut search = Search {
        g,
        gb,
        placed: vec![None; n],
        best: cap.saturating_add(1),
    };
    search.run(n, 0);
    if search.best > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(search.best)
}
