use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rsa::ConflictGraph;

/// Largest graph handed to the exact chromatic-number search.
pub const EXACT_CHROMATIC_LIMIT: usize = 50;

/// Vertex coloring with colors `0..class_count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<usize>,
    class_count: usize,
}

impl Coloring {
    /// Wraps a color vector. Colors are renumbered densely in order of first
    /// appearance so `class_count` equals the number of distinct colors.
    pub fn new(colors: Vec<usize>) -> Self {
        let mut remap = std::collections::HashMap::new();
        let colors: Vec<usize> = colors
            .into_iter()
            .map(|c| {
                let next = remap.len();
                *remap.entry(c).or_insert(next)
            })
            .collect();
        Coloring {
            class_count: remap.len(),
            colors,
        }
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Vertex lists per color, each sorted.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.class_count];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }

    /// First monochromatic edge, if any.
    pub fn conflict(&self, g: &ConflictGraph) -> Option<(usize, usize)> {
        g.edges().find(|&(u, v)| self.colors[u] == self.colors[v])
    }

    pub fn is_proper(&self, g: &ConflictGraph) -> bool {
        self.colors.len() == g.vertex_count() && self.conflict(g).is_none()
    }
}

/// DSATUR: repeatedly color the uncolored vertex whose neighbors already use
/// the most distinct colors (ties to the lowest index) with the smallest
/// color absent from its neighborhood.
pub fn greedy_coloring(g: &ConflictGraph) -> Coloring {
    let n = g.vertex_count();
    let mut colors = vec![usize::MAX; n];
    // neighbor_uses[v][c]: does some colored neighbor of v use c
    let mut neighbor_uses: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut saturation = vec![0usize; n];
    for _ in 0..n {
        let mut pick = usize::MAX;
        for v in 0..n {
            if colors[v] == usize::MAX && (pick == usize::MAX || saturation[v] > saturation[pick]) {
                pick = v;
            }
        }
        let used = &neighbor_uses[pick];
        let c = (0..).find(|&c| !used.get(c).copied().unwrap_or(false)).expect("unbounded range");
        colors[pick] = c;
        for &u in g.neighbors(pick) {
            if colors[u] != usize::MAX {
                continue;
            }
            let uses = &mut neighbor_uses[u];
            if uses.len() <= c {
                uses.resize(c + 1, false);
            }
            if !uses[c] {
                uses[c] = true;
                saturation[u] += 1;
            }
        }
    }
    Coloring::new(colors)
}

/// Greedy clique from the highest-degree vertex; a lower bound on χ.
fn greedy_clique_size(g: &ConflictGraph) -> usize {
    let n = g.vertex_count();
    let mut best = usize::from(n > 0);
    for start in 0..n {
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = g.neighbors(start).to_vec();
        candidates.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in candidates {
            if clique.iter().all(|&u| g.are_adjacent(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

struct ExactSearch<'a> {
    g: &'a ConflictGraph,
    colors: Vec<usize>,
    // conflicts[v][c]: number of neighbors of v colored c
    conflicts: Vec<Vec<u32>>,
    best: usize,
    best_colors: Vec<usize>,
    lower_bound: usize,
}

impl ExactSearch<'_> {
    fn select(&self) -> Option<usize> {
        let mut pick: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.vertex_count() {
            if self.colors[v] != usize::MAX {
                continue;
            }
            let sat = self.conflicts[v].iter().filter(|&&c| c > 0).count();
            let deg = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&u| self.colors[u] == usize::MAX)
                .count();
            if pick.is_none_or(|(_, s, d)| (sat, deg) > (s, d)) {
                pick = Some((v, sat, deg));
            }
        }
        pick.map(|(v, _, _)| v)
    }

    fn run(&mut self, colored: usize, used: usize) {
        if self.best == self.lower_bound {
            return;
        }
        if colored == self.g.vertex_count() {
            if used < self.best {
                self.best = used;
                self.best_colors = self.colors.clone();
            }
            return;
        }
        let v = self.select().expect("uncolored vertex remains");
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.conflicts[v][c] > 0 {
                continue;
            }
            self.colors[v] = c;
            for &u in self.g.neighbors(v) {
                self.conflicts[u][c] += 1;
            }
            self.run(colored + 1, used.max(c + 1));
            for &u in self.g.neighbors(v) {
                self.conflicts[u][c] -= 1;
            }
            self.colors[v] = usize::MAX;
        }
    }
}

/// A minimum coloring by DSATUR-ordered branch and bound.
pub fn exact_coloring(g: &ConflictGraph) -> Result<Coloring> {
    let n = g.vertex_count();
    if n > EXACT_CHROMATIC_LIMIT {
        return Err(Error::InstanceTooLarge {
            size: n,
            limit: EXACT_CHROMATIC_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Coloring::new(Vec::new()));
    }
    let greedy = greedy_coloring(g);
    let mut search = ExactSearch {
        g,
        colors: vec![usize::MAX; n],
        conflicts: vec![vec![0; greedy.class_count() + 1]; n],
        best: greedy.class_count(),
        best_colors: greedy.colors().to_vec(),
        lower_bound: greedy_clique_size(g),
    };
    search.run(0, 0);
    Ok(Coloring::new(search.best_colors))
}

/// Chromatic number χ of `g` (at most [`EXACT_CHROMATIC_LIMIT`] vertices).
/// The empty graph has χ = 0.
pub fn exact_chromatic(g: &ConflictGraph) -> Result<usize> {
    Ok(exact_coloring(g)?.class_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> ConflictGraph {
        ConflictGraph::from_edges(vec![1; n], (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            .unwrap()
    }

    fn cycle(n: usize) -> ConflictGraph {
        ConflictGraph::from_edges(vec![1; n], (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn greedy_small_cases() {
        let empty = ConflictGraph::from_edges(vec![1; 6], []).unwrap();
        assert_eq!(greedy_coloring(&empty).class_count(), 1);
        let k5 = complete(5);
        let c = greedy_coloring(&k5);
        assert_eq!(c.class_count(), 5);
        assert!(c.is_proper(&k5));
    }

    #[test]
    fn exact_small_cases() {
        assert_eq!(exact_chromatic(&ConflictGraph::from_edges(vec![1; 4], []).unwrap()).unwrap(), 1);
        assert_eq!(exact_chromatic(&cycle(5)).unwrap(), 3);
        assert_eq!(exact_chromatic(&cycle(6)).unwrap(), 2);
        assert_eq!(exact_chromatic(&complete(7)).unwrap(), 7);
        let coloring = exact_coloring(&cycle(7)).unwrap();
        assert!(coloring.is_proper(&cycle(7)));
    }

    #[test]
    fn exact_rejects_large() {
        let big = ConflictGraph::from_edges(vec![1; EXACT_CHROMATIC_LIMIT + 1], []).unwrap();
        assert!(matches!(exact_chromatic(&big), Err(Error::InstanceTooLarge { .. })));
    }

    #[test]
    fn coloring_renumbers_densely() {
        let c = Coloring::new(vec![7, 3, 7, 9]);
        assert_eq!(c.colors(), &[0, 1, 0, 2]);
        assert_eq!(c.class_count(), 3);
        assert_eq!(c.classes(), vec![vec![0, 2], vec![1], vec![3]]);
    }
}
