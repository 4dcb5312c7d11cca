//! Independent reference implementations shared by the integration tests.
//! Each one is written the slow, obvious way so it can check the library.
#![allow(dead_code)]

use std::path::PathBuf;

use eon_spectra::conflict::ConflictMatrix;
use eon_spectra::rsa::ConflictGraph;
use eon_spectra::topology::{Node, Topology};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Every simple path from `s` to `d`, as node lists, by depth-first search.
pub fn all_simple_paths(t: &Topology, s: Node, d: Node) -> Vec<Vec<Node>> {
    fn dfs(t: &Topology, d: Node, stack: &mut Vec<Node>, out: &mut Vec<Vec<Node>>) {
        let here = *stack.last().unwrap();
        if here == d {
            out.push(stack.clone());
            return;
        }
        for &next in t.successors(here) {
            if !stack.contains(&next) {
                stack.push(next);
                dfs(t, d, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    dfs(t, d, &mut vec![s], &mut out);
    out
}

/// The `k` shortest simple paths by hop count, ties broken by lexicographic
/// node sequence, from full enumeration.
pub fn k_shortest_by_enumeration(t: &Topology, s: Node, d: Node, k: usize) -> Vec<Vec<Node>> {
    let mut paths = all_simple_paths(t, s, d);
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    paths.truncate(k);
    paths
}

/// Directed links of a node list.
pub fn directed_links(nodes: &[Node]) -> Vec<(Node, Node)> {
    nodes.windows(2).map(|w| (w[0], w[1])).collect()
}

pub fn share_directed_link(a: &[Node], b: &[Node]) -> bool {
    let la = directed_links(a);
    directed_links(b).iter().any(|l| la.contains(l))
}

/// Minimum of `p^T Θ p` over the simplex points whose coordinates are
/// multiples of `1/steps`, with the minimizing point.
pub fn simplex_grid_minimum(cm: &ConflictMatrix, steps: usize) -> (f64, Vec<f64>) {
    fn recurse(cm: &ConflictMatrix, steps: usize, left: usize, prefix: &mut Vec<usize>, best: &mut (f64, Vec<f64>)) {
        let k = cm.k();
        if prefix.len() == k - 1 {
            prefix.push(left);
            let p: Vec<f64> = prefix.iter().map(|&c| c as f64 / steps as f64).collect();
            let mut v = 0.0;
            for i in 0..k {
                for j in 0..k {
                    v += cm.get(i, j) * p[i] * p[j];
                }
            }
            if v < best.0 {
                *best = (v, p);
            }
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            recurse(cm, steps, left - c, prefix, best);
            prefix.pop();
        }
    }
    let mut best = (f64::INFINITY, Vec::new());
    recurse(cm, steps, steps, &mut Vec::new(), &mut best);
    best
}

/// A random symmetric matrix with entries in [0,1].
pub fn random_cm<R: Rng>(rng: &mut R, k: usize) -> ConflictMatrix {
    let mut rows = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v: f64 = rng.gen();
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    ConflictMatrix::from_rows(rows).unwrap()
}

/// G(n, p) with weights uniform in `lo..=hi`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, lo: u32, hi: u32) -> ConflictGraph {
    let weights = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    ConflictGraph::from_edges(weights, edges).unwrap()
}

/// Smallest number of colors admitting a proper coloring, by trying every
/// assignment of `c` colors for increasing `c`.
pub fn chromatic_by_exhaustion(g: &ConflictGraph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for c in 1..=n {
        let total = (c as u64).pow(n as u32);
        for code in 0..total {
            let mut colors = vec![0usize; n];
            let mut x = code;
            for slot in colors.iter_mut() {
                *slot = (x % c as u64) as usize;
                x /= c as u64;
            }
            if edges.iter().all(|&(u, v)| colors[u] != colors[v]) {
                return c;
            }
        }
    }
    n
}
