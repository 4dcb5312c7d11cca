use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rsa::RoutedRequest;

/// Weighted undirected graph with one vertex per routed request and an edge
/// wherever two lightpaths share a directed link. Vertex weight is the
/// request bandwidth in slices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRecord", into = "GraphRecord")]
pub struct ConflictGraph {
    weights: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

/// Wire form: vertex weights plus 0-based edge list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphRecord {
    pub weights: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRecord> for ConflictGraph {
    type Error = Error;

    fn try_from(r: GraphRecord) -> Result<Self> {
        ConflictGraph::from_edges(r.weights, r.edges)
    }
}

impl From<ConflictGraph> for GraphRecord {
    fn from(g: ConflictGraph) -> Self {
        GraphRecord {
            edges: g.edges().collect(),
            weights: g.weights,
        }
    }
}

impl ConflictGraph {
    /// Builds a graph from weights and an edge list. Duplicate edges are
    /// merged; self-edges and out-of-range endpoints are rejected.
    pub fn from_edges(weights: Vec<u32>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if let Some(&w) = weights.iter().find(|&&w| w == 0) {
            return Err(Error::InvalidParameter(format!("vertex weight {w} must be positive")));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge ({u},{v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-edge at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(ConflictGraph {
            weights,
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }
}

/// Conflict graph of routed requests: vertex `i` is `routed[i]`.
pub fn build_conflict_graph(routed: &[RoutedRequest]) -> ConflictGraph {
    let n = routed.len();
    let mut adjacency = vec![Vec::new(); n];
    let mut edge_count = 0;
    for i in 0..n {
        let pi = routed[i].path.link_set();
        for j in i + 1..n {
            if pi.intersects(routed[j].path.link_set()) {
                adjacency[i].push(j);
                adjacency[j].push(i);
                edge_count += 1;
            }
        }
    }
    // adjacency[j] received i's in increasing order, then j's own larger
    // neighbors in increasing order, so every list is already sorted
    ConflictGraph {
        weights: routed.iter().map(|r| r.request.bandwidth).collect(),
        adjacency,
        edge_count,
    }
}

/// Edge density `|E| / C(n, 2)`.
pub fn empirical_intersecting_probability(g: &ConflictGraph) -> Result<f64> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::DegenerateInput(format!(
            "intersecting probability needs at least 2 vertices, got {n}"
        )));
    }
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(g.edge_count() as f64 / pairs)
}
