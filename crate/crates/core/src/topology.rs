//! Network topologies, simple paths, and K-shortest candidate path tables.
//!
//! Nodes are 1-based integer labels. Every physical fiber of a built-in
//! topology is two directed links, one per direction. Path length is the hop
//! count; equal-length paths are ordered by their node sequence.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path as FsPath;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// 1-based node label.
pub type Node = usize;

/// A directed fiber link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Link {
    pub from: Node,
    pub to: Node,
}

impl Link {
    pub fn new(from: Node, to: Node) -> Self {
        Link { from, to }
    }

    pub fn reversed(self) -> Self {
        Link::new(self.to, self.from)
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

/// Fixed-capacity bit set over the link ids of one topology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkSet {
    words: Vec<u64>,
}

impl LinkSet {
    pub fn with_capacity(links: usize) -> Self {
        LinkSet {
            words: vec![0; links.div_ceil(64).max(1)],
        }
    }

    pub fn insert(&mut self, id: usize) {
        self.words[id / 64] |= 1 << (id % 64);
    }

    pub fn contains(&self, id: usize) -> bool {
        self.words
            .get(id / 64)
            .is_some_and(|w| w & (1 << (id % 64)) != 0)
    }

    pub fn intersects(&self, other: &LinkSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// Directed network graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct Topology {
    name: String,
    node_count: usize,
    links: Vec<Link>,
    link_ids: HashMap<Link, usize>,
    successors: Vec<Vec<Node>>,
    predecessors: Vec<Vec<Node>>,
}

impl PartialEq for Topology {
    /// Structural equality: same node count and same directed link set.
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count && self.links == other.links
    }
}

impl Topology {
    /// Builds a topology from directed links, rejecting self-loops, duplicates,
    /// out-of-range labels and graphs that are not strongly connected.
    pub fn new(
        name: impl Into<String>,
        node_count: usize,
        links: impl IntoIterator<Item = Link>,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidTopology("topology has no nodes".into()));
        }
        let mut set = BTreeSet::new();
        for link in links {
            if link.from == link.to {
                return Err(Error::InvalidTopology(format!("self-loop at node {}", link.from)));
            }
            for n in [link.from, link.to] {
                if n == 0 || n > node_count {
                    return Err(Error::InvalidTopology(format!(
                        "node {n} outside 1..={node_count}"
                    )));
                }
            }
            if !set.insert(link) {
                return Err(Error::InvalidTopology(format!("duplicate link {link}")));
            }
        }
        let links: Vec<Link> = set.into_iter().collect();
        let link_ids = links.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut successors = vec![Vec::new(); node_count + 1];
        let mut predecessors = vec![Vec::new(); node_count + 1];
        // links are sorted, so adjacency lists come out sorted too
        for l in &links {
            successors[l.from].push(l.to);
            predecessors[l.to].push(l.from);
        }
        let topo = Topology {
            name: name.into(),
            node_count,
            links,
            link_ids,
            successors,
            predecessors,
        };
        if !topo.is_strongly_connected() {
            return Err(Error::InvalidTopology(format!(
                "topology '{}' is not strongly connected",
                topo.name
            )));
        }
        Ok(topo)
    }

    /// Builds a topology where each fiber `(u, v)` becomes links `(u,v)` and `(v,u)`.
    pub fn from_fibers(name: impl Into<String>, node_count: usize, fibers: &[(Node, Node)]) -> Result<Self> {
        let links = fibers
            .iter()
            .flat_map(|&(u, v)| [Link::new(u, v), Link::new(v, u)]);
        Topology::new(name, node_count, links)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.node_count
    }

    /// All ordered pairs `(s, d)` with `s != d`, in lexicographic order.
    pub fn ordered_pairs(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        self.nodes()
            .flat_map(move |s| self.nodes().filter(move |&d| d != s).map(move |d| (s, d)))
    }

    /// Directed links in sorted order. A link's position is its id.
    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn link_id(&self, link: Link) -> Option<usize> {
        self.link_ids.get(&link).copied()
    }

    pub fn has_link(&self, from: Node, to: Node) -> bool {
        self.link_ids.contains_key(&Link::new(from, to))
    }

    pub fn contains_node(&self, node: Node) -> bool {
        (1..=self.node_count).contains(&node)
    }

    pub fn successors(&self, node: Node) -> &[Node] {
        &self.successors[node]
    }

    pub fn predecessors(&self, node: Node) -> &[Node] {
        &self.predecessors[node]
    }

    fn reach_count(&self, adjacency: &[Vec<Node>]) -> usize {
        let mut seen = vec![false; self.node_count + 1];
        let mut stack = vec![1];
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count
    }

    fn is_strongly_connected(&self) -> bool {
        self.reach_count(&self.successors) == self.node_count
            && self.reach_count(&self.predecessors) == self.node_count
    }
}

/// The three reference topologies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinTopology {
    Ring12,
    Nsfnet14,
    Njlata11,
}

const RING12_FIBERS: [(Node, Node); 12] = [
    (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7),
    (7, 8), (8, 9), (9, 10), (10, 11), (11, 12), (12, 1),
];

const NSFNET14_FIBERS: [(Node, Node); 22] = [
    (1, 2), (1, 3), (1, 8), (2, 3), (2, 4), (3, 6), (4, 5), (4, 14),
    (5, 6), (5, 7), (6, 10), (6, 11), (7, 8), (8, 9), (9, 10), (9, 12),
    (9, 13), (10, 11), (11, 12), (11, 13), (12, 14), (13, 14),
];

// Reconstructed adjacency; see data/njlata11.topo for provenance.
const NJLATA11_FIBERS: [(Node, Node); 23] = [
    (1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (1, 8), (1, 11), (2, 5),
    (2, 6), (2, 9), (2, 10), (3, 5), (3, 6), (3, 8), (4, 6), (5, 8),
    (5, 10), (5, 11), (6, 8), (7, 10), (7, 11), (8, 10), (9, 10),
];

impl BuiltinTopology {
    pub const ALL: [BuiltinTopology; 3] = [
        BuiltinTopology::Ring12,
        BuiltinTopology::Nsfnet14,
        BuiltinTopology::Njlata11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinTopology::Ring12 => "ring12",
            BuiltinTopology::Nsfnet14 => "nsfnet14",
            BuiltinTopology::Njlata11 => "njlata11",
        }
    }

    /// File name of the shipped data file for this topology.
    pub fn file_name(self) -> &'static str {
        match self {
            BuiltinTopology::Ring12 => "ring12.topo",
            BuiltinTopology::Nsfnet14 => "nsfnet14.topo",
            BuiltinTopology::Njlata11 => "njlata11.topo",
        }
    }

    pub fn build(self) -> Topology {
        let (n, fibers): (usize, &[(Node, Node)]) = match self {
            BuiltinTopology::Ring12 => (12, &RING12_FIBERS),
            BuiltinTopology::Nsfnet14 => (14, &NSFNET14_FIBERS),
            BuiltinTopology::Njlata11 => (11, &NJLATA11_FIBERS),
        };
        Topology::from_fibers(self.name(), n, fibers).expect("built-in topology is valid")
    }
}

impl FromStr for BuiltinTopology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "ring12" | "ring" | "r" => Ok(BuiltinTopology::Ring12),
            "nsfnet14" | "nsfnet" | "nsf" => Ok(BuiltinTopology::Nsfnet14),
            "njlata11" | "njlata" | "nj" => Ok(BuiltinTopology::Njlata11),
            other => Err(Error::InvalidParameter(format!("unknown topology '{other}'"))),
        }
    }
}

/// Shorthand for [`BuiltinTopology::build`].
pub fn builtin_topology(which: BuiltinTopology) -> Topology {
    which.build()
}

/// Parses the line-oriented topology format:
///
/// ```text
/// # comment
/// nodes 3
/// link 1 2          # bidirectional by default
/// link 2 3 uni
/// ```
pub fn parse_topology(name: &str, text: &str) -> Result<Topology> {
    let mut node_count = None;
    let mut links = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "nodes" => {
                if node_count.is_some() {
                    return Err(Error::parse(line_no, "repeated 'nodes' header"));
                }
                if fields.len() != 2 {
                    return Err(Error::parse(line_no, "expected 'nodes <N>'"));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad node count '{}'", fields[1])))?;
                node_count = Some(n);
            }
            "link" => {
                if node_count.is_none() {
                    return Err(Error::parse(line_no, "'link' before 'nodes' header"));
                }
                if !(3..=4).contains(&fields.len()) {
                    return Err(Error::parse(line_no, "expected 'link <u> <v> [bidir|uni]'"));
                }
                let parse_node = |s: &str| {
                    s.parse::<Node>()
                        .map_err(|_| Error::parse(line_no, format!("bad node label '{s}'")))
                };
                let u = parse_node(fields[1])?;
                let v = parse_node(fields[2])?;
                let bidir = match fields.get(3).copied() {
                    None | Some("bidir") => true,
                    Some("uni") => false,
                    Some(other) => {
                        return Err(Error::parse(line_no, format!("unknown link kind '{other}'")))
                    }
                };
                links.push(Link::new(u, v));
                if bidir {
                    links.push(Link::new(v, u));
                }
            }
            other => return Err(Error::parse(line_no, format!("unknown directive '{other}'"))),
        }
    }
    let node_count = node_count.ok_or_else(|| Error::parse(0, "missing 'nodes' header"))?;
    Topology::new(name, node_count, links)
}

/// Reads a topology file; the topology is named after the file stem.
pub fn load_topology(path: impl AsRef<FsPath>) -> Result<Topology> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("topology");
    parse_topology(name, &text)
}

/// A simple directed path of at least one link.
#[derive(Debug, Clone)]
pub struct Path {
    nodes: Vec<Node>,
    links: Vec<Link>,
    mask: LinkSet,
}

impl PartialEq for Path {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for Path {}

impl Serialize for Path {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.nodes.serialize(serializer)
    }
}

impl Path {
    /// Validates `nodes` against `topology`: at least two nodes, no repeats,
    /// every hop an existing link.
    pub fn new(topology: &Topology, nodes: Vec<Node>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("a path needs at least one link".into()));
        }
        let mut seen = vec![false; topology.node_count() + 1];
        for &n in &nodes {
            if !topology.contains_node(n) {
                return Err(Error::InvalidParameter(format!("node {n} not in topology")));
            }
            if std::mem::replace(&mut seen[n], true) {
                return Err(Error::InvalidParameter(format!("node {n} repeated in path")));
            }
        }
        let mut mask = LinkSet::with_capacity(topology.link_count());
        let mut links = Vec::with_capacity(nodes.len() - 1);
        for w in nodes.windows(2) {
            let link = Link::new(w[0], w[1]);
            let id = topology
                .link_id(link)
                .ok_or_else(|| Error::InvalidParameter(format!("link {link} not in topology")))?;
            mask.insert(id);
            links.push(link);
        }
        Ok(Path { nodes, links, mask })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link_set(&self) -> &LinkSet {
        &self.mask
    }

    pub fn hops(&self) -> usize {
        self.links.len()
    }

    pub fn source(&self) -> Node {
        self.nodes[0]
    }

    pub fn destination(&self) -> Node {
        *self.nodes.last().expect("path is nonempty")
    }

    /// True iff the two paths share at least one directed link.
    pub fn intersects(&self, other: &Path) -> bool {
        self.mask.intersects(&other.mask)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("-"))
    }
}

/// True iff `a` and `b` share a directed link. Opposite directions of one
/// fiber are different links.
pub fn paths_intersect(a: &Path, b: &Path) -> bool {
    a.intersects(b)
}

/// Lexicographically smallest minimum-hop path from `s` to `d` that avoids
/// `banned_nodes` and `banned_links`.
fn smallest_shortest_path(
    t: &Topology,
    s: Node,
    d: Node,
    banned_nodes: &[bool],
    banned_links: &BTreeSet<Link>,
) -> Option<Vec<Node>> {
    let allowed = |u: Node, v: Node| {
        !banned_nodes[u] && !banned_nodes[v] && !banned_links.contains(&Link::new(u, v))
    };
    // hop distance to d over the reverse graph
    let mut dist = vec![usize::MAX; t.node_count() + 1];
    dist[d] = 0;
    let mut queue = VecDeque::from([d]);
    while let Some(v) = queue.pop_front() {
        for &u in t.predecessors(v) {
            if dist[u] == usize::MAX && allowed(u, v) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if dist[s] == usize::MAX || banned_nodes[s] {
        return None;
    }
    let mut path = vec![s];
    let mut u = s;
    while u != d {
        // successors are sorted, so the first match is the smallest label
        u = *t
            .successors(u)
            .iter()
            .find(|&&v| allowed(u, v) && dist[v] != usize::MAX && dist[v] + 1 == dist[u])?;
        path.push(u);
    }
    Some(path)
}

/// The first `k` loopless `s`→`d` paths in (hop count, node sequence) order,
/// by Yen's deviation method. Returns fewer than `k` when fewer exist.
pub fn k_shortest_paths(t: &Topology, s: Node, d: Node, k: usize) -> Result<Vec<Path>> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be positive".into()));
    }
    if !t.contains_node(s) || !t.contains_node(d) {
        return Err(Error::InvalidParameter(format!("pair ({s},{d}) not in topology")));
    }
    if s == d {
        return Err(Error::InvalidParameter("source equals destination".into()));
    }
    let no_nodes = vec![false; t.node_count() + 1];
    let first = smallest_shortest_path(t, s, d, &no_nodes, &BTreeSet::new())
        .ok_or(Error::NoPath { from: s, to: d })?;

    let mut accepted: Vec<Vec<Node>> = vec![first];
    let mut candidates: BTreeSet<(usize, Vec<Node>)> = BTreeSet::new();
    while accepted.len() < k {
        let last = accepted.last().expect("nonempty").clone();
        for i in 0..last.len() - 1 {
            let root = &last[..=i];
            let spur = last[i];
            let banned_links: BTreeSet<Link> = accepted
                .iter()
                .filter(|p| p.len() > i + 1 && &p[..=i] == root)
                .map(|p| Link::new(p[i], p[i + 1]))
                .collect();
            let mut banned_nodes = no_nodes.clone();
            for &n in &root[..i] {
                banned_nodes[n] = true;
            }
            if let Some(tail) = smallest_shortest_path(t, spur, d, &banned_nodes, &banned_links) {
                let mut full = root[..i].to_vec();
                full.extend(tail);
                if !accepted.contains(&full) {
                    candidates.insert((full.len() - 1, full));
                }
            }
        }
        match candidates.pop_first() {
            Some((_, next)) => accepted.push(next),
            None => break,
        }
    }
    accepted
        .into_iter()
        .map(|nodes| Path::new(t, nodes))
        .collect()
}

/// Per ordered node pair, the ordered list of up to K candidate paths.
#[derive(Debug, Clone)]
pub struct CandidatePathTable {
    k: usize,
    node_count: usize,
    entries: BTreeMap<(Node, Node), Vec<Path>>,
}

impl CandidatePathTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn paths(&self, s: Node, d: Node) -> Option<&[Path]> {
        self.entries.get(&(s, d)).map(Vec::as_slice)
    }

    /// The `index`-th (0-based) candidate of `(s, d)`. Pairs with fewer
    /// candidates fall back to their last one.
    pub fn path(&self, s: Node, d: Node, index: usize) -> Option<&Path> {
        let paths = self.entries.get(&(s, d))?;
        paths.get(index.min(paths.len() - 1))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Node, Node), &Vec<Path>)> {
        self.entries.iter()
    }
}

/// K-shortest candidates for every ordered pair of `t`.
pub fn all_candidate_paths(t: &Topology, k: usize) -> Result<CandidatePathTable> {
    let entries = t
        .ordered_pairs()
        .map(|(s, d)| Ok(((s, d), k_shortest_paths(t, s, d, k)?)))
        .collect::<Result<_>>()?;
    Ok(CandidatePathTable {
        k,
        node_count: t.node_count(),
        entries,
    })
}
