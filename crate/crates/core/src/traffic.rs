//! Traffic distributions over ordered source–destination pairs, and request
//! sampling.

use std::path::Path as FsPath;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{Node, Topology};

const SUM_TOLERANCE: f64 = 1e-9;

/// Occurrence probabilities of ordered pairs `(s, d)`, `s != d`.
///
/// Stored densely; pairs with zero weight are never sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficDistribution {
    node_count: usize,
    // row-major (node_count + 1)^2, index 0 unused
    weights: Vec<f64>,
    // pairs with positive weight and their cumulative weight, for sampling
    support: Vec<(Node, Node)>,
    cumulative: Vec<f64>,
}

impl TrafficDistribution {
    /// Builds a distribution from explicit pair weights. Omitted pairs weigh
    /// zero. Weights must be non-negative, off-diagonal, and sum to 1.
    pub fn from_pairs(
        node_count: usize,
        pairs: impl IntoIterator<Item = ((Node, Node), f64)>,
    ) -> Result<Self> {
        let stride = node_count + 1;
        let mut weights = vec![0.0; stride * stride];
        for ((s, d), w) in pairs {
            if s == 0 || d == 0 || s > node_count || d > node_count {
                return Err(Error::InvalidTraffic(format!("pair ({s},{d}) outside 1..={node_count}")));
            }
            if s == d {
                return Err(Error::InvalidTraffic(format!("diagonal pair ({s},{d})")));
            }
            if !(0.0..=1.0).contains(&w) || !w.is_finite() {
                return Err(Error::InvalidTraffic(format!("weight {w} of ({s},{d}) not in [0,1]")));
            }
            weights[s * stride + d] += w;
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidTraffic(format!("weights sum to {total}, expected 1")));
        }
        let mut support = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for s in 1..=node_count {
            for d in 1..=node_count {
                let w = weights[s * stride + d];
                if w > 0.0 {
                    acc += w;
                    support.push((s, d));
                    cumulative.push(acc);
                }
            }
        }
        Ok(TrafficDistribution {
            node_count,
            weights,
            support,
            cumulative,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight(&self, s: Node, d: Node) -> f64 {
        if s > self.node_count || d > self.node_count {
            return 0.0;
        }
        self.weights[s * (self.node_count + 1) + d]
    }

    /// Pairs with positive weight, in lexicographic order, with their weights.
    pub fn support(&self) -> impl Iterator<Item = ((Node, Node), f64)> + '_ {
        self.support.iter().map(|&(s, d)| ((s, d), self.weight(s, d)))
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Draws a pair with probability equal to its weight.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Node, Node) {
        let last = *self.cumulative.last().expect("distribution has support");
        let x = rng.gen::<f64>() * last;
        let idx = self.cumulative.partition_point(|&c| c <= x);
        self.support[idx.min(self.support.len() - 1)]
    }
}

/// Every ordered pair equally likely: `1 / (|V|·(|V|−1))`.
pub fn uniform_distribution(t: &Topology) -> Result<TrafficDistribution> {
    let n = t.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter("uniform traffic needs at least two nodes".into()));
    }
    let w = 1.0 / (n * (n - 1)) as f64;
    TrafficDistribution::from_pairs(n, t.ordered_pairs().map(|p| (p, w)))
}

/// Data-center traffic. Each of the two `dc_nodes` has node probability
/// `dc_mass`; the other nodes share `1 − 2·dc_mass` equally. The source is
/// drawn from this node distribution, then the destination from the same
/// distribution restricted to nodes other than the source and renormalized:
///
/// `w(s,d) = m(s) · m(d) / (1 − m(s))`
pub fn weighted_distribution(
    t: &Topology,
    dc_nodes: (Node, Node),
    dc_mass: f64,
) -> Result<TrafficDistribution> {
    let n = t.node_count();
    let (a, b) = dc_nodes;
    if a == b || !t.contains_node(a) || !t.contains_node(b) {
        return Err(Error::InvalidParameter(format!(
            "data-center nodes ({a},{b}) must be two distinct nodes of the topology"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidParameter("weighted traffic needs at least three nodes".into()));
    }
    if !(0.0..0.5).contains(&dc_mass) {
        return Err(Error::InvalidParameter(format!(
            "data-center mass {dc_mass} must satisfy 0 <= mass < 0.5"
        )));
    }
    let rest = (1.0 - 2.0 * dc_mass) / (n - 2) as f64;
    let marginal = |v: Node| if v == a || v == b { dc_mass } else { rest };
    let pairs = t.ordered_pairs().map(|(s, d)| {
        let ms = marginal(s);
        let w = if ms < 1.0 { ms * marginal(d) / (1.0 - ms) } else { 0.0 };
        ((s, d), w)
    });
    TrafficDistribution::from_pairs(n, pairs)
}

/// Parses `pair <s> <d> <weight>` lines (with `#` comments) for a topology
/// of `node_count` nodes.
pub fn parse_traffic(node_count: usize, text: &str) -> Result<TrafficDistribution> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "pair" {
            return Err(Error::parse(line_no, "expected 'pair <s> <d> <weight>'"));
        }
        let s: Node = fields[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad node '{}'", fields[1])))?;
        let d: Node = fields[2]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad node '{}'", fields[2])))?;
        let w: f64 = fields[3]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad weight '{}'", fields[3])))?;
        pairs.push(((s, d), w));
    }
    TrafficDistribution::from_pairs(node_count, pairs)
}

pub fn load_traffic(node_count: usize, path: impl AsRef<FsPath>) -> Result<TrafficDistribution> {
    parse_traffic(node_count, &std::fs::read_to_string(path)?)
}

/// A connection request of `bandwidth` frequency slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub source: Node,
    pub destination: Node,
    pub bandwidth: u32,
}

/// Draws one request: the pair from `dist`, the bandwidth uniformly from
/// `alpha..=beta`, independently.
pub fn sample_request<R: Rng + ?Sized>(
    dist: &TrafficDistribution,
    alpha: u32,
    beta: u32,
    rng: &mut R,
) -> Result<Request> {
    if alpha == 0 || alpha > beta {
        return Err(Error::InvalidParameter(format!(
            "bandwidth range [{alpha},{beta}] must satisfy 1 <= alpha <= beta"
        )));
    }
    let (source, destination) = dist.sample_pair(rng);
    let bandwidth = rng.gen_range(alpha..=beta);
    Ok(Request {
        source,
        destination,
        bandwidth,
    })
}

pub fn sample_requests<R: Rng + ?Sized>(
    dist: &TrafficDistribution,
    count: usize,
    alpha: u32,
    beta: u32,
    rng: &mut R,
) -> Result<Vec<Request>> {
    (0..count).map(|_| sample_request(dist, alpha, beta, rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::BuiltinTopology;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tiny() -> Topology {
        Topology::from_fibers("tiny", 2, &[(1, 2)]).unwrap()
    }

    #[test]
    fn uniform_weights() {
        let ring = BuiltinTopology::Ring12.build();
        let d = uniform_distribution(&ring).unwrap();
        assert_eq!(d.support().count(), 132);
        for (_, w) in d.support() {
            assert!((w - 1.0 / 132.0).abs() < 1e-15);
        }
        let two = uniform_distribution(&tiny()).unwrap();
        assert_eq!(two.weight(1, 2), 0.5);
        assert_eq!(two.weight(2, 1), 0.5);
        let nj = uniform_distribution(&BuiltinTopology::Njlata11.build()).unwrap();
        assert_eq!(nj.support().count(), 110);
        assert!((nj.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn weighted_source_marginal() {
        let ring = BuiltinTopology::Ring12.build();
        let d = weighted_distribution(&ring, (1, 7), 0.45).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
        let source_marginal = |v: Node| (1..=12).map(|x| d.weight(v, x)).sum::<f64>();
        let involvement = |v: Node| (1..=12).map(|x| d.weight(v, x) + d.weight(x, v)).sum::<f64>();
        assert!((source_marginal(1) - 0.45).abs() < 1e-9);
        assert!((source_marginal(7) - 0.45).abs() < 1e-9);
        assert!((source_marginal(3) - 0.01).abs() < 1e-9);
        assert!((involvement(1) - involvement(7)).abs() < 1e-12);
        for v in 1..=12 {
            assert_eq!(d.weight(v, v), 0.0);
        }
    }

    #[test]
    fn weighted_zero_mass() {
        let ring = BuiltinTopology::Ring12.build();
        let d = weighted_distribution(&ring, (1, 7), 0.0).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
        assert_eq!(d.weight(1, 2), 0.0);
        assert_eq!(d.weight(2, 7), 0.0);
        // ten non-dc nodes at 0.1 each: w = 0.1 * 0.1 / 0.9
        assert!((d.weight(2, 3) - 0.01 / 0.9).abs() < 1e-12);
    }

    #[test]
    fn weighted_rejects_bad_parameters() {
        let ring = BuiltinTopology::Ring12.build();
        assert!(weighted_distribution(&ring, (1, 1), 0.45).is_err());
        assert!(weighted_distribution(&ring, (1, 13), 0.45).is_err());
        assert!(weighted_distribution(&ring, (1, 7), 0.5).is_err());
        assert!(weighted_distribution(&ring, (1, 7), -0.1).is_err());
    }

    #[test]
    fn explicit_pair_table() {
        // four nodes, heavy traffic between 1 and 3 in both directions
        let mut pairs = vec![((1, 3), 0.45), ((3, 1), 0.45)];
        for s in 1..=4 {
            for d in 1..=4 {
                if s != d && !matches!((s, d), (1, 3) | (3, 1)) {
                    pairs.push(((s, d), 0.01));
                }
            }
        }
        let d = TrafficDistribution::from_pairs(4, pairs).unwrap();
        assert_eq!(d.weight(1, 3), 0.45);
        assert_eq!(d.weight(2, 4), 0.01);
    }

    #[test]
    fn from_pairs_validation() {
        assert!(TrafficDistribution::from_pairs(2, [((1, 1), 1.0)]).is_err());
        assert!(TrafficDistribution::from_pairs(2, [((1, 2), 0.6)]).is_err());
        assert!(TrafficDistribution::from_pairs(2, [((1, 3), 1.0)]).is_err());
        assert!(TrafficDistribution::from_pairs(2, [((1, 2), 1.5), ((2, 1), -0.5)]).is_err());
    }

    #[test]
    fn traffic_file() {
        let d = parse_traffic(3, "# hot pair\npair 1 2 0.75\npair 2 1 0.25\n").unwrap();
        assert_eq!(d.weight(1, 2), 0.75);
        assert_eq!(d.weight(1, 3), 0.0);
        assert!(matches!(parse_traffic(3, "pair 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_traffic(3, "pair 1 2 0.5\n").is_err());
    }

    #[test]
    fn single_pair_and_fixed_bandwidth() {
        let d = TrafficDistribution::from_pairs(3, [((2, 3), 1.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let r = sample_request(&d, 3, 3, &mut rng).unwrap();
            assert_eq!((r.source, r.destination, r.bandwidth), (2, 3, 3));
        }
        assert!(sample_request(&d, 4, 3, &mut rng).is_err());
        assert!(sample_request(&d, 0, 3, &mut rng).is_err());
    }

    #[test]
    fn bandwidth_covers_range() {
        let d = uniform_distribution(&tiny()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let reqs = sample_requests(&d, 4000, 1, 4, &mut rng).unwrap();
        for b in 1..=4 {
            let c = reqs.iter().filter(|r| r.bandwidth == b).count();
            assert!((c as f64 / 4000.0 - 0.25).abs() < 0.03);
        }
    }
}
