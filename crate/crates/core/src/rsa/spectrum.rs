//! Spectrum assignments: one contiguous block of frequency slices (FS) per
//! conflict-graph vertex. Slice indices start at 1. Two adjacent vertices
//! must keep `distance(Wi, Wj) = min |s − t| − 1 >= GB`, which rules out
//! any overlap.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rsa::{Coloring, ConflictGraph};

/// Inclusive slice range `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: u32,
    pub end: u32,
}

impl Interval {
    pub fn new(start: u32, end: u32) -> Self {
        Interval { start, end }
    }

    /// Block of `width` slices starting at `start`.
    pub fn with_width(start: u32, width: u32) -> Self {
        Interval::new(start, start + width - 1)
    }

    pub fn width(&self) -> u32 {
        self.end + 1 - self.start
    }

    /// `min |s − t| − 1` over slices of the two blocks; −1 when they overlap.
    pub fn distance(&self, other: &Interval) -> i64 {
        if self.end < other.start {
            other.start as i64 - self.end as i64 - 1
        } else if other.end < self.start {
            self.start as i64 - other.end as i64 - 1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumAssignment {
    intervals: Vec<Interval>,
}

impl SpectrumAssignment {
    pub fn new(intervals: Vec<Interval>) -> Self {
        SpectrumAssignment { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, v: usize) -> Interval {
        self.intervals[v]
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Maximum used slice index.
pub fn mufi(a: &SpectrumAssignment) -> Result<u32> {
    a.intervals
        .iter()
        .map(|i| i.end)
        .max()
        .ok_or_else(|| Error::DegenerateInput("MUFI of an empty assignment".into()))
}

/// One way an assignment breaks the slice rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Block width differs from the vertex weight, or the block is malformed.
    Width { vertex: usize, weight: u32, interval: Interval },
    /// Block starts below slice 1.
    Start { vertex: usize, interval: Interval },
    /// Adjacent blocks closer than the guard band.
    GuardBand { u: usize, v: usize, distance: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Width { vertex, weight, interval } => write!(
                f,
                "vertex {vertex}: block [{},{}] does not have width {weight}",
                interval.start, interval.end
            ),
            Violation::Start { vertex, interval } => {
                write!(f, "vertex {vertex}: block starts at {}", interval.start)
            }
            Violation::GuardBand { u, v, distance } => {
                write!(f, "edge ({u},{v}): distance {distance} below guard band")
            }
        }
    }
}

/// Checks every width, start and guard-band condition. `Ok(list)` with an
/// empty list means the assignment is valid.
pub fn validate_assignment(g: &ConflictGraph, a: &SpectrumAssignment, gb: u32) -> Result<Vec<Violation>> {
    if a.len() != g.vertex_count() {
        return Err(Error::CoverageMismatch {
            expected: g.vertex_count(),
            actual: a.len(),
        });
    }
    let mut violations = Vec::new();
    for (v, iv) in a.intervals.iter().enumerate() {
        if iv.start < 1 {
            violations.push(Violation::Start { vertex: v, interval: *iv });
        }
        if iv.end < iv.start || iv.width() != g.weight(v) {
            violations.push(Violation::Width {
                vertex: v,
                weight: g.weight(v),
                interval: *iv,
            });
        }
    }
    for (u, v) in g.edges() {
        let d = a.intervals[u].distance(&a.intervals[v]);
        if d < gb as i64 {
            violations.push(Violation::GuardBand { u, v, distance: d });
        }
    }
    Ok(violations)
}

/// Stacks color classes bottom-up. Each class gets a band as tall as its
/// heaviest vertex; consecutive bands are `gb` slices apart. Every vertex
/// starts at the bottom of its class band, so
/// `MUFI = (k − 1)·GB + Σ max weight per class`.
pub fn coloring_to_assignment(g: &ConflictGraph, c: &Coloring, gb: u32) -> Result<SpectrumAssignment> {
    if c.colors().len() != g.vertex_count() {
        return Err(Error::CoverageMismatch {
            expected: g.vertex_count(),
            actual: c.colors().len(),
        });
    }
    if let Some((u, v)) = c.conflict(g) {
        return Err(Error::ImproperColoring(u, v));
    }
    let mut band_start = vec![0u32; c.class_count()];
    let mut next = 1u32;
    for (class, members) in c.classes().iter().enumerate() {
        band_start[class] = next;
        let height = members.iter().map(|&v| g.weight(v)).max().unwrap_or(0);
        next += height + gb;
    }
    let intervals = (0..g.vertex_count())
        .map(|v| Interval::with_width(band_start[c.color(v)], g.weight(v)))
        .collect();
    Ok(SpectrumAssignment::new(intervals))
}

/// Vertex processing order for [`first_fit_assignment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FirstFitOrder {
    Input,
    #[default]
    DescendingWeight,
    DescendingDegree,
}

impl FromStr for FirstFitOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "input" => Ok(FirstFitOrder::Input),
            "descending-weight" | "weight" => Ok(FirstFitOrder::DescendingWeight),
            "descending-degree" | "degree" => Ok(FirstFitOrder::DescendingDegree),
            other => Err(Error::InvalidParameter(format!("unknown first-fit order '{other}'"))),
        }
    }
}

/// Lowest start at which a block of `width` keeps `gb` clearance from every
/// block in `placed`.
pub(crate) fn lowest_fit(placed: &mut [Interval], width: u32, gb: u32) -> u32 {
    // a start s collides with [a,b] iff a - gb - width + 1 <= s <= b + gb
    placed.sort_unstable_by_key(|iv| iv.start);
    let mut start = 1u32;
    loop {
        let mut moved = false;
        for iv in placed.iter() {
            let lo = iv.start as i64 - gb as i64 - width as i64 + 1;
            let hi = iv.end + gb;
            if (start as i64) >= lo && start <= hi {
                start = hi + 1;
                moved = true;
            }
        }
        if !moved {
            return start;
        }
    }
}

/// First-fit: visit vertices in `order` and give each the lowest block that
/// keeps the guard band to every already placed neighbor.
pub fn first_fit_assignment(g: &ConflictGraph, gb: u32, order: FirstFitOrder) -> SpectrumAssignment {
    let n = g.vertex_count();
    let mut sequence: Vec<usize> = (0..n).collect();
    match order {
        FirstFitOrder::Input => {}
        FirstFitOrder::DescendingWeight => {
            sequence.sort_by_key(|&v| std::cmp::Reverse(g.weight(v)));
        }
        FirstFitOrder::DescendingDegree => {
            sequence.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        }
    }
    let mut assigned: Vec<Option<Interval>> = vec![None; n];
    let mut scratch = Vec::new();
    for v in sequence {
        scratch.clear();
        scratch.extend(g.neighbors(v).iter().filter_map(|&u| assigned[u]));
        let start = lowest_fit(&mut scratch, g.weight(v), gb);
        assigned[v] = Some(Interval::with_width(start, g.weight(v)));
    }
    SpectrumAssignment::new(assigned.into_iter().map(|iv| iv.expect("every vertex placed")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rsa::greedy_coloring;

    #[test]
    fn distance_rule() {
        let a = Interval::new(1, 2);
        assert_eq!(a.distance(&Interval::new(3, 4)), 0);
        assert_eq!(a.distance(&Interval::new(4, 5)), 1);
        assert_eq!(Interval::new(4, 5).distance(&a), 1);
        assert_eq!(a.distance(&Interval::new(2, 3)), -1);
    }

    #[test]
    fn validation_guard_band() {
        let g = ConflictGraph::from_edges(vec![2, 2], [(0, 1)]).unwrap();
        let tight = SpectrumAssignment::new(vec![Interval::new(1, 2), Interval::new(3, 4)]);
        let v = validate_assignment(&g, &tight, 1).unwrap();
        assert_eq!(v, vec![Violation::GuardBand { u: 0, v: 1, distance: 0 }]);
        let ok = SpectrumAssignment::new(vec![Interval::new(1, 2), Interval::new(4, 5)]);
        assert!(validate_assignment(&g, &ok, 1).unwrap().is_empty());
        let short = SpectrumAssignment::new(vec![Interval::new(1, 2)]);
        assert!(matches!(
            validate_assignment(&g, &short, 1),
            Err(Error::CoverageMismatch { .. })
        ));
    }

    #[test]
    fn validation_width_and_start() {
        let g = ConflictGraph::from_edges(vec![2, 1], []).unwrap();
        let bad = SpectrumAssignment::new(vec![Interval::new(1, 3), Interval::new(0, 0)]);
        let v = validate_assignment(&g, &bad, 1).unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn single_class_stack() {
        let g = ConflictGraph::from_edges(vec![1, 4, 2], []).unwrap();
        let c = greedy_coloring(&g);
        let a = coloring_to_assignment(&g, &c, 1).unwrap();
        assert_eq!(mufi(&a).unwrap(), 4);
        assert_eq!(a.interval(0), Interval::new(1, 1));
    }

    #[test]
    fn two_class_stack() {
        let g = ConflictGraph::from_edges(vec![2, 3], [(0, 1)]).unwrap();
        let a = coloring_to_assignment(&g, &greedy_coloring(&g), 1).unwrap();
        assert_eq!(mufi(&a).unwrap(), 6);
        assert!(validate_assignment(&g, &a, 1).unwrap().is_empty());
    }

    #[test]
    fn three_class_stack() {
        // classes with max weights 4, 3, 2
        let g = ConflictGraph::from_edges(vec![4, 3, 2, 1], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = Coloring::new(vec![0, 1, 2, 0]);
        let a = coloring_to_assignment(&g, &c, 1).unwrap();
        assert_eq!(mufi(&a).unwrap(), 11);
    }

    #[test]
    fn improper_coloring_rejected() {
        let g = ConflictGraph::from_edges(vec![1, 1], [(0, 1)]).unwrap();
        assert!(matches!(
            coloring_to_assignment(&g, &Coloring::new(vec![0, 0]), 1),
            Err(Error::ImproperColoring(0, 1))
        ));
    }

    #[test]
    fn first_fit_edgeless() {
        let g = ConflictGraph::from_edges(vec![1; 5], []).unwrap();
        let a = first_fit_assignment(&g, 1, FirstFitOrder::Input);
        assert!(a.intervals().iter().all(|&iv| iv == Interval::new(1, 1)));
        assert_eq!(mufi(&a).unwrap(), 1);
    }

    #[test]
    fn first_fit_path_graph() {
        let g = ConflictGraph::from_edges(vec![1, 1, 1], [(0, 1), (1, 2)]).unwrap();
        let a = first_fit_assignment(&g, 1, FirstFitOrder::Input);
        assert_eq!(
            a.intervals(),
            &[Interval::new(1, 1), Interval::new(3, 3), Interval::new(1, 1)]
        );
        assert_eq!(mufi(&a).unwrap(), 3);
    }

    #[test]
    fn first_fit_uses_gaps() {
        // neighbor blocks [1,1] and [6,6]; a width-2 block with gb 1 fits at 3
        let mut placed = vec![Interval::new(6, 6), Interval::new(1, 1)];
        assert_eq!(lowest_fit(&mut placed, 2, 1), 3);
        assert_eq!(lowest_fit(&mut placed, 3, 1), 8);
        assert_eq!(lowest_fit(&mut [], 3, 1), 1);
    }

    #[test]
    fn empty_mufi() {
        assert!(mufi(&SpectrumAssignment::new(vec![])).is_err());
    }
}
