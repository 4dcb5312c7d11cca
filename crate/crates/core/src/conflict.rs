//! Conflict coefficients and the K×K conflict matrix.
//!
//! `theta[i][j]` is the probability that two independent requests drawn from
//! the traffic distribution intersect when the first rides its `i`-th
//! candidate path and the second its `j`-th. It is the double sum over
//! ordered pairs of pairs, self-pairs included:
//!
//! `theta[i][j] = Σ_a Σ_b w(a)·w(b)·[path_i(a) ∩ path_j(b) ≠ ∅]`

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{CandidatePathTable, LinkSet};
use crate::traffic::TrafficDistribution;

/// Symmetric K×K matrix of conflict coefficients. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct ConflictMatrix {
    k: usize,
    theta: Vec<f64>,
}

impl ConflictMatrix {
    /// Builds a matrix from rows. Rejects non-square, asymmetric, or
    /// out-of-[0,1] input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidParameter("conflict matrix is empty".into()));
        }
        let mut theta = Vec::with_capacity(k * k);
        for row in &rows {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    actual: row.len(),
                });
            }
            for &v in row {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParameter(format!("coefficient {v} not in [0,1]")));
                }
            }
            theta.extend_from_slice(row);
        }
        for i in 0..k {
            for j in 0..i {
                if theta[i * k + j] != theta[j * k + i] {
                    return Err(Error::InvalidParameter(format!(
                        "conflict matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(ConflictMatrix { k, theta })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.theta[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.theta.chunks(self.k).map(<[f64]>::to_vec).collect()
    }

    pub fn min_entry(&self) -> f64 {
        self.theta.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_entry(&self) -> f64 {
        self.theta.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl TryFrom<Vec<Vec<f64>>> for ConflictMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        ConflictMatrix::from_rows(rows)
    }
}

impl From<ConflictMatrix> for Vec<Vec<f64>> {
    fn from(cm: ConflictMatrix) -> Self {
        cm.rows()
    }
}

impl fmt::Display for ConflictMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.theta.chunks(self.k) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.4}")).collect();
            writeln!(f, "[ {} ]", cells.join("  "))?;
        }
        Ok(())
    }
}

/// Weighted pairs with the link set of each candidate rank.
struct RankedPairs<'a> {
    weights: Vec<f64>,
    // masks[rank][pair]
    masks: Vec<Vec<&'a LinkSet>>,
}

impl<'a> RankedPairs<'a> {
    fn new(table: &'a CandidatePathTable, dist: &TrafficDistribution) -> Result<Self> {
        if table.node_count() != dist.node_count() {
            return Err(Error::DimensionMismatch {
                expected: table.node_count(),
                actual: dist.node_count(),
            });
        }
        let mut weights = Vec::new();
        let mut masks = vec![Vec::new(); table.k()];
        for ((s, d), w) in dist.support() {
            weights.push(w);
            for (rank, column) in masks.iter_mut().enumerate() {
                let path = table.path(s, d, rank).ok_or_else(|| {
                    Error::InvalidParameter(format!("no candidate path for pair ({s},{d})"))
                })?;
                column.push(path.link_set());
            }
        }
        Ok(RankedPairs { weights, masks })
    }

    fn coefficient(&self, i: usize, j: usize) -> f64 {
        // canonical orientation keeps theta[i][j] and theta[j][i] bit-identical
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let (mi, mj) = (&self.masks[i], &self.masks[j]);
        let mut total = 0.0;
        for (a, &wa) in self.weights.iter().enumerate() {
            let mut row = 0.0;
            for (b, &wb) in self.weights.iter().enumerate() {
                if mi[a].intersects(mj[b]) {
                    row += wb;
                }
            }
            total += wa * row;
        }
        total
    }
}

fn check_index(table: &CandidatePathTable, index: usize) -> Result<()> {
    if index >= table.k() {
        return Err(Error::IndexOutOfRange {
            index,
            k: table.k(),
        });
    }
    Ok(())
}

/// Conflict coefficient for 0-based candidate ranks `i` and `j`.
pub fn conflict_coefficient(
    table: &CandidatePathTable,
    dist: &TrafficDistribution,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_index(table, i)?;
    check_index(table, j)?;
    Ok(RankedPairs::new(table, dist)?.coefficient(i, j))
}

/// Full K×K conflict matrix.
pub fn conflict_matrix(table: &CandidatePathTable, dist: &TrafficDistribution) -> Result<ConflictMatrix> {
    let k = table.k();
    let pairs = RankedPairs::new(table, dist)?;
    let mut theta = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let v = pairs.coefficient(i, j);
            theta[i * k + j] = v;
            theta[j * k + i] = v;
        }
    }
    Ok(ConflictMatrix { k, theta })
}
