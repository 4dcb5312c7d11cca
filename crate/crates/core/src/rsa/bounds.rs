use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rsa::ConflictGraph;

/// Sandwich on the optimal MUFI of a conflict graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MufiBounds {
    pub lower: u64,
    pub upper: u64,
}

/// Bounds from the chromatic number χ:
/// `(χ−1)·GB + Σ χ smallest weights <= opt <= (χ−1)·GB + Σ χ largest weights`.
pub fn mufi_bounds(g: &ConflictGraph, chromatic: usize, gb: u32) -> Result<MufiBounds> {
    let n = g.vertex_count();
    if chromatic == 0 || chromatic > n {
        return Err(Error::InvalidParameter(format!(
            "chromatic number {chromatic} outside 1..={n}"
        )));
    }
    let mut w: Vec<u64> = g.weights().iter().map(|&x| x as u64).collect();
    w.sort_unstable();
    let separation = (chromatic as u64 - 1) * gb as u64;
    Ok(MufiBounds {
        lower: separation + w[..chromatic].iter().sum::<u64>(),
        upper: separation + w[n - chromatic..].iter().sum::<u64>(),
    })
}

/// Weight-range form of the bounds for weights in `[alpha, beta]`:
/// `(χ−1)·GB + χ·α` and `(χ−1)·GB + χ·β`.
pub fn corollary_bounds(chromatic: usize, gb: u32, alpha: u32, beta: u32) -> MufiBounds {
    let chi = chromatic as u64;
    let separation = chi.saturating_sub(1) * gb as u64;
    MufiBounds {
        lower: separation + chi * alpha as u64,
        upper: separation + chi * beta as u64,
    }
}

/// Leading-order random-graph estimate of χ for `n` vertices with edge
/// probability `p`: `½ · ln(1/(1−p)) · n / ln n`. Asymptotic only; use it
/// for trends, not as a value.
pub fn predicted_chromatic(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be at least 2")));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} must lie in [0, 1)")));
    }
    let n = n as f64;
    Ok(0.5 * (1.0 / (1.0 - p)).ln() * n / n.ln())
}
