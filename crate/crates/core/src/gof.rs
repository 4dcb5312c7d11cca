//! The intersecting-probability quadratic form `p(x) = xᵀ·Θ·x` over the
//! probability simplex, and its global minimization.
//!
//! Θ need not be positive semidefinite, so the exact solver enumerates every
//! support set, solves the equality-constrained stationarity system on it,
//! and keeps the best feasible point. Vertices are always candidates, so a
//! degenerate support never leaves the solver without an answer.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conflict::ConflictMatrix;
use crate::error::{Error, Result};

const SIMPLEX_TOLERANCE: f64 = 1e-9;
const KKT_RESIDUAL: f64 = 1e-10;
const FEASIBILITY_SLACK: f64 = 1e-12;
const PIVOT_EPSILON: f64 = 1e-13;
const TIE_TOLERANCE: f64 = 1e-12;

/// Largest K solved by exhaustive support enumeration.
pub const EXACT_MAX_K: usize = 12;

/// Probabilities `(p1, ..., pK)` of routing a request on each candidate rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RoutingScheme(Vec<f64>);

impl RoutingScheme {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("routing scheme is empty".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "routing scheme {probs:?} has a negative or non-finite entry"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "routing scheme sums to {sum}, expected 1"
            )));
        }
        Ok(RoutingScheme(probs))
    }

    /// `(p1, 1 − p1)`.
    pub fn two_path(p1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::InvalidParameter(format!("p1 = {p1} not in [0,1]")));
        }
        RoutingScheme::new(vec![p1, 1.0 - p1])
    }

    /// All mass on candidate `index` (0-based).
    pub fn vertex(k: usize, index: usize) -> Result<Self> {
        if index >= k {
            return Err(Error::IndexOutOfRange { index, k });
        }
        let mut probs = vec![0.0; k];
        probs[index] = 1.0;
        Ok(RoutingScheme(probs))
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("K must be positive".into()));
        }
        Ok(RoutingScheme(vec![1.0 / k as f64; k]))
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    /// Clamps tiny negatives to zero and rescales to sum exactly to one.
    fn normalized(mut probs: Vec<f64>) -> Self {
        for p in &mut probs {
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= sum;
        }
        RoutingScheme(probs)
    }
}

impl TryFrom<Vec<f64>> for RoutingScheme {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        RoutingScheme::new(v)
    }
}

impl From<RoutingScheme> for Vec<f64> {
    fn from(s: RoutingScheme) -> Self {
        s.0
    }
}

impl fmt::Display for RoutingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| format!("{p:.4}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// How the optimum was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Stationary point in the relative interior of the whole simplex.
    InteriorStationary,
    /// Stationary point on a proper face of dimension at least one.
    Boundary,
    /// A vertex of the simplex.
    Vertex,
    /// Best point found by multi-start descent; not certified optimal.
    BestFound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofSolution {
    pub scheme: RoutingScheme,
    pub p_min: f64,
    pub certificate: Certificate,
    /// Supports skipped because their stationarity system was singular.
    #[serde(default)]
    pub singular_supports: usize,
}

/// Intersecting probability `Σ θij·pi·pj` of a routing scheme.
pub fn evaluate_gof(cm: &ConflictMatrix, scheme: &RoutingScheme) -> Result<f64> {
    if cm.k() != scheme.k() {
        return Err(Error::DimensionMismatch {
            expected: cm.k(),
            actual: scheme.k(),
        });
    }
    Ok(quadratic_form(cm, scheme.probs()))
}

fn quadratic_form(cm: &ConflictMatrix, x: &[f64]) -> f64 {
    let k = cm.k();
    let mut total = 0.0;
    for i in 0..k {
        let mut row = 0.0;
        for j in 0..k {
            row += cm.get(i, j) * x[j];
        }
        total += x[i] * row;
    }
    total
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Keeps the smaller value; near-ties go to the lexicographically smaller scheme.
fn better(candidate: (f64, &[f64]), incumbent: (f64, &[f64])) -> bool {
    let (cv, cx) = candidate;
    let (iv, ix) = incumbent;
    if (cv - iv).abs() <= TIE_TOLERANCE {
        lex_cmp(cx, ix).is_lt()
    } else {
        cv < iv
    }
}

fn certificate_for(support: usize, k: usize) -> Certificate {
    match support {
        1 => Certificate::Vertex,
        s if s == k => Certificate::InteriorStationary,
        _ => Certificate::Boundary,
    }
}

/// Closed form for K = 2. With `p2 = 1 − p1` the objective is a univariate
/// quadratic in `p1`; its stationary point (if convex) is compared with both
/// endpoints.
pub fn minimize_gof_k2(cm: &ConflictMatrix) -> Result<GofSolution> {
    if cm.k() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: cm.k(),
        });
    }
    let (t11, t12, t22) = (cm.get(0, 0), cm.get(0, 1), cm.get(1, 1));
    let f = |p1: f64| t11 * p1 * p1 + 2.0 * t12 * p1 * (1.0 - p1) + t22 * (1.0 - p1) * (1.0 - p1);
    let curvature = t11 - 2.0 * t12 + t22;
    let mut candidates = vec![0.0, 1.0];
    if curvature > 0.0 {
        candidates.push(((t22 - t12) / curvature).clamp(0.0, 1.0));
    }
    let mut best = candidates[0];
    for &c in &candidates[1..] {
        let (fc, fb) = (f(c), f(best));
        if fc < fb - TIE_TOLERANCE || ((fc - fb).abs() <= TIE_TOLERANCE && c < best) {
            best = c;
        }
    }
    let scheme = RoutingScheme::normalized(vec![best, 1.0 - best]);
    let support = scheme.probs().iter().filter(|&&p| p > 0.0).count();
    Ok(GofSolution {
        p_min: quadratic_form(cm, scheme.probs()),
        certificate: certificate_for(support, 2),
        scheme,
        singular_supports: 0,
    })
}

/// Solves `A·x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below `PIVOT_EPSILON`.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[pivot][col].abs() < PIVOT_EPSILON {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for c in col..n {
                    a[row][c] -= factor * a[col][c];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Stationary point of the form restricted to the face spanned by `support`:
/// `Θ_S·x = λ·1`, `Σ x = 1`. `None` if singular, infeasible, or inaccurate.
fn face_stationary_point(cm: &ConflictMatrix, support: &[usize]) -> Option<Vec<f64>> {
    let m = support.len();
    let mut a = vec![vec![0.0; m + 1]; m + 1];
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            a[r][c] = cm.get(i, j);
        }
        a[r][m] = -1.0;
        a[m][r] = 1.0;
    }
    let mut b = vec![0.0; m + 1];
    b[m] = 1.0;
    let sol = solve_linear(a.clone(), b.clone())?;
    // residual check against the unmodified system
    for r in 0..=m {
        let lhs: f64 = (0..=m).map(|c| a[r][c] * sol[c]).sum();
        if (lhs - b[r]).abs() > KKT_RESIDUAL {
            return None;
        }
    }
    if sol[..m].iter().any(|&x| x < -FEASIBILITY_SLACK) {
        return None;
    }
    let mut full = vec![0.0; cm.k()];
    for (r, &i) in support.iter().enumerate() {
        full[i] = sol[r];
    }
    Some(full)
}

fn minimize_exact(cm: &ConflictMatrix) -> GofSolution {
    let k = cm.k();
    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut singular = 0;
    let consider = |x: Vec<f64>, support: usize, best: &mut Option<(f64, Vec<f64>, usize)>| {
        let scheme = RoutingScheme::normalized(x);
        let value = quadratic_form(cm, scheme.probs());
        let replace = match best {
            None => true,
            Some((bv, bx, _)) => better((value, scheme.probs()), (*bv, bx)),
        };
        if replace {
            *best = Some((value, scheme.0, support));
        }
    };
    for i in 0..k {
        let mut x = vec![0.0; k];
        x[i] = 1.0;
        consider(x, 1, &mut best);
    }
    for mask in 1u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|&i| mask & (1 << i) != 0).collect();
        if support.len() < 2 {
            continue;
        }
        match face_stationary_point(cm, &support) {
            Some(x) => consider(x, support.len(), &mut best),
            None => singular += 1,
        }
    }
    let (p_min, probs, _) = best.expect("vertices are always candidates");
    let effective_support = probs.iter().filter(|&&p| p > 0.0).count();
    GofSolution {
        scheme: RoutingScheme(probs),
        p_min,
        certificate: certificate_for(effective_support, k),
        singular_supports: singular,
    }
}

/// Euclidean projection onto the probability simplex (sort-based).
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut shift = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        acc += u;
        let t = (acc - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            shift = t;
        }
    }
    v.iter().map(|&x| (x - shift).max(0.0)).collect()
}

/// Multi-start projected gradient descent for large K. Starts: every vertex,
/// the barycenter, and the midpoint between each vertex and the barycenter.
fn minimize_descent(cm: &ConflictMatrix) -> GofSolution {
    let k = cm.k();
    let lipschitz = 2.0
        * (0..k)
            .map(|i| (0..k).map(|j| cm.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max);
    let step = if lipschitz > 0.0 { 1.0 / lipschitz } else { 1.0 };
    let bary = vec![1.0 / k as f64; k];
    let mut starts = vec![bary.clone()];
    for i in 0..k {
        let mut v = vec![0.0; k];
        v[i] = 1.0;
        starts.push(v.clone());
        starts.push(v.iter().zip(&bary).map(|(a, b)| 0.5 * (a + b)).collect());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mut x in starts {
        for _ in 0..20_000 {
            let grad: Vec<f64> = (0..k)
                .map(|i| 2.0 * (0..k).map(|j| cm.get(i, j) * x[j]).sum::<f64>())
                .collect();
            let moved: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
            let next = project_to_simplex(&moved);
            let change: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
            x = next;
            if change < 1e-15 {
                break;
            }
        }
        let scheme = RoutingScheme::normalized(x);
        let value = quadratic_form(cm, scheme.probs());
        let replace = match &best {
            None => true,
            Some((bv, bx)) => better((value, scheme.probs()), (*bv, bx)),
        };
        if replace {
            best = Some((value, scheme.0));
        }
    }
    let (p_min, probs) = best.expect("at least one start");
    GofSolution {
        scheme: RoutingScheme(probs),
        p_min,
        certificate: Certificate::BestFound,
        singular_supports: 0,
    }
}

/// Global minimum of the form over the simplex. Exact for K up to
/// [`EXACT_MAX_K`]; best-found descent beyond that.
pub fn minimize_gof(cm: &ConflictMatrix) -> GofSolution {
    if cm.k() <= EXACT_MAX_K {
        minimize_exact(cm)
    } else {
        minimize_descent(cm)
    }
}
