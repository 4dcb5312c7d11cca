use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gof::RoutingScheme;
use crate::topology::{CandidatePathTable, Path};
use crate::traffic::Request;

/// A request bound to one of its candidate paths.
#[derive(Debug, Clone, Serialize)]
pub struct RoutedRequest {
    pub request: Request,
    /// 0-based candidate rank.
    pub path_index: usize,
    pub path: Path,
}

/// Assigns each request independently to candidate rank `i` with
/// probability `scheme[i]`. One uniform draw per request.
pub fn route_requests<R: Rng + ?Sized>(
    requests: &[Request],
    table: &CandidatePathTable,
    scheme: &RoutingScheme,
    rng: &mut R,
) -> Result<Vec<RoutedRequest>> {
    if scheme.k() != table.k() {
        return Err(Error::DimensionMismatch {
            expected: table.k(),
            actual: scheme.k(),
        });
    }
    let probs = scheme.probs();
    requests
        .iter()
        .map(|req| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            // fall back to the last rank with positive mass if rounding leaves u uncovered
            let mut index = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
            for (i, &p) in probs.iter().enumerate() {
                acc += p;
                if p > 0.0 && u < acc {
                    index = i;
                    break;
                }
            }
            let path = table
                .path(req.source, req.destination, index)
                .ok_or(Error::NoPath {
                    from: req.source,
                    to: req.destination,
                })?
                .clone();
            Ok(RoutedRequest {
                request: *req,
                path_index: index,
                path,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{all_candidate_paths, BuiltinTopology};
    use crate::traffic::{sample_requests, uniform_distribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize) -> (CandidatePathTable, Vec<Request>) {
        let ring = BuiltinTopology::Ring12.build();
        let table = all_candidate_paths(&ring, 2).unwrap();
        let dist = uniform_distribution(&ring).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let reqs = sample_requests(&dist, n, 1, 4, &mut rng).unwrap();
        (table, reqs)
    }

    #[test]
    fn vertex_schemes_pick_fixed_rank() {
        let (table, reqs) = setup(200);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rank in 0..2 {
            let scheme = RoutingScheme::vertex(2, rank).unwrap();
            let routed = route_requests(&reqs, &table, &scheme, &mut rng).unwrap();
            for r in &routed {
                assert_eq!(r.path_index, rank);
                let expected = table.path(r.request.source, r.request.destination, rank).unwrap();
                assert_eq!(&r.path, expected);
            }
        }
    }

    #[test]
    fn even_split_concentrates() {
        let (table, reqs) = setup(100_000);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let scheme = RoutingScheme::two_path(0.5).unwrap();
        let routed = route_requests(&reqs, &table, &scheme, &mut rng).unwrap();
        let first = routed.iter().filter(|r| r.path_index == 0).count() as f64 / 1e5;
        assert!((first - 0.5).abs() < 0.01, "{first}");
    }

    #[test]
    fn scheme_size_must_match() {
        let (table, reqs) = setup(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let scheme = RoutingScheme::uniform(3).unwrap();
        assert!(route_requests(&reqs, &table, &scheme, &mut rng).is_err());
    }
}
