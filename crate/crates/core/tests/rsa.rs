mod common;

use eon_spectra::gof::RoutingScheme;
use eon_spectra::harness::preset;
use eon_spectra::harness::stats::spearman;
use eon_spectra::rsa::{
    brute_force_optimal_mufi, build_conflict_graph, coloring_to_assignment, default_cap,
    empirical_intersecting_probability, exact_chromatic, exact_coloring, first_fit_assignment, greedy_coloring,
    mufi, mufi_bounds, predicted_chromatic, route_requests, validate_assignment, ConflictGraph, Coloring,
    FirstFitOrder, Interval, BRUTE_FORCE_LIMIT,
};
use eon_spectra::topology::{all_candidate_paths, paths_intersect, BuiltinTopology};
use eon_spectra::traffic::{sample_requests, uniform_distribution};
use eon_spectra::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{chromatic_by_exhaustion, random_graph};

/// Minimum MUFI by trying every start slice for every vertex, with no
/// placement rule at all.
fn mufi_by_exhaustion(g: &ConflictGraph, gb: u32) -> u32 {
    fn go(g: &ConflictGraph, gb: u32, cap: u32, v: usize, placed: &mut Vec<Interval>, reach: u32, best: &mut u32) {
        if reach >= *best {
            return;
        }
        if v == g.vertex_count() {
            *best = reach;
            return;
        }
        let w = g.weight(v);
        for start in 1..=cap + 1 - w {
            let iv = Interval::with_width(start, w);
            let clear = (0..v).all(|u| !g.are_adjacent(u, v) || iv.distance(&placed[u]) >= gb as i64);
            if clear {
                placed.push(iv);
                go(g, gb, cap, v + 1, placed, reach.max(iv.end), best);
                placed.pop();
            }
        }
    }
    let cap = default_cap(g, gb);
    let mut best = cap + 1;
    go(g, gb, cap, 0, &mut Vec::new(), 0, &mut best);
    best
}

#[test]
fn exact_chromatic_matches_exhaustion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..60 {
        let p = [0.2, 0.5, 0.8][i % 3];
        let g = random_graph(&mut rng, 8, p, 1, 4);
        assert_eq!(exact_chromatic(&g).unwrap(), chromatic_by_exhaustion(&g), "instance {i}");
        let c = exact_coloring(&g).unwrap();
        assert!(c.is_proper(&g));
    }
}

#[test]
fn greedy_never_beats_exact_on_gnp50() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..5 {
        let g = random_graph(&mut rng, 50, 0.3, 1, 4);
        let greedy = greedy_coloring(&g);
        assert!(greedy.is_proper(&g));
        assert!(greedy.class_count() >= exact_chromatic(&g).unwrap());
    }
}

#[test]
fn odd_cycle_and_complete_graphs() {
    let c5 = ConflictGraph::from_edges(vec![1; 5], [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    assert_eq!(exact_chromatic(&c5).unwrap(), 3);
    let edges: Vec<_> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
    let k6 = ConflictGraph::from_edges(vec![1; 6], edges).unwrap();
    assert_eq!(exact_chromatic(&k6).unwrap(), 6);
    assert_eq!(greedy_coloring(&k6).class_count(), 6);
}

#[test]
fn oracle_matches_placement_free_exhaustion() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..40 {
        let n = rng.gen_range(1..=5);
        let p = [0.3, 0.6, 0.9][i % 3];
        let gb = rng.gen_range(0..=2);
        let g = random_graph(&mut rng, n, p, 1, 3);
        let fast = brute_force_optimal_mufi(&g, gb, default_cap(&g, gb)).unwrap();
        assert_eq!(fast, mufi_by_exhaustion(&g, gb), "instance {i}");
    }
}

#[test]
fn sandwich_and_heuristics() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for i in 0..200 {
        let n = rng.gen_range(1..=8);
        let p = [0.2, 0.5, 0.8][i % 3];
        let gb = rng.gen_range(0..=2);
        let g = random_graph(&mut rng, n, p, 1, 4);
        let chi = exact_chromatic(&g).unwrap();
        let opt = brute_force_optimal_mufi(&g, gb, default_cap(&g, gb)).unwrap() as u64;
        let b = mufi_bounds(&g, chi, gb).unwrap();
        assert!(b.lower <= opt && opt <= b.upper, "instance {i}: {} <= {opt} <= {}", b.lower, b.upper);

        let ff = first_fit_assignment(&g, gb, FirstFitOrder::DescendingWeight);
        assert!(validate_assignment(&g, &ff, gb).unwrap().is_empty());
        assert!(mufi(&ff).unwrap() as u64 >= opt);

        let stacked = coloring_to_assignment(&g, &exact_coloring(&g).unwrap(), gb).unwrap();
        assert!(validate_assignment(&g, &stacked, gb).unwrap().is_empty());
        let m = mufi(&stacked).unwrap() as u64;
        assert!(opt <= m && m <= b.upper);
    }
}

#[test]
fn class_stacking_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..100 {
        let n = rng.gen_range(1..=30);
        let gb = rng.gen_range(0..=3);
        let g = random_graph(&mut rng, n, 0.3, 1, 4);
        let c = greedy_coloring(&g);
        let a = coloring_to_assignment(&g, &c, gb).unwrap();
        assert!(validate_assignment(&g, &a, gb).unwrap().is_empty());
        let heights: u32 = c
            .classes()
            .iter()
            .map(|class| class.iter().map(|&v| g.weight(v)).max().unwrap())
            .sum();
        let expected = heights + (c.class_count() as u32 - 1) * gb;
        assert_eq!(mufi(&a).unwrap(), expected);
    }
}

#[test]
fn oracle_limits() {
    let big = ConflictGraph::from_edges(vec![1; BRUTE_FORCE_LIMIT + 1], []).unwrap();
    assert!(matches!(
        brute_force_optimal_mufi(&big, 1, 100),
        Err(Error::InstanceTooLarge { .. })
    ));
    let k2 = ConflictGraph::from_edges(vec![1, 1], [(0, 1)]).unwrap();
    assert_eq!(brute_force_optimal_mufi(&k2, 1, 3).unwrap(), 3);
    assert!(matches!(brute_force_optimal_mufi(&k2, 1, 2), Err(Error::CapExceeded { .. })));
    let single = ConflictGraph::from_edges(vec![4], []).unwrap();
    assert_eq!(brute_force_optimal_mufi(&single, 1, 10).unwrap(), 4);
}

#[test]
fn improper_coloring_is_rejected() {
    let g = ConflictGraph::from_edges(vec![1, 2, 3], [(0, 2)]).unwrap();
    assert!(coloring_to_assignment(&g, &Coloring::new(vec![0, 1, 0]), 1).is_err());
}

#[test]
fn rebuilt_edges_equal_pairwise_intersection() {
    let t = BuiltinTopology::Nsfnet14.build();
    let table = all_candidate_paths(&t, 2).unwrap();
    let dist = uniform_distribution(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let reqs = sample_requests(&dist, 300, 1, 4, &mut rng).unwrap();
    let routed = route_requests(&reqs, &table, &RoutingScheme::two_path(0.4).unwrap(), &mut rng).unwrap();
    let g = build_conflict_graph(&routed);
    let mut expected = Vec::new();
    for i in 0..routed.len() {
        for j in i + 1..routed.len() {
            if paths_intersect(&routed[i].path, &routed[j].path) {
                expected.push((i, j));
            }
        }
    }
    assert_eq!(g.edges().collect::<Vec<_>>(), expected);
    assert_eq!(g.weights(), reqs.iter().map(|r| r.bandwidth).collect::<Vec<_>>());
    let p = empirical_intersecting_probability(&g).unwrap();
    assert_eq!(p, expected.len() as f64 / (300.0 * 299.0 / 2.0));
}

#[test]
fn predicted_chromatic_tracks_greedy_colors() {
    let cases = [("NSF-U", 1.0), ("R-U", 1.0), ("R-W", 0.6)];
    let mut predicted = Vec::new();
    let mut observed = Vec::new();
    for (name, p1) in cases {
        let cfg = preset(name).unwrap().with_p1(p1).unwrap();
        let t = cfg.topology.load().unwrap();
        let table = all_candidate_paths(&t, 2).unwrap();
        let dist = cfg.traffic.build(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let reqs = sample_requests(&dist, 1000, 1, 4, &mut rng).unwrap();
        let routed = route_requests(&reqs, &table, &cfg.scheme, &mut rng).unwrap();
        let g = build_conflict_graph(&routed);
        let p = empirical_intersecting_probability(&g).unwrap();
        predicted.push(predicted_chromatic(1000, p).unwrap());
        observed.push(greedy_coloring(&g).class_count() as f64);
    }
    assert!(predicted.windows(2).all(|w| w[0] < w[1]), "{predicted:?}");
    assert!(spearman(&predicted, &observed).unwrap() > 0.0, "{observed:?}");
}

#[test]
fn predicted_chromatic_domain() {
    assert_eq!(predicted_chromatic(100, 0.0).unwrap(), 0.0);
    assert!(predicted_chromatic(100, 1.0).is_err());
    assert!(predicted_chromatic(100, 0.2).unwrap() < predicted_chromatic(100, 0.3).unwrap());
}
