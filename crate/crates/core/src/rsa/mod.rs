//! Routing and spectrum assignment: routing sampled requests by a scheme,
//! conflict graphs, colorings, spectrum assignments under the guard-band
//! rule, MUFI bounds, and small-instance exact oracles.

mod bounds;
mod coloring;
mod graph;
mod oracle;
mod routing;
mod spectrum;

pub use bounds::{corollary_bounds, mufi_bounds, predicted_chromatic, MufiBounds};
pub use coloring::{exact_chromatic, exact_coloring, greedy_coloring, Coloring, EXACT_CHROMATIC_LIMIT};
pub use graph::{build_conflict_graph, empirical_intersecting_probability, ConflictGraph};
pub use oracle::{brute_force_optimal_mufi, default_cap, BRUTE_FORCE_LIMIT};
pub use routing::{route_requests, RoutedRequest};
pub use spectrum::{
    coloring_to_assignment, first_fit_assignment, mufi, validate_assignment, FirstFitOrder, Interval,
    SpectrumAssignment, Violation,
};
