use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conflict::{conflict_matrix, ConflictMatrix};
use crate::error::{Error, Result};
use crate::gof::{evaluate_gof, RoutingScheme};
use crate::harness::config::{AssignmentMethod, ScenarioConfig};
use crate::harness::seed::{child_seed, stream, ROUTING_STREAM, SAMPLING_STREAM};
use crate::harness::stats::{ci_half_width, mean, CI_METHOD};
use crate::rsa::{
    build_conflict_graph, coloring_to_assignment, empirical_intersecting_probability,
    first_fit_assignment, greedy_coloring, mufi, route_requests, validate_assignment,
};
use crate::topology::{all_candidate_paths, CandidatePathTable};
use crate::traffic::{sample_requests, TrafficDistribution};

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub seed: u64,
    pub mufi: u32,
    /// Edge density of the conflict graph; absent with fewer than 2 requests.
    pub p_empirical: Option<f64>,
    pub edges: usize,
    pub colors: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub config: ScenarioConfig,
    /// Position in a sweep grid; 0 for single runs.
    pub grid_index: u64,
    pub p1: Option<f64>,
    pub seed: u64,
    pub reps: usize,
    pub cm: ConflictMatrix,
    pub p_theory: f64,
    pub mean_mufi: f64,
    pub mufi_ci: Option<f64>,
    pub mean_p_emp: Option<f64>,
    pub p_emp_ci: Option<f64>,
    pub ci_method: String,
    /// Spectrum assignments that passed validation (one per replication).
    pub assignments_validated: usize,
    pub records: Vec<ReplicationRecord>,
}

/// Topology-dependent pieces reused across replications and grid points.
pub struct PreparedScenario {
    pub table: CandidatePathTable,
    pub dist: TrafficDistribution,
    pub cm: ConflictMatrix,
}

impl PreparedScenario {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let topology = cfg.topology.load()?;
        let table = all_candidate_paths(&topology, cfg.k)?;
        let dist = cfg.traffic.build(&topology)?;
        let cm = conflict_matrix(&table, &dist)?;
        Ok(PreparedScenario { table, dist, cm })
    }
}

fn run_replication(
    cfg: &ScenarioConfig,
    prepared: &PreparedScenario,
    grid_index: u64,
    replication: usize,
) -> Result<ReplicationRecord> {
    let seed = child_seed(cfg.seed, &cfg.name, grid_index, replication as u64);
    let mut sampling = stream(seed, SAMPLING_STREAM);
    let mut routing = stream(seed, ROUTING_STREAM);
    let requests = sample_requests(&prepared.dist, cfg.n_requests, cfg.alpha, cfg.beta, &mut sampling)?;
    let routed = route_requests(&requests, &prepared.table, &cfg.scheme, &mut routing)?;
    let graph = build_conflict_graph(&routed);
    let p_empirical = empirical_intersecting_probability(&graph).ok();
    let (assignment, colors) = match cfg.assignment {
        AssignmentMethod::FirstFit { order } => (first_fit_assignment(&graph, cfg.guard_band, order), None),
        AssignmentMethod::ColoringStack => {
            let coloring = greedy_coloring(&graph);
            let a = coloring_to_assignment(&graph, &coloring, cfg.guard_band)
                .map_err(|e| Error::Invariant(format!("greedy coloring rejected: {e}")))?;
            (a, Some(coloring.class_count()))
        }
    };
    let violations = validate_assignment(&graph, &assignment, cfg.guard_band)?;
    if let Some(first) = violations.first() {
        return Err(Error::Invariant(format!(
            "replication {replication} produced {} violations, first: {first}",
            violations.len()
        )));
    }
    Ok(ReplicationRecord {
        replication,
        seed,
        mufi: mufi(&assignment)?,
        p_empirical,
        edges: graph.edge_count(),
        colors,
    })
}

fn aggregate(
    cfg: &ScenarioConfig,
    prepared: &PreparedScenario,
    grid_index: u64,
    records: Vec<ReplicationRecord>,
) -> Result<ScenarioResult> {
    let mufis: Vec<f64> = records.iter().map(|r| r.mufi as f64).collect();
    let ps: Vec<f64> = records.iter().filter_map(|r| r.p_empirical).collect();
    if ps.is_empty() {
        log::warn!(
            "scenario {}: fewer than 2 requests per replication, empirical p is undefined",
            cfg.name
        );
    }
    Ok(ScenarioResult {
        scenario: cfg.name.clone(),
        config: cfg.clone(),
        grid_index,
        p1: (cfg.k == 2).then(|| cfg.scheme.probs()[0]),
        seed: cfg.seed,
        reps: records.len(),
        cm: prepared.cm.clone(),
        p_theory: evaluate_gof(&prepared.cm, &cfg.scheme)?,
        mean_mufi: mean(&mufis).expect("at least one replication"),
        mufi_ci: ci_half_width(&mufis),
        mean_p_emp: mean(&ps),
        p_emp_ci: ci_half_width(&ps),
        ci_method: CI_METHOD.to_string(),
        assignments_validated: records.len(),
        records,
    })
}

/// Runs one scenario with an already prepared topology and traffic model.
/// Replications run in parallel and are collected in index order, so the
/// result does not depend on thread scheduling.
pub fn run_prepared(cfg: &ScenarioConfig, prepared: &PreparedScenario, grid_index: u64) -> Result<ScenarioResult> {
    cfg.validate()?;
    let records = (0..cfg.replications)
        .into_par_iter()
        .map(|r| run_replication(cfg, prepared, grid_index, r))
        .collect::<Result<Vec<_>>>()?;
    aggregate(cfg, prepared, grid_index, records)
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let prepared = PreparedScenario::new(cfg)?;
    run_prepared(cfg, &prepared, 0)
}

/// `0.0, 0.1, ..., 1.0`.
pub fn default_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// One result per grid value of `p1`, each with its own seed lineage.
pub fn sweep_p1(cfg: &ScenarioConfig, grid: &[f64]) -> Result<Vec<ScenarioResult>> {
    if cfg.k != 2 {
        return Err(Error::InvalidParameter("p1 sweeps need K = 2".into()));
    }
    if let Some(bad) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!("grid value {bad} outside [0,1]")));
    }
    let prepared = PreparedScenario::new(cfg)?;
    grid.iter()
        .enumerate()
        .map(|(i, &p1)| {
            let point = ScenarioConfig {
                scheme: RoutingScheme::two_path(p1)?,
                ..cfg.clone()
            };
            run_prepared(&point, &prepared, i as u64)
        })
        .collect()
}
