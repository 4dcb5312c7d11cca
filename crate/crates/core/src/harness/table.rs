use serde::{Deserialize, Serialize};

use crate::conflict::{conflict_matrix, ConflictMatrix};
use crate::error::Result;
use crate::gof::{minimize_gof, GofSolution};
use crate::harness::config::{scenario_presets, ScenarioConfig};
use crate::topology::all_candidate_paths;

/// Conflict matrix and optimal routing scheme of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PminRow {
    pub scenario: String,
    pub cm: ConflictMatrix,
    pub solution: GofSolution,
}

pub fn pmin_row(cfg: &ScenarioConfig) -> Result<PminRow> {
    let topology = cfg.topology.load()?;
    let table = all_candidate_paths(&topology, cfg.k)?;
    let dist = cfg.traffic.build(&topology)?;
    let cm = conflict_matrix(&table, &dist)?;
    Ok(PminRow {
        scenario: cfg.name.clone(),
        solution: minimize_gof(&cm),
        cm,
    })
}

/// Rows for the six presets, in preset order.
pub fn minimum_probability_table() -> Result<Vec<PminRow>> {
    scenario_presets().iter().map(pmin_row).collect()
}

/// Scenario names by increasing minimum intersecting probability.
pub fn increasing_order(rows: &[PminRow]) -> Vec<String> {
    let mut sorted: Vec<&PminRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.solution.p_min.total_cmp(&b.solution.p_min));
    sorted.into_iter().map(|r| r.scenario.clone()).collect()
}
