//! Scenario configuration, replicated Monte-Carlo runs, statistics, and
//! result export.

mod config;
mod export;
mod run;
pub mod seed;
pub mod stats;
mod table;

pub use config::{
    preset, scenario_presets, AssignmentMethod, ScenarioConfig, TopologySpec, TrafficSpec, DEFAULT_DC_MASS,
    DEFAULT_SEED,
};
pub use export::{export, read_json, write_csv, write_json, ExportFormat, CSV_HEADER};
pub use run::{
    default_grid, run_prepared, run_scenario, sweep_p1, PreparedScenario, ReplicationRecord, ScenarioResult,
};
pub use table::{increasing_order, minimum_probability_table, pmin_row, PminRow};
