use std::io::{Read, Write};

use serde::Serialize;

use crate::error::Result;
use crate::harness::run::ScenarioResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
}

impl ExportFormat {
    /// Picks the format from a file extension, defaulting to JSON.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => ExportFormat::Csv,
            _ => ExportFormat::Json,
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario: &'a str,
    p1: Option<f64>,
    mean_mufi: f64,
    mufi_ci: Option<f64>,
    mean_p_emp: Option<f64>,
    p_emp_ci: Option<f64>,
    p_theory: f64,
    reps: usize,
    seed: u64,
}

pub const CSV_HEADER: [&str; 9] = [
    "scenario", "p1", "mean_mufi", "mufi_ci", "mean_p_emp", "p_emp_ci", "p_theory", "reps", "seed",
];

/// One row per result; always writes the header, even for no results.
pub fn write_csv<W: Write>(results: &[ScenarioResult], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        w.serialize(CsvRow {
            scenario: &r.scenario,
            p1: r.p1,
            mean_mufi: r.mean_mufi,
            mufi_ci: r.mufi_ci,
            mean_p_emp: r.mean_p_emp,
            p_emp_ci: r.p_emp_ci,
            p_theory: r.p_theory,
            reps: r.reps,
            seed: r.seed,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(results: &[ScenarioResult], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, results)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<ScenarioResult>> {
    Ok(serde_json::from_reader(input)?)
}

pub fn export(results: &[ScenarioResult], format: ExportFormat, path: &std::path::Path) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        ExportFormat::Json => write_json(results, file),
        ExportFormat::Csv => write_csv(results, file),
    }
}
