//! Config-driven verification scenarios.
//!
//! A scenario reads a small TOML file, runs one family of checks through the
//! hidden-variable modules, compares every number with the quantum oracle and
//! returns a [`ScenarioReport`]. Reports serialize to JSON with a fixed key
//! order; ω traces go to `omega,value` CSV files.

mod config;
mod report;
mod run;
pub mod sweep;
mod trace;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

pub use config::{
    RunOptions, ScenarioConfig, ScenarioKind, DEFAULT_GRID_POINTS, DEFAULT_SWEEP_TRIALS,
    DEFAULT_TOLERANCE, NORMALIZE_LIMIT,
};
pub use report::{Check, Comparison, NamedValue, ReportInputs, ScenarioReport, WitnessRecord};
pub use run::{run_scenario, Trace};
pub use sweep::{run_sweep, SweepCheck, SweepReport};
pub use trace::{emit_trace, integrate_csv, render_csv, sample_points, TraceOutput};

use crate::error::{Error, Result};

/// Environment variable naming the default output directory for reports and traces.
pub const OUT_DIR_ENV: &str = "HVLAB_OUT_DIR";

/// Scenario step functions without writing them anywhere.
pub fn scenario_traces(config: &ScenarioConfig) -> Result<Vec<Trace>> {
    run::evaluate(config)
        .map(|e| e.traces)
        .map_err(|e| e.in_scenario(config.scenario.as_str()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestEntry {
    pub config: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ScenarioReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestSummary {
    pub entries: Vec<ManifestEntry>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

/// All `*.toml` files directly inside `dir`, sorted by name.
pub fn manifest_configs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Runs every config in `dir` concurrently. Each report is written to
/// `<out_dir>/<stem>.report.json` when `out_dir` is given.
pub fn run_manifest(
    dir: &Path,
    options: &RunOptions,
    out_dir: Option<&Path>,
) -> Result<ManifestSummary> {
    let paths = manifest_configs(dir)?;
    if let Some(out) = out_dir {
        std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    }
    let entries: Vec<ManifestEntry> = paths
        .par_iter()
        .map(|path| {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            let outcome = ScenarioConfig::from_file(path).and_then(|mut c| {
                options.apply(&mut c)?;
                let report = run_scenario(&c)?;
                if let Some(out) = out_dir {
                    write_report(&report, &out.join(report_file_name(path)))?;
                }
                Ok(report)
            });
            match outcome {
                Ok(r) => ManifestEntry {
                    config: name,
                    pass: r.pass,
                    report: Some(r),
                    error: None,
                },
                Err(e) => ManifestEntry {
                    config: name,
                    report: None,
                    error: Some(e.to_string()),
                    pass: false,
                },
            }
        })
        .collect();
    let passed = entries.iter().filter(|e| e.pass).count();
    Ok(ManifestSummary {
        failed: entries.len() - passed,
        pass: passed == entries.len(),
        passed,
        entries,
    })
}

pub fn report_file_name(config_path: &Path) -> String {
    let stem = config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    format!("{stem}.report.json")
}

pub fn write_report(report: &ScenarioReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_json()).map_err(|e| Error::io(path, e))
}
