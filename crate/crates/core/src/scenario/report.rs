use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::sweep::SweepReport;
use crate::bell::ConflictWitness;
use crate::branching::{NodeRecord, Normalization};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

/// One hidden-variable number checked against one quantum number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub hv: String,
    pub qm: String,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub label: String,
    pub omega_left: f64,
    pub omega_right: f64,
    pub omega: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub state: Option<[f64; 3]>,
    pub axes: BTreeMap<String, [f64; 3]>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub grid_points: usize,
    pub normalization: Normalization,
}

impl From<&ScenarioConfig> for ReportInputs {
    fn from(c: &ScenarioConfig) -> Self {
        ReportInputs {
            state: c.state.map(|s| s.to_array()),
            axes: c
                .axes
                .iter()
                .map(|(k, v)| (k.clone(), v.to_array()))
                .collect(),
            lambda: c.lambda,
            seed: c.seed,
            trials: c.trials,
            grid_points: c.grid_points,
            normalization: c.normalization,
        }
    }
}

/// The structured outcome of one scenario. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub inputs: ReportInputs,
    pub hv_values: Vec<NamedValue>,
    pub qm_values: Vec<NamedValue>,
    pub comparisons: Vec<Comparison>,
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub witnesses: Vec<WitnessRecord>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch_history: Option<Vec<NodeRecord>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sweep: Option<SweepReport>,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl ScenarioReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// JSON with `runtime_ms` zeroed; identical inputs give identical bytes.
    pub fn canonical_json(&self) -> String {
        ScenarioReport {
            runtime_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    pub fn hv(&self, name: &str) -> Option<f64> {
        self.hv_values
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value)
    }

    pub fn qm(&self, name: &str) -> Option<f64> {
        self.qm_values
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.value)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Accumulates values while a scenario runs.
#[derive(Debug, Default)]
pub(crate) struct ReportBuilder {
    pub hv_values: Vec<NamedValue>,
    pub qm_values: Vec<NamedValue>,
    pub comparisons: Vec<Comparison>,
    pub witnesses: Vec<WitnessRecord>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub branch_history: Option<Vec<NodeRecord>>,
    pub sweep: Option<SweepReport>,
}

impl ReportBuilder {
    pub fn hv(&mut self, name: &str, value: f64) -> &mut Self {
        self.hv_values.push(NamedValue {
            name: name.into(),
            value,
        });
        self
    }

    pub fn qm(&mut self, name: &str, value: f64) -> &mut Self {
        self.qm_values.push(NamedValue {
            name: name.into(),
            value,
        });
        self
    }

    fn lookup(list: &[NamedValue], name: &str) -> f64 {
        list.iter()
            .find(|v| v.name == name)
            .unwrap_or_else(|| panic!("no value named {name}"))
            .value
    }

    /// Records `|hv[hv_name] - qm[qm_name]|`; both names must already be present.
    pub fn compare(&mut self, hv_name: &str, qm_name: &str) -> &mut Self {
        let hv = Self::lookup(&self.hv_values, hv_name);
        let qm = Self::lookup(&self.qm_values, qm_name);
        self.comparisons.push(Comparison {
            hv: hv_name.into(),
            qm: qm_name.into(),
            abs_error: (hv - qm).abs(),
        });
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn witness(&mut self, label: &str, w: &ConflictWitness) -> &mut Self {
        self.witnesses
            .extend(w.samples.iter().map(|s| WitnessRecord {
                label: label.into(),
                omega_left: s.omega_left,
                omega_right: s.omega_right,
                omega: s.omega,
                lhs: s.lhs,
                rhs: s.rhs,
            }));
        self
    }

    pub fn finish(self, config: &ScenarioConfig, runtime_ms: u64) -> ScenarioReport {
        let max_abs_error = self
            .comparisons
            .iter()
            .map(|c| c.abs_error)
            .fold(0.0, f64::max);
        let pass = max_abs_error <= config.tolerance && self.checks.iter().all(|c| c.pass);
        let mut notes = config.warnings.clone();
        notes.extend(self.notes);
        ScenarioReport {
            scenario: config.scenario.as_str().into(),
            inputs: config.into(),
            hv_values: self.hv_values,
            qm_values: self.qm_values,
            comparisons: self.comparisons,
            max_abs_error,
            tolerance: config.tolerance,
            witnesses: self.witnesses,
            checks: self.checks,
            notes,
            branch_history: self.branch_history,
            sweep: self.sweep,
            pass,
            runtime_ms,
        }
    }
}
