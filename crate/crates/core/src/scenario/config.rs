use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::branching::Normalization;
use crate::error::{Error, Result};
use crate::qubit::{BlochVector, PureState};
use crate::UNIT_TOLERANCE;

/// Inputs further than this from unit length are rejected rather than normalized.
pub const NORMALIZE_LIMIT: f64 = 1e-6;
pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_SWEEP_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    MeasureReproduction,
    Sandwich,
    RouteAgreement,
    Nonuniqueness,
    ClassicalRule,
    SumConflict,
    BranchingChain,
    Idempotence,
    Sweep,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::MeasureReproduction,
        ScenarioKind::Sandwich,
        ScenarioKind::RouteAgreement,
        ScenarioKind::Nonuniqueness,
        ScenarioKind::ClassicalRule,
        ScenarioKind::SumConflict,
        ScenarioKind::BranchingChain,
        ScenarioKind::Idempotence,
        ScenarioKind::Sweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::MeasureReproduction => "measure_reproduction",
            ScenarioKind::Sandwich => "sandwich",
            ScenarioKind::RouteAgreement => "route_agreement",
            ScenarioKind::Nonuniqueness => "nonuniqueness",
            ScenarioKind::ClassicalRule => "classical_rule",
            ScenarioKind::SumConflict => "sum_conflict",
            ScenarioKind::BranchingChain => "branching_chain",
            ScenarioKind::Idempotence => "idempotence",
            ScenarioKind::Sweep => "sweep",
        }
    }

    fn needs_state(self) -> bool {
        !matches!(self, ScenarioKind::Sandwich | ScenarioKind::Sweep)
    }

    fn required_axes(self) -> &'static [&'static str] {
        match self {
            ScenarioKind::MeasureReproduction | ScenarioKind::Idempotence => &["m"],
            ScenarioKind::Sandwich
            | ScenarioKind::RouteAgreement
            | ScenarioKind::Nonuniqueness
            | ScenarioKind::ClassicalRule
            | ScenarioKind::SumConflict
            | ScenarioKind::BranchingChain => &["n", "m"],
            ScenarioKind::Sweep => &[],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: String,
    state: Option<[f64; 3]>,
    #[serde(default)]
    axes: BTreeMap<String, [f64; 3]>,
    lambda: Option<f64>,
    seed: Option<u64>,
    trials: Option<usize>,
    grid_points: Option<usize>,
    tolerance: Option<f64>,
    normalize_all_levels: Option<bool>,
}

/// One verification scenario, as read from a TOML config file.
///
/// ```toml
/// scenario = "route_agreement"
/// state = [0.0, 0.0, 1.0]
///
/// [axes]
/// n = [1.0, 0.0, 0.0]
/// m = [0.0, 1.0, 0.0]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub state: Option<BlochVector>,
    pub axes: BTreeMap<String, BlochVector>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub grid_points: usize,
    pub tolerance: f64,
    pub normalization: Normalization,
    /// Auto-normalization notices raised while loading.
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioKind) -> Self {
        ScenarioConfig {
            scenario,
            state: None,
            axes: BTreeMap::new(),
            lambda: None,
            seed: None,
            trials: None,
            grid_points: DEFAULT_GRID_POINTS,
            tolerance: DEFAULT_TOLERANCE,
            normalization: Normalization::AllButLast,
            warnings: Vec::new(),
        }
    }

    pub fn with_state(mut self, s: BlochVector) -> Self {
        self.state = Some(s);
        self
    }

    pub fn with_axis(mut self, name: &str, v: BlochVector) -> Self {
        self.axes.insert(name.to_string(), v);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn with_sweep(mut self, seed: u64, trials: usize) -> Self {
        self.seed = Some(seed);
        self.trials = Some(trials);
        self
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let scenario: ScenarioKind = raw.scenario.parse()?;
        let mut warnings = Vec::new();
        let state = raw
            .state
            .map(|v| checked_unit("state", v, &mut warnings))
            .transpose()?;
        let mut axes = BTreeMap::new();
        for (name, v) in raw.axes {
            let axis = checked_unit(&format!("axes.{name}"), v, &mut warnings)?;
            axes.insert(name, axis);
        }
        let config = ScenarioConfig {
            scenario,
            state,
            axes,
            lambda: raw.lambda,
            seed: raw.seed,
            trials: raw.trials,
            grid_points: raw.grid_points.unwrap_or(DEFAULT_GRID_POINTS),
            tolerance: raw.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            normalization: if raw.normalize_all_levels.unwrap_or(false) {
                Normalization::AllLevels
            } else {
                Normalization::AllButLast
            },
            warnings,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenario.needs_state() && self.state.is_none() {
            return Err(Error::Config(format!(
                "scenario `{}` needs `state`",
                self.scenario
            )));
        }
        for name in self.scenario.required_axes() {
            if !self.axes.contains_key(*name) {
                return Err(Error::Config(format!(
                    "scenario `{}` needs axis `{name}`",
                    self.scenario
                )));
            }
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l < 1.0) {
                return Err(Error::Config(format!("lambda {l} outside (0, 1)")));
            }
        }
        if self.grid_points < 2 {
            return Err(Error::Config("grid_points must be at least 2".into()));
        }
        if matches!(self.trials, Some(0)) {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::Config(format!("bad tolerance {}", self.tolerance)));
        }
        Ok(())
    }

    pub fn pure_state(&self) -> Result<PureState> {
        let s = self
            .state
            .ok_or_else(|| Error::Config("missing `state`".into()))?;
        PureState::new(s)
    }

    pub fn axis(&self, name: &str) -> Result<BlochVector> {
        self.axes
            .get(name)
            .copied()
            .ok_or_else(|| Error::Config(format!("missing axis `{name}`")))
    }
}

fn checked_unit(label: &str, v: [f64; 3], warnings: &mut Vec<String>) -> Result<BlochVector> {
    let vec = BlochVector::from_array(v);
    let deviation = (vec.norm() - 1.0).abs();
    if deviation <= UNIT_TOLERANCE {
        Ok(vec)
    } else if deviation <= NORMALIZE_LIMIT {
        let msg = format!("{label} had |v| - 1 = {deviation:e}; normalized");
        log::warn!("{msg}");
        warnings.push(msg);
        vec.normalized()
    } else if label == "state" && vec.norm() < 1.0 {
        Err(Error::Config(format!(
            "state = {v:?} has |s| < 1: mixed states are unsupported, only pure states"
        )))
    } else {
        Err(Error::Config(format!(
            "{label} = {v:?} is not a unit vector (|v| - 1 = {deviation:e})"
        )))
    }
}

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub tolerance: Option<f64>,
    pub grid_points: Option<usize>,
    pub normalize_all_levels: bool,
}

impl RunOptions {
    pub fn apply(&self, config: &mut ScenarioConfig) -> Result<()> {
        if let Some(t) = self.tolerance {
            config.tolerance = t;
        }
        if let Some(g) = self.grid_points {
            config.grid_points = g;
        }
        if self.normalize_all_levels {
            config.normalization = Normalization::AllLevels;
        }
        config.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_route_agreement() {
        let c = ScenarioConfig::from_toml_str(
            "scenario = \"route_agreement\"\nstate = [0.0, 0.0, 1.0]\n[axes]\nn = [1.0, 0.0, 0.0]\nm = [0.0, 1.0, 0.0]\n",
        )
        .unwrap();
        assert_eq!(c.scenario, ScenarioKind::RouteAgreement);
        assert_eq!(c.axis("m").unwrap(), BlochVector::Y);
        assert_eq!(c.grid_points, DEFAULT_GRID_POINTS);
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn unknown_scenario() {
        let e = ScenarioConfig::from_toml_str("scenario = \"bogus\"").unwrap_err();
        assert_eq!(e, Error::UnknownScenario("bogus".into()));
    }

    #[test]
    fn missing_axis() {
        let e =
            ScenarioConfig::from_toml_str("scenario = \"sandwich\"\n[axes]\nn = [1.0, 0.0, 0.0]\n")
                .unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn slightly_off_unit_is_normalized_with_warning() {
        let c = ScenarioConfig::from_toml_str(
            "scenario = \"idempotence\"\nstate = [0.0, 0.0, 1.0000001]\n[axes]\nm = [1.0, 0.0, 0.0]\n",
        )
        .unwrap();
        assert_eq!(c.warnings.len(), 1);
        assert!((c.state.unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn far_from_unit_is_rejected() {
        let e = ScenarioConfig::from_toml_str(
            "scenario = \"idempotence\"\nstate = [0.0, 0.0, 1.001]\n[axes]\nm = [1.0, 0.0, 0.0]\n",
        )
        .unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn mixed_state_is_unsupported() {
        let e = ScenarioConfig::from_toml_str(
            "scenario = \"idempotence\"\nstate = [0.0, 0.0, 0.5]\n[axes]\nm = [1.0, 0.0, 0.0]\n",
        )
        .unwrap_err();
        assert!(e.to_string().contains("mixed states are unsupported"));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ScenarioConfig::from_toml_str("scenario = \"sweep\"\nseeds = 3\n").is_err());
    }

    #[test]
    fn options_override() {
        let mut c = ScenarioConfig::new(ScenarioKind::Sweep);
        RunOptions {
            tolerance: Some(1e-9),
            grid_points: Some(11),
            normalize_all_levels: true,
        }
        .apply(&mut c)
        .unwrap();
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(c.grid_points, 11);
        assert_eq!(c.normalization, Normalization::AllLevels);
        assert!(RunOptions {
            grid_points: Some(1),
            ..Default::default()
        }
        .apply(&mut c)
        .is_err());
    }
}
