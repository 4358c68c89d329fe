//! Builds a scenario in code, runs it and prints the JSON report.
//!
//! cargo run --example scenario_runner

use hvlab::qubit::BlochVector;
use hvlab::scenario::{run_scenario, ScenarioConfig, ScenarioKind};

fn main() -> hvlab::Result<()> {
    let config = ScenarioConfig::new(ScenarioKind::ClassicalRule)
        .with_state(BlochVector::Z)
        .with_axis("n", BlochVector::X)
        .with_axis("m", BlochVector::Y);
    let report = run_scenario(&config)?;
    print!("{}", report.canonical_json());
    Ok(())
}
