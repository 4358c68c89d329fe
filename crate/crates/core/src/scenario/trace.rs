use std::path::{Path, PathBuf};

use super::config::ScenarioConfig;
use super::run::evaluate;
use crate::error::{Error, Result};
use crate::interval::{StepFunction, OMEGA_MAX, OMEGA_MIN};

/// Files written by [`emit_trace`], or a notice when the scenario has no step functions.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceOutput {
    pub files: Vec<PathBuf>,
    pub notice: Option<String>,
}

/// Sample points: `grid_points` evenly spaced over `[-½, ½]` plus every breakpoint.
pub fn sample_points(f: &StepFunction, grid_points: usize) -> Vec<f64> {
    let last = (grid_points.max(2) - 1) as f64;
    let mut pts: Vec<f64> = (0..grid_points.max(2))
        .map(|j| OMEGA_MIN + (OMEGA_MAX - OMEGA_MIN) * j as f64 / last)
        .chain(f.breakpoints().iter().copied())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `omega,value` CSV with 17 significant digits; values are right-continuous.
pub fn render_csv(f: &StepFunction, grid_points: usize) -> String {
    let mut out = String::from("omega,value\n");
    for w in sample_points(f, grid_points) {
        out.push_str(&format!("{:.16e},{:.16e}\n", w, f.eval(w)));
    }
    out
}

/// Re-integrates a trace exactly: each row's value holds until the next row,
/// which is exact because every breakpoint is a sample.
pub fn integrate_csv(text: &str) -> Result<f64> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let mut parts = line.split(',');
        let parse = |p: Option<&str>| -> Result<f64> {
            p.ok_or_else(|| Error::Validation(format!("line {}: missing column", i + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Validation(format!("line {}: {e}", i + 1)))
        };
        rows.push((parse(parts.next())?, parse(parts.next())?));
    }
    Ok(rows.windows(2).map(|w| w[0].1 * (w[1].0 - w[0].0)).sum())
}

/// Evaluates the scenario and writes one `<scenario>_<role>.csv` per step function into `out_dir`.
pub fn emit_trace(config: &ScenarioConfig, out_dir: &Path) -> Result<TraceOutput> {
    let eval = evaluate(config).map_err(|e| e.in_scenario(config.scenario.as_str()))?;
    if eval.traces.is_empty() {
        return Ok(TraceOutput {
            files: Vec::new(),
            notice: Some(format!(
                "scenario `{}` produces no step functions; no trace written",
                config.scenario
            )),
        });
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = Vec::with_capacity(eval.traces.len());
    for t in &eval.traces {
        let path = out_dir.join(format!("{}_{}.csv", config.scenario, t.role));
        std::fs::write(&path, render_csv(&t.function, config.grid_points))
            .map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    Ok(TraceOutput {
        files,
        notice: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakpoints_are_sampled() {
        let f = StepFunction::indicator(-0.123, 0.321).unwrap();
        let pts = sample_points(&f, 5);
        assert!(pts.contains(&-0.123) && pts.contains(&0.321));
        assert_eq!(pts.first(), Some(&-0.5));
        assert_eq!(pts.last(), Some(&0.5));
    }

    #[test]
    fn csv_reintegrates_exactly() {
        let f = StepFunction::indicator(-0.123, 0.321).unwrap().scale(1.7);
        let csv = render_csv(&f, 11);
        assert!(csv.starts_with("omega,value\n"));
        assert!((integrate_csv(&csv).unwrap() - f.integrate()).abs() < 1e-15);
    }

    #[test]
    fn malformed_csv() {
        assert!(integrate_csv("omega,value\n0.1\n").is_err());
        assert!(integrate_csv("omega,value\nx,1\n").is_err());
    }
}
