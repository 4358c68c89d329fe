//! Randomized property sweeps over seeded unit vectors.
//!
//! Every check draws from its own ChaCha stream, so a check's inputs depend
//! only on `(seed, check)` and the sweep is reproducible regardless of how
//! the checks are scheduled.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::DEFAULT_TOLERANCE;
use super::run::all_orders;
use crate::bell::{
    bell_value, bell_value_operator, classical_conditional, nonuniqueness_witness,
    route_operator_product, route_state_update, sum_conflict_witness,
};
use crate::branching::{
    integrate_in_order, outcome_tree, repeated_measurements, BranchHistory, MeasurementStep,
    Normalization,
};
use crate::interval::StepFunction;
use crate::montecarlo::{random_unit_vector, seeded_rng};
use crate::qubit::{
    conditional_expectation, expectation, projector, reduce, sandwich, BlochVector, HermitianOp,
    PureState,
};

/// Keep at most this many failing inputs per check.
const MAX_EXAMPLES: usize = 5;
/// Minimum fraction of generic triples whose two routes must disagree on a positive-measure set.
pub const NONUNIQUENESS_FRACTION: f64 = 0.99;
/// Classical-rule violations larger than this must occur somewhere in the sweep.
pub const VIOLATION_THRESHOLD: f64 = 0.1;
/// Inputs within this of a degenerate configuration are skipped by checks that exclude them.
pub const ADMISSIBLE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailingCase {
    pub trial: usize,
    pub vectors: Vec<[f64; 3]>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCheck {
    pub name: String,
    /// Trials that met the check's preconditions.
    pub trials: usize,
    pub failures: usize,
    pub worst_error: f64,
    /// An aggregate statistic, for checks judged on one (fraction, max violation).
    pub statistic: Option<f64>,
    pub threshold: Option<f64>,
    pub pass: bool,
    pub failing_examples: Vec<FailingCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub checks: Vec<SweepCheck>,
    pub pass: bool,
}

impl SweepReport {
    pub fn check(&self, name: &str) -> Option<&SweepCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tally {
    name: &'static str,
    tol: f64,
    trials: usize,
    failures: usize,
    worst: f64,
    examples: Vec<FailingCase>,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Tally {
            name,
            tol,
            trials: 0,
            failures: 0,
            worst: 0.0,
            examples: Vec::new(),
        }
    }

    fn fail(&mut self, trial: usize, vectors: &[BlochVector], detail: String) {
        self.failures += 1;
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(FailingCase {
                trial,
                vectors: vectors.iter().map(|v| v.to_array()).collect(),
                detail,
            });
        }
    }

    /// Records one error; counts it as a failure above tolerance.
    fn error(&mut self, trial: usize, vectors: &[BlochVector], err: f64) {
        self.trials += 1;
        if !(err <= self.worst) {
            self.worst = err;
        }
        if !(err <= self.tol) {
            self.fail(trial, vectors, format!("error {err:e}"));
        }
    }

    fn flag(
        &mut self,
        trial: usize,
        vectors: &[BlochVector],
        ok: bool,
        detail: impl FnOnce() -> String,
    ) {
        self.trials += 1;
        if !ok {
            self.fail(trial, vectors, detail());
        }
    }

    fn finish(self) -> SweepCheck {
        SweepCheck {
            name: self.name.into(),
            trials: self.trials,
            failures: self.failures,
            worst_error: self.worst,
            statistic: None,
            threshold: None,
            pass: self.failures == 0,
            failing_examples: self.examples,
        }
    }
}

fn state(v: BlochVector) -> PureState {
    PureState::new(v).expect("sampled vectors are unit")
}

fn rv(rng: &mut ChaCha8Rng) -> BlochVector {
    random_unit_vector(rng)
}

type CheckFn = fn(u64, usize, f64) -> SweepCheck;

const CHECKS: [(&str, CheckFn); 12] = [
    ("measure_reproduction", check_measure_reproduction),
    ("completeness", check_completeness),
    ("spectrum", check_spectrum),
    ("sandwich", check_sandwich),
    ("route_agreement", check_route_agreement),
    ("nonuniqueness", check_nonuniqueness),
    ("classical_rule", check_classical_rule),
    ("sum_conflict", check_sum_conflict),
    ("order_independence", check_order_independence),
    ("idempotence", check_idempotence),
    ("branch_completeness", check_branch_completeness),
    ("probability_conservation", check_probability_conservation),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

/// Runs every invariant check over `trials` seeded random inputs.
pub fn run_sweep(seed: u64, trials: usize) -> SweepReport {
    run_sweep_with_tolerance(seed, trials, DEFAULT_TOLERANCE)
}

pub fn run_sweep_with_tolerance(seed: u64, trials: usize, tolerance: f64) -> SweepReport {
    let checks: Vec<SweepCheck> = CHECKS
        .par_iter()
        .map(|(_, f)| f(seed, trials, tolerance))
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    SweepReport {
        seed,
        trials,
        tolerance,
        checks,
        pass,
    }
}

/// Runs one named check.
pub fn run_check(name: &str, seed: u64, trials: usize, tolerance: f64) -> Option<SweepCheck> {
    CHECKS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f(seed, trials, tolerance))
}

fn check_measure_reproduction(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 1);
    let mut t = Tally::new("measure_reproduction", tol);
    for i in 0..trials {
        let (s, m) = (rv(&mut rng), rv(&mut rng));
        let v = bell_value(&state(s), m).unwrap();
        t.error(i, &[s, m], (v.integral() - 0.5 * (1.0 + s.dot(m))).abs());
    }
    t.finish()
}

fn check_completeness(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 2);
    let mut t = Tally::new("completeness", tol);
    for i in 0..trials {
        let (s, m) = (rv(&mut rng), rv(&mut rng));
        // include the s ⟂ m slice, where the sign convention matters
        let m = if i % 10 == 0 {
            s.cross(m).normalized().unwrap()
        } else {
            m
        };
        let psi = state(s);
        let sum = bell_value(&psi, m)
            .unwrap()
            .values
            .add(&bell_value(&psi, -m).unwrap().values);
        t.flag(i, &[s, m], sum == StepFunction::one(), || {
            format!("X_m + X_-m = {sum:?}")
        });
    }
    t.finish()
}

fn check_spectrum(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 3);
    let mut t = Tally::new("spectrum", tol);
    for i in 0..trials {
        let (s, n, m) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
        let lambda: f64 = rng.random_range(0.01..0.99);
        let psi = state(s);
        let e = projector(n).unwrap() * lambda + projector(m).unwrap() * (1.0 - lambda);
        let shifted = HermitianOp::new(rng.random_range(-1.0..1.0), n * rng.random_range(0.0..2.0));
        let mut ok = bell_value(&psi, m).unwrap().values.is_indicator();
        let mut worst: f64 = 0.0;
        for op in [e, shifted] {
            let v = bell_value_operator(&psi, &op).unwrap();
            ok &= v.respects_spectrum(tol);
            // exact eigenvalue check at every breakpoint and on an ω grid
            let (lo, hi) = op.eigenvalues();
            let points = v
                .values
                .breakpoints()
                .iter()
                .copied()
                .chain((0..=100).map(|j| -0.5 + j as f64 / 100.0));
            ok &= points
                .map(|w| v.values.eval(w))
                .all(|x| (x - lo).abs() <= tol || (x - hi).abs() <= tol);
            worst = worst.max((v.integral() - v.expectation()).abs());
        }
        t.error(i, &[s, n, m], worst);
        if !ok {
            t.fail(i, &[s, n, m], "value outside the spectrum".into());
        }
    }
    t.finish()
}

fn check_sandwich(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 4);
    let mut t = Tally::new("sandwich", tol);
    for i in 0..trials {
        let (n, m) = (rv(&mut rng), rv(&mut rng));
        let (pn, pm) = (projector(n).unwrap(), projector(m).unwrap());
        let c = 0.5 * (1.0 + n.dot(m));
        let e1 = sandwich(&pn, &pm).unwrap().max_abs_diff(&(pn * c));
        let e2 = sandwich(&pm, &pn).unwrap().max_abs_diff(&(pm * c));
        t.error(i, &[n, m], e1.max(e2));
    }
    t.finish()
}

fn check_route_agreement(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 5);
    let mut t = Tally::new("route_agreement", tol);
    let mut i = 0;
    while t.trials < trials {
        let (s, n, m) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
        i += 1;
        if 1.0 + n.dot(s) <= ADMISSIBLE_MARGIN {
            continue;
        }
        let psi = state(s);
        let expect = 0.5 * (1.0 + n.dot(m));
        let a = route_state_update(n, m).unwrap().integral();
        let b = route_operator_product(&psi, n, m).unwrap().integral();
        let q =
            conditional_expectation(&psi, &projector(m).unwrap(), &projector(n).unwrap()).unwrap();
        let err = [a, b, q]
            .iter()
            .map(|x| (x - expect).abs())
            .fold(0.0, f64::max);
        t.error(i, &[s, n, m], err);
    }
    t.finish()
}

fn check_nonuniqueness(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 6);
    let mut t = Tally::new("nonuniqueness", tol);
    let mut positive = 0usize;
    let mut i = 0;
    while t.trials < trials {
        let (s, n, m) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
        i += 1;
        if n.dot(m).abs() >= 1.0 - ADMISSIBLE_MARGIN || n.dot(s).abs() >= 1.0 - ADMISSIBLE_MARGIN {
            continue;
        }
        let psi = state(s);
        let w = nonuniqueness_witness(&psi, n, m).unwrap();
        let identical = route_state_update(n, m).unwrap().values
            == route_operator_product(&psi, n, m).unwrap().values;
        if w.measure > 0.0 {
            positive += 1;
        }
        t.flag(i, &[s, n, m], (w.measure > 0.0) != identical, || {
            format!("witness measure {} but identical = {identical}", w.measure)
        });
    }
    let fraction = positive as f64 / t.trials as f64;
    let mut c = t.finish();
    c.statistic = Some(fraction);
    c.threshold = Some(NONUNIQUENESS_FRACTION);
    c.pass &= fraction >= NONUNIQUENESS_FRACTION;
    c
}

fn check_classical_rule(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 7);
    let mut t = Tally::new("classical_rule", tol);
    let mut max_violation: f64 = 0.0;
    for i in 0..trials {
        let (s, n, m) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
        let psi = state(s);
        if 1.0 + s.dot(n) <= ADMISSIBLE_MARGIN {
            continue;
        }
        let quantum = 0.5 * (1.0 + n.dot(m));
        let classical = classical_conditional(&psi, m, n).unwrap();
        max_violation = max_violation.max((classical - quantum).abs());
        // commuting cases must agree
        for (axis, q) in [(n, 1.0), (-n, 0.0)] {
            let c = classical_conditional(&psi, axis, n).unwrap();
            t.error(i, &[s, n, axis], (c - q).abs());
        }
    }
    let mut c = t.finish();
    c.statistic = Some(max_violation);
    c.threshold = Some(VIOLATION_THRESHOLD);
    c.pass &= max_violation > VIOLATION_THRESHOLD;
    c
}

fn check_sum_conflict(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 8);
    let mut t = Tally::new("sum_conflict", tol);
    let mut i = 0;
    while t.trials < trials {
        let (s, n, m) = (rv(&mut rng), rv(&mut rng), rv(&mut rng));
        let lambda: f64 = rng.random_range(0.01..0.99);
        i += 1;
        if n.cross(m).norm() <= ADMISSIBLE_MARGIN {
            continue;
        }
        let psi = state(s);
        let sc = sum_conflict_witness(&psi, n, m, lambda).unwrap();
        let convex = lambda * expectation(&psi, &projector(n).unwrap())
            + (1.0 - lambda) * expectation(&psi, &projector(m).unwrap());
        let err = (sc.lhs.integral() - convex)
            .abs()
            .max((sc.rhs.integrate() - convex).abs());
        t.error(i, &[s, n, m], err);
        let outside = sc.witness.omega_region.complement();
        let covered = sc.both_zero.mul(&outside).integrate() == 0.0
            && sc.both_one.mul(&outside).integrate() == 0.0;
        if !covered {
            t.fail(
                i,
                &[s, n, m],
                "witness misses a both-0 or both-1 region".into(),
            );
        }
    }
    t.finish()
}

fn quantum_conditional_of_last(psi: &PureState, axes: &[BlochVector]) -> f64 {
    let k = axes.len();
    if k == 1 {
        return expectation(psi, &projector(axes[0]).unwrap());
    }
    let mut before = *psi;
    for a in &axes[..k - 2] {
        before = reduce(&before, &projector(*a).unwrap()).unwrap();
    }
    conditional_expectation(
        &before,
        &projector(axes[k - 1]).unwrap(),
        &projector(axes[k - 2]).unwrap(),
    )
    .unwrap()
}

fn check_order_independence(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 9);
    let mut t = Tally::new("order_independence", tol);
    let mut i = 0;
    while t.trials < trials {
        let k = 2 + i % 2;
        i += 1;
        let s = rv(&mut rng);
        let axes: Vec<BlochVector> = (0..k).map(|_| rv(&mut rng)).collect();
        let mut cur = s;
        let mut admissible = true;
        for a in &axes {
            admissible &= 1.0 + cur.dot(*a) > ADMISSIBLE_MARGIN;
            cur = *a;
        }
        if !admissible {
            continue;
        }
        let mut h = BranchHistory::new(state(s));
        for a in &axes {
            h = h.extend(MeasurementStep::selected(*a)).unwrap();
        }
        let expect = quantum_conditional_of_last(&state(s), &axes);
        let err = all_orders(k)
            .iter()
            .map(|o| {
                integrate_in_order(&h, o, Normalization::AllButLast)
                    .unwrap()
                    .value
            })
            .map(|v| (v - expect).abs())
            .fold(0.0, f64::max);
        let mut vectors = vec![s];
        vectors.extend(&axes);
        t.error(i, &vectors, err);
    }
    t.finish()
}

fn check_idempotence(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 10);
    let mut t = Tally::new("idempotence", tol);
    let mut i = 0;
    while t.trials < trials {
        let (s, a) = (rv(&mut rng), rv(&mut rng));
        i += 1;
        if 1.0 + s.dot(a) <= ADMISSIBLE_MARGIN {
            continue;
        }
        let h = repeated_measurements(&state(s), a, 4).unwrap();
        let ok = h.nodes[1..]
            .iter()
            .all(|n| n.level_function == StepFunction::one());
        t.flag(i, &[s, a], ok, || {
            "a repeated level is not identically 1".into()
        });
    }
    t.finish()
}

fn check_branch_completeness(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 11);
    let mut t = Tally::new("branch_completeness", tol);
    for i in 0..trials {
        let (s, a) = (rv(&mut rng), rv(&mut rng));
        let h = BranchHistory::new(state(s));
        let sel = h.extend(MeasurementStep::selected(a)).unwrap();
        let comp = h.extend(MeasurementStep::complement(a)).unwrap();
        let total = sel.nodes[0].normalizer + comp.nodes[0].normalizer;
        t.error(i, &[s, a], (total - 1.0).abs());
    }
    t.finish()
}

fn check_probability_conservation(seed: u64, trials: usize, tol: f64) -> SweepCheck {
    let mut rng = seeded_rng(seed, 12);
    let mut t = Tally::new("probability_conservation", tol);
    for i in 0..trials {
        let depth = 1 + i % 4;
        let s = rv(&mut rng);
        let axes: Vec<BlochVector> = (0..depth).map(|_| rv(&mut rng)).collect();
        let leaves = outcome_tree(&state(s), &axes).unwrap();
        let total: f64 = leaves.iter().map(BranchHistory::probability).sum();
        let mut vectors = vec![s];
        vectors.extend(&axes);
        t.error(i, &vectors, (total - 1.0).abs());
    }
    t.finish()
}
