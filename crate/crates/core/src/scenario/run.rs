use std::time::Instant;

use super::config::{ScenarioConfig, ScenarioKind, DEFAULT_SWEEP_TRIALS};
use super::report::{ReportBuilder, ScenarioReport};
use super::sweep::run_sweep_with_tolerance;
use crate::bell::{
    bell_value, bell_value_operator, classical_conditional, convex_sum, nonuniqueness_witness,
    route_operator_product, route_state_update, sum_conflict_witness,
};
use crate::branching::{
    integrate_in_order, repeated_measurements, sequence_probability, BranchHistory,
    MeasurementStep, Normalization,
};
use crate::error::Result;
use crate::interval::StepFunction;
use crate::qubit::{
    chain_probability, conditional_expectation, expectation, projector, reduce, sandwich, PureState,
};
use crate::COLLINEAR_TOLERANCE;

/// A step function a scenario produced, tagged with its role for trace output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub role: String,
    pub function: StepFunction,
}

pub(crate) struct Evaluation {
    pub builder: ReportBuilder,
    pub traces: Vec<Trace>,
}

fn trace(role: &str, function: StepFunction) -> Trace {
    Trace {
        role: role.into(),
        function,
    }
}

/// Largest `|f(ω) - g(ω)|` over `Λ`.
fn sup_distance(f: &StepFunction, g: &StepFunction) -> f64 {
    f.sub(g)
        .values()
        .iter()
        .fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Runs one scenario and compares its hidden-variable numbers with the quantum oracle.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let start = Instant::now();
    let eval = evaluate(config).map_err(|e| e.in_scenario(config.scenario.as_str()))?;
    let ms = start.elapsed().as_millis() as u64;
    Ok(eval.builder.finish(config, ms))
}

pub(crate) fn evaluate(config: &ScenarioConfig) -> Result<Evaluation> {
    config.validate()?;
    match config.scenario {
        ScenarioKind::MeasureReproduction => measure_reproduction(config),
        ScenarioKind::Sandwich => sandwich_identity(config),
        ScenarioKind::RouteAgreement => route_agreement(config),
        ScenarioKind::Nonuniqueness => nonuniqueness(config),
        ScenarioKind::ClassicalRule => classical_rule(config),
        ScenarioKind::SumConflict => sum_conflict(config),
        ScenarioKind::BranchingChain => branching_chain(config),
        ScenarioKind::Idempotence => idempotence(config),
        ScenarioKind::Sweep => sweep(config),
    }
}

fn measure_reproduction(config: &ScenarioConfig) -> Result<Evaluation> {
    let psi = config.pure_state()?;
    let m = config.axis("m")?;
    let value = bell_value(&psi, m)?;
    let opposite = bell_value(&psi, -m)?;
    let mut b = ReportBuilder::default();
    b.hv("integral", value.integral())
        .qm("expectation", expectation(&psi, &projector(m)?))
        .compare("integral", "expectation");
    b.check(
        "dispersion_free",
        value.values.is_indicator(),
        format!("values {:?}", value.values.value_set()),
    );
    let sum = value.values.add(&opposite.values);
    b.check(
        "completeness",
        sum == StepFunction::one(),
        "X_m(ω) + X_-m(ω) = 1 for every ω",
    );
    Ok(Evaluation {
        builder: b,
        traces: vec![
            trace("value_map", value.values),
            trace("opposite", opposite.values),
        ],
    })
}

fn sandwich_identity(config: &ScenarioConfig) -> Result<Evaluation> {
    let n = config.axis("n")?;
    let m = config.axis("m")?;
    let (pn, pm) = (projector(n)?, projector(m)?);
    let expected = 0.5 * (1.0 + n.dot(m));
    let mut b = ReportBuilder::default();
    for (label, outer, inner, target) in [
        ("bab_over_pn", &pn, &pm, &pn),
        ("aba_over_pm", &pm, &pn, &pm),
    ] {
        let prod = sandwich(outer, inner)?;
        let scaled = *target * expected;
        let residual = prod.max_abs_diff(&scaled);
        b.hv(label, prod.a / target.a);
        b.check(
            &format!("{label}_proportional"),
            residual <= config.tolerance,
            format!("max |BAB - c P| = {residual:e}"),
        );
    }
    b.qm("closed_form", expected)
        .compare("bab_over_pn", "closed_form")
        .compare("aba_over_pm", "closed_form");
    b.note("no step functions in this scenario");
    Ok(Evaluation {
        builder: b,
        traces: Vec::new(),
    })
}

struct Routes {
    psi: PureState,
    a: StepFunction,
    b: StepFunction,
}

fn routes(config: &ScenarioConfig, b: &mut ReportBuilder) -> Result<Routes> {
    let psi = config.pure_state()?;
    let n = config.axis("n")?;
    let m = config.axis("m")?;
    let route_a = route_state_update(n, m)?;
    let route_b = route_operator_product(&psi, n, m)?;
    let qm = conditional_expectation(&psi, &projector(m)?, &projector(n)?)?;
    b.hv("route_a_integral", route_a.integral())
        .hv("route_b_integral", route_b.integral())
        .qm("conditional_expectation", qm)
        .qm("closed_form", 0.5 * (1.0 + n.dot(m)))
        .compare("route_a_integral", "conditional_expectation")
        .compare("route_b_integral", "conditional_expectation")
        .compare("route_a_integral", "closed_form");
    b.check(
        "route_a_dispersion_free",
        route_a.values.is_indicator(),
        format!("values {:?}", route_a.values.value_set()),
    )
    .check(
        "route_b_spectrum",
        route_b.respects_spectrum(1e-12),
        format!("values {:?}", route_b.values.value_set()),
    );
    Ok(Routes {
        psi,
        a: route_a.values,
        b: route_b.values,
    })
}

fn route_agreement(config: &ScenarioConfig) -> Result<Evaluation> {
    let mut b = ReportBuilder::default();
    let r = routes(config, &mut b)?;
    let diff = r.a.sub(&r.b);
    b.hv("difference_integral", diff.integrate());
    Ok(Evaluation {
        builder: b,
        traces: vec![
            trace("route_a", r.a),
            trace("route_b", r.b),
            trace("difference", diff),
        ],
    })
}

fn nonuniqueness(config: &ScenarioConfig) -> Result<Evaluation> {
    let mut b = ReportBuilder::default();
    let r = routes(config, &mut b)?;
    let w = nonuniqueness_witness(&r.psi, config.axis("n")?, config.axis("m")?)?;
    b.hv("witness_measure", w.measure);
    b.check(
        "witness_consistent",
        w.measure == w.omega_region.integrate() && (w.measure > 0.0) == (r.a != r.b),
        format!("measure {} on {} segment(s)", w.measure, w.samples.len()),
    );
    if w.is_conflict() {
        b.note(format!(
            "conflict: the two representations differ on a set of measure {}",
            w.measure
        ));
    } else {
        b.note("degenerate agreement: the two representations coincide identically");
    }
    b.witness("route_a vs route_b", &w);
    let diff = r.a.sub(&r.b);
    Ok(Evaluation {
        builder: b,
        traces: vec![
            trace("route_a", r.a),
            trace("route_b", r.b),
            trace("difference", diff),
        ],
    })
}

fn classical_rule(config: &ScenarioConfig) -> Result<Evaluation> {
    let psi = config.pure_state()?;
    let n = config.axis("n")?;
    let m = config.axis("m")?;
    let a = bell_value(&psi, m)?;
    let bv = bell_value(&psi, n)?;
    let both = a.values.mul(&bv.values);
    let classical = classical_conditional(&psi, m, n)?;
    let quantum = conditional_expectation(&psi, &projector(m)?, &projector(n)?)?;
    let mut b = ReportBuilder::default();
    b.hv("mu_a", a.integral())
        .hv("mu_b", bv.integral())
        .hv("mu_a_and_b", both.integrate())
        .hv("classical_conditional", classical)
        .qm("tr_rho_a", a.expectation())
        .qm("tr_rho_b", bv.expectation())
        .qm("quantum_conditional", quantum)
        .compare("mu_a", "tr_rho_a")
        .compare("mu_b", "tr_rho_b");
    let gap = (classical - quantum).abs();
    let commuting = n.cross(m).norm() <= COLLINEAR_TOLERANCE;
    if commuting {
        b.check(
            "commuting_case_agrees",
            gap <= config.tolerance,
            format!("|classical - quantum| = {gap:e} for m = ±n"),
        );
    } else if gap > config.tolerance {
        b.note(format!(
            "classical conditional rule violated: {classical} vs quantum {quantum} (|difference| = {gap})"
        ));
    } else {
        b.note("classical and quantum conditionals coincide for these inputs");
    }
    b.hv("violation", gap);
    Ok(Evaluation {
        builder: b,
        traces: vec![
            trace("a", a.values),
            trace("b", bv.values),
            trace("intersection", both),
        ],
    })
}

fn sum_conflict(config: &ScenarioConfig) -> Result<Evaluation> {
    let psi = config.pure_state()?;
    let n = config.axis("n")?;
    let m = config.axis("m")?;
    let lambda = config.lambda.unwrap_or(0.5);
    let sc = sum_conflict_witness(&psi, n, m, lambda)?;
    let e = convex_sum(n, m, lambda)?;
    let (pn, pm) = (projector(n)?, projector(m)?);
    let mut b = ReportBuilder::default();
    b.hv("lhs_integral", sc.lhs.integral())
        .hv("rhs_integral", sc.rhs.integrate())
        .hv("witness_measure", sc.witness.measure)
        .hv("both_zero_measure", sc.both_zero.integrate())
        .hv("both_one_measure", sc.both_one.integrate())
        .qm("expectation_e", expectation(&psi, &e))
        .qm(
            "convex_expectation",
            lambda * expectation(&psi, &pn) + (1.0 - lambda) * expectation(&psi, &pm),
        )
        .compare("lhs_integral", "expectation_e")
        .compare("rhs_integral", "convex_expectation")
        .compare("lhs_integral", "convex_expectation");
    let outside = sc.witness.omega_region.complement();
    let missed_zero = sc.both_zero.mul(&outside).integrate();
    let missed_one = sc.both_one.mul(&outside).integrate();
    b.check(
        "witness_covers_both_zero",
        missed_zero == 0.0,
        format!("both-zero measure outside witness: {missed_zero}"),
    )
    .check(
        "witness_covers_both_one",
        missed_one == 0.0,
        format!("both-one measure outside witness: {missed_one}"),
    )
    .check(
        "positive_witness",
        sc.witness.is_conflict(),
        format!("witness measure {}", sc.witness.measure),
    )
    .check(
        "lhs_dispersion_free",
        sc.lhs.respects_spectrum(config.tolerance),
        format!("values {:?}", sc.lhs.values.value_set()),
    );
    b.witness("E(ω) vs λX_n(ω) + (1-λ)X_m(ω)", &sc.witness);
    let diff = sc.lhs.values.sub(&sc.rhs);
    Ok(Evaluation {
        builder: b,
        traces: vec![
            trace("lhs", sc.lhs.values),
            trace("rhs", sc.rhs),
            trace("difference", diff),
        ],
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=k).collect(), &mut out);
    out
}

pub(crate) fn all_orders(k: usize) -> Vec<Vec<usize>> {
    permutations(k)
}

fn branching_chain(config: &ScenarioConfig) -> Result<Evaluation> {
    let psi = config.pure_state()?;
    let mut axes = vec![config.axis("n")?, config.axis("m")?];
    if let Ok(c) = config.axis("c") {
        axes.push(c);
    }
    let steps: Vec<MeasurementStep> = axes.iter().map(|a| MeasurementStep::selected(*a)).collect();
    let mut history = BranchHistory::new(psi);
    for s in &steps {
        history = history.extend(*s)?;
    }
    let projectors = axes
        .iter()
        .map(|a| projector(*a))
        .collect::<Result<Vec<_>>>()?;
    let k = axes.len();
    // state just before the last two measurements
    let mut before = psi;
    for p in &projectors[..k - 2] {
        before = reduce(&before, p)?;
    }
    let conditional = conditional_expectation(&before, &projectors[k - 1], &projectors[k - 2])?;
    let target = match config.normalization {
        Normalization::AllButLast => conditional,
        Normalization::AllLevels => 1.0,
    };
    let mut b = ReportBuilder::default();
    b.qm("last_outcome_conditional", conditional)
        .qm("joint_target", target)
        .qm("chain_probability", chain_probability(&psi, &projectors)?);
    for order in permutations(k) {
        let name = format!(
            "joint_integral_order_{}",
            order
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join("_")
        );
        let r = integrate_in_order(&history, &order, config.normalization)?;
        b.hv(&name, r.value).compare(&name, "joint_target");
    }
    b.hv("sequence_probability", sequence_probability(&psi, &steps)?)
        .compare("sequence_probability", "chain_probability");

    if k == 2 && config.normalization == Normalization::AllButLast {
        let omega_first = integrate_in_order(&history, &[1, 2], config.normalization)?;
        let prime_first = integrate_in_order(&history, &[2, 1], config.normalization)?;
        let marginal_a = &omega_first.marginals[0];
        let marginal_b = &prime_first.marginals[0];
        let as_a = marginal_a.factors()[0].scale(marginal_a.prefactor());
        let as_b = marginal_b.factors()[0].scale(marginal_b.prefactor());
        let route_a = route_state_update(axes[0], axes[1])?.values;
        let route_b = route_operator_product(&psi, axes[0], axes[1])?.values;
        let da = sup_distance(&as_a, &route_a);
        let db = sup_distance(&as_b, &route_b);
        b.check(
            "omega_first_leaves_state_update_route",
            da <= config.tolerance,
            format!("sup |marginal - route A| = {da:e}"),
        )
        .check(
            "omega_prime_first_leaves_operator_product_route",
            db <= config.tolerance,
            format!("sup |marginal - route B| = {db:e}"),
        );
    }
    b.check(
        "prepared_states_follow_axes",
        history
            .nodes
            .iter()
            .zip(&axes)
            .all(|(node, a)| node.prepared_state.bloch() == *a),
        "each selected level prepares the state along its axis",
    );
    b.branch_history = Some(history.records());
    let traces = history
        .nodes
        .iter()
        .map(|n| trace(&format!("level_{}", n.level), n.level_function.clone()))
        .collect();
    Ok(Evaluation { builder: b, traces })
}

fn idempotence(config: &ScenarioConfig) -> Result<Evaluation> {
    let psi = config.pure_state()?;
    let axis = config.axis("m")?;
    let history = repeated_measurements(&psi, axis, 4)?;
    let prepared = history.nodes[0].prepared_state;
    let mut b = ReportBuilder::default();
    b.hv(
        "level_2_integral",
        history.nodes[1].level_function.integrate(),
    )
    .qm(
        "repeat_expectation",
        expectation(&prepared, &projector(axis)?),
    )
    .compare("level_2_integral", "repeat_expectation");
    for node in &history.nodes[1..] {
        b.check(
            &format!("level_{}_constant_one", node.level),
            node.level_function == StepFunction::one(),
            format!("values {:?}", node.level_function.values()),
        );
    }
    let general = bell_value_operator(&prepared, &projector(axis)?)?;
    b.check(
        "prepared_state_is_eigenstate",
        general.values == StepFunction::one(),
        "the prepared state assigns 1 to A everywhere",
    );
    b.branch_history = Some(history.records());
    let traces = history.nodes[..2]
        .iter()
        .map(|n| trace(&format!("level_{}", n.level), n.level_function.clone()))
        .collect();
    Ok(Evaluation { builder: b, traces })
}

fn sweep(config: &ScenarioConfig) -> Result<Evaluation> {
    let seed = config.seed.unwrap_or(0);
    let trials = config.trials.unwrap_or(DEFAULT_SWEEP_TRIALS);
    let report = run_sweep_with_tolerance(seed, trials, config.tolerance);
    let mut b = ReportBuilder::default();
    for c in &report.checks {
        b.check(
            &c.name,
            c.pass,
            format!(
                "{} trials, {} failures, worst error {:e}",
                c.trials, c.failures, c.worst_error
            ),
        );
    }
    b.sweep = Some(report);
    Ok(Evaluation {
        builder: b,
        traces: Vec::new(),
    })
}
