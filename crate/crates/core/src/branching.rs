//! Branching hidden-variable spaces.
//!
//! Each projective measurement opens a fresh copy of `Λ`. Measuring `P_n` in
//! the running state splits the history into the selected branch, carrying
//! `X_n(ω_k)` on the new level, and the complement branch carrying
//! `1 - X_n(ω_k)`. The branch then continues from the prepared state `±n`, so
//! a history `B` then `A` is the product
//!
//! ```text
//! A_{ψ_B}(ω') · B_ψ(ω) / ∫ B_ψ(ω) dω
//! ```
//!
//! kept factored as a [`ProductFunction`]. Integrating `ω` first leaves the
//! state-update route, integrating `ω'` first leaves the operator-product route.

use serde::{Deserialize, Serialize};

use crate::bell::{bell_indicator, ValueAssignment};
use crate::error::{Error, Result};
use crate::interval::{ProductFunction, StepFunction};
use crate::qubit::{projector, BlochVector, PureState};
use crate::TRACE_CUTOFF;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The branch follows `B`.
    Selected,
    /// The branch follows `B̄ = 1 - B`.
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementStep {
    pub axis: BlochVector,
    pub outcome: Outcome,
}

impl MeasurementStep {
    pub fn selected(axis: BlochVector) -> Self {
        MeasurementStep {
            axis,
            outcome: Outcome::Selected,
        }
    }

    pub fn complement(axis: BlochVector) -> Self {
        MeasurementStep {
            axis,
            outcome: Outcome::Complement,
        }
    }
}

/// Which levels of a history get divided by their own integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Every level but the last, so the joint integral is the conditional
    /// probability of the final outcome given the history.
    #[default]
    AllButLast,
    /// Every level; the joint integral of a live history is then 1.
    AllLevels,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchNode {
    /// 1-based.
    pub level: usize,
    pub step: MeasurementStep,
    pub level_function: StepFunction,
    /// `∫ level_function dω`.
    pub normalizer: f64,
    /// Bloch vector `±axis` after this step.
    pub prepared_state: PureState,
}

impl BranchNode {
    pub fn is_vanishing(&self) -> bool {
        self.normalizer <= TRACE_CUTOFF
    }
}

/// A measurement history: one [`BranchNode`] per level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchHistory {
    pub initial_state: PureState,
    pub nodes: Vec<BranchNode>,
}

/// Flat per-level record for JSON dumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub level: usize,
    pub axis: [f64; 3],
    pub outcome: Outcome,
    pub normalizer: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    pub prepared_state: [f64; 3],
}

impl BranchHistory {
    pub fn new(initial_state: PureState) -> Self {
        BranchHistory {
            initial_state,
            nodes: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.nodes.len()
    }

    pub fn current_state(&self) -> PureState {
        self.nodes
            .last()
            .map(|n| n.prepared_state)
            .unwrap_or(self.initial_state)
    }

    /// True once any step along the history had zero probability.
    pub fn is_vanished(&self) -> bool {
        self.nodes.iter().any(BranchNode::is_vanishing)
    }

    /// Appends one measurement with a fixed outcome.
    pub fn extend(&self, step: MeasurementStep) -> Result<BranchHistory> {
        step.axis.require_unit()?;
        let current = self.current_state().bloch();
        let selected = bell_indicator(current, step.axis);
        let (level_function, prepared) = match step.outcome {
            Outcome::Selected => (selected, step.axis),
            Outcome::Complement => (selected.complement(), -step.axis),
        };
        let node = BranchNode {
            level: self.nodes.len() + 1,
            step,
            normalizer: level_function.integrate(),
            level_function,
            prepared_state: PureState::new(prepared)?,
        };
        let mut nodes = self.nodes.clone();
        nodes.push(node);
        Ok(BranchHistory {
            initial_state: self.initial_state,
            nodes,
        })
    }

    /// Probability of the whole outcome sequence: the product of the normalizers.
    pub fn probability(&self) -> f64 {
        if self.is_vanished() {
            return 0.0;
        }
        self.nodes.iter().map(|n| n.normalizer).product()
    }

    pub fn joint(&self, convention: Normalization) -> Result<ProductFunction> {
        joint_function(self, convention)
    }

    pub fn records(&self) -> Vec<NodeRecord> {
        self.nodes
            .iter()
            .map(|n| NodeRecord {
                level: n.level,
                axis: n.step.axis.to_array(),
                outcome: n.step.outcome,
                normalizer: n.normalizer,
                breakpoints: n.level_function.breakpoints().to_vec(),
                values: n.level_function.values().to_vec(),
                prepared_state: n.prepared_state.bloch().to_array(),
            })
            .collect()
    }
}

/// Splits `history` on a measurement of `P_axis` into (selected, complement).
///
/// A branch with zero probability is still returned; its last node has
/// normalizer 0 and it reports [`BranchHistory::is_vanished`].
pub fn branch(
    history: &BranchHistory,
    axis: BlochVector,
) -> Result<(BranchHistory, BranchHistory)> {
    Ok((
        history.extend(MeasurementStep::selected(axis))?,
        history.extend(MeasurementStep::complement(axis))?,
    ))
}

/// The joint dispersion-free function of a history: the product of its level
/// functions with prefactor `Π 1/normalizer` over the normalized levels.
/// A vanished history gets prefactor 0.
pub fn joint_function(
    history: &BranchHistory,
    convention: Normalization,
) -> Result<ProductFunction> {
    if history.nodes.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let normalized = match convention {
        Normalization::AllButLast => &history.nodes[..history.nodes.len() - 1],
        Normalization::AllLevels => &history.nodes[..],
    };
    let prefactor = if history.is_vanished() {
        0.0
    } else {
        normalized.iter().fold(1.0, |acc, n| acc / n.normalizer)
    };
    Ok(ProductFunction::new(
        history
            .nodes
            .iter()
            .map(|n| n.level_function.clone())
            .collect(),
        prefactor,
    ))
}

/// Result of integrating a joint function one level at a time.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedIntegral {
    pub value: f64,
    /// The partially integrated function after each step; the last one has no
    /// levels left.
    pub marginals: Vec<ProductFunction>,
    /// Original 1-based level numbers still present in each marginal.
    pub remaining_levels: Vec<Vec<usize>>,
}

/// Integrates the joint function level by level in `order` (1-based level
/// numbers, a permutation of `1..=depth`).
pub fn integrate_in_order(
    history: &BranchHistory,
    order: &[usize],
    convention: Normalization,
) -> Result<OrderedIntegral> {
    let joint = joint_function(history, convention)?;
    let depth = joint.levels();
    let mut seen = vec![false; depth];
    if order.len() != depth {
        return Err(Error::InvalidOrder(format!(
            "order has {} entries for {depth} levels",
            order.len()
        )));
    }
    for &level in order {
        if level == 0 || level > depth || seen[level - 1] {
            return Err(Error::InvalidOrder(format!(
                "{order:?} is not a permutation of 1..={depth}"
            )));
        }
        seen[level - 1] = true;
    }
    let mut remaining: Vec<usize> = (1..=depth).collect();
    let mut current = joint;
    let mut marginals = Vec::with_capacity(depth);
    let mut remaining_levels = Vec::with_capacity(depth);
    for &level in order {
        let idx = remaining.iter().position(|l| *l == level).unwrap();
        current = current.marginalize(idx)?;
        remaining.remove(idx);
        marginals.push(current.clone());
        remaining_levels.push(remaining.clone());
    }
    Ok(OrderedIntegral {
        value: current.prefactor(),
        marginals,
        remaining_levels,
    })
}

/// `A` measured `repetitions` times in a row, all outcomes selected.
pub fn repeated_measurements(
    psi: &PureState,
    axis: BlochVector,
    repetitions: usize,
) -> Result<BranchHistory> {
    let p = projector(axis)?;
    let trace = crate::qubit::expectation(psi, &p);
    if trace <= TRACE_CUTOFF {
        return Err(Error::ReductionUndefined { step: 0, trace });
    }
    let mut history = BranchHistory::new(*psi);
    for _ in 0..repetitions {
        history = history.extend(MeasurementStep::selected(axis))?;
    }
    Ok(history)
}

/// `A` then `A`: the second level's value map, which must be identically 1.
pub fn repeated_measurement_check(psi: &PureState, axis: BlochVector) -> Result<ValueAssignment> {
    let history = repeated_measurements(psi, axis, 2)?;
    let first = &history.nodes[0];
    let second = &history.nodes[1];
    Ok(ValueAssignment {
        state: first.prepared_state,
        observable: projector(axis)?,
        values: second.level_function.clone(),
    })
}

/// Probability of a sequence of outcomes: the product of per-step normalizers,
/// 0 if any step is impossible.
pub fn sequence_probability(initial: &PureState, steps: &[MeasurementStep]) -> Result<f64> {
    let mut history = BranchHistory::new(*initial);
    for step in steps {
        history = history.extend(*step)?;
        if history.is_vanished() {
            return Ok(0.0);
        }
    }
    Ok(history.probability())
}

/// All `2^k` leaves of the outcome tree for measuring `axes` in sequence.
pub fn outcome_tree(initial: &PureState, axes: &[BlochVector]) -> Result<Vec<BranchHistory>> {
    let mut leaves = vec![BranchHistory::new(*initial)];
    for axis in axes {
        let mut next = Vec::with_capacity(leaves.len() * 2);
        for leaf in &leaves {
            let (sel, comp) = branch(leaf, *axis)?;
            next.push(sel);
            next.push(comp);
        }
        leaves = next;
    }
    Ok(leaves)
}
