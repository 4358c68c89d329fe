//! Branching hidden-variable spaces: one fresh level per measurement.
//!
//! cargo run --example branching

use hvlab::branching::{
    integrate_in_order, outcome_tree, BranchHistory, MeasurementStep, Normalization,
};
use hvlab::qubit::{BlochVector, PureState};

fn main() -> hvlab::Result<()> {
    let psi = PureState::new(BlochVector::Z)?;
    let n = BlochVector::unit(0.6, 0.0, 0.8)?;
    let m = BlochVector::X;

    let history = BranchHistory::new(psi)
        .extend(MeasurementStep::selected(n))?
        .extend(MeasurementStep::selected(m))?;
    for order in [[1, 2], [2, 1]] {
        let r = integrate_in_order(&history, &order, Normalization::AllButLast)?;
        let left = &r.marginals[0];
        println!(
            "order {order:?}: after one level {:?} x {}, total {}",
            left.factors()[0].value_set(),
            left.prefactor(),
            r.value
        );
    }
    println!("(1 + n·m)/2 = {}", 0.5 * (1.0 + n.dot(m)));

    let leaves = outcome_tree(&psi, &[n, m, BlochVector::Y])?;
    let total: f64 = leaves.iter().map(BranchHistory::probability).sum();
    println!("{} leaves, total probability {total}", leaves.len());
    Ok(())
}
