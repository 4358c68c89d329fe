//! Value map of `E = λP_n + (1-λ)P_m` against `λX_n + (1-λ)X_m`.
//!
//! cargo run --example sum_conflict

use hvlab::bell::sum_conflict_witness;
use hvlab::qubit::{BlochVector, PureState};

fn main() -> hvlab::Result<()> {
    let psi = PureState::new(BlochVector::unit(-0.6, 0.0, -0.8)?)?;
    let c = sum_conflict_witness(&psi, BlochVector::X, BlochVector::Z, 0.5)?;
    println!("E eigenvalues {:?}", c.lhs.observable.eigenvalues());
    println!("E value map      {:?}", c.lhs.values.value_set());
    println!("combined values  {:?}", c.rhs.value_set());
    println!("both projectors 0 on measure {}", c.both_zero.integrate());
    println!("disagreement measure {}", c.witness.measure);
    println!("integrals {} vs {}", c.lhs.integral(), c.rhs.integrate());
    Ok(())
}
