//! `P_m` measured after `P_n`: the state-update route and the operator-product
//! route agree on average but not pointwise.
//!
//! cargo run --example conditional_routes

use hvlab::bell::{nonuniqueness_witness, route_operator_product, route_state_update};
use hvlab::qubit::{conditional_expectation, projector, BlochVector, PureState};

fn main() -> hvlab::Result<()> {
    let psi = PureState::new(BlochVector::Z)?;
    let (n, m) = (BlochVector::X, BlochVector::X);

    let a = route_state_update(n, m)?;
    let b = route_operator_product(&psi, n, m)?;
    let qm = conditional_expectation(&psi, &projector(m)?, &projector(n)?)?;
    println!(
        "route A values {:?}, integral {}",
        a.values.value_set(),
        a.integral()
    );
    println!(
        "route B values {:?}, integral {}",
        b.values.value_set(),
        b.integral()
    );
    println!("quantum conditional {qm}");

    let w = nonuniqueness_witness(&psi, n, m)?;
    println!("disagreement measure {}", w.measure);
    for s in &w.samples {
        println!(
            "  on ({:+.2}, {:+.2}): route A {} vs route B {}",
            s.omega_left, s.omega_right, s.lhs, s.rhs
        );
    }
    Ok(())
}
