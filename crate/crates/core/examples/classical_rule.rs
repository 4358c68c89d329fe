//! The classical conditional `μ[a ∩ b]/μ[b]` against the quantum value.
//!
//! cargo run --example classical_rule

use hvlab::bell::classical_conditional;
use hvlab::qubit::{conditional_expectation, projector, BlochVector, PureState};

fn main() -> hvlab::Result<()> {
    let psi = PureState::new(BlochVector::Z)?;
    let n = BlochVector::X;
    for m in [BlochVector::Y, n, -n] {
        let classical = classical_conditional(&psi, m, n)?;
        let quantum = conditional_expectation(&psi, &projector(m)?, &projector(n)?)?;
        println!(
            "m = {:?}: classical {classical}, quantum {quantum}, gap {}",
            m.to_array(),
            (classical - quantum).abs()
        );
    }
    Ok(())
}
