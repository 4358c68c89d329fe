//! The dispersion-free value map of `P_m` in state `s`, and its integral.
//!
//! cargo run --example value_map

use hvlab::bell::bell_value;
use hvlab::qubit::{BlochVector, PureState};

fn main() -> hvlab::Result<()> {
    let psi = PureState::new(BlochVector::unit(0.0, 0.6, 0.8)?)?;
    for m in [
        BlochVector::Z,
        BlochVector::X,
        BlochVector::unit(0.0, -0.6, -0.8)?,
    ] {
        let v = bell_value(&psi, m)?;
        println!("m = {:?}", m.to_array());
        for seg in v.values.segments() {
            println!("  ({:+.3}, {:+.3})  ->  {}", seg.left, seg.right, seg.value);
        }
        println!(
            "  integral {:.6}, expected (1 + s·m)/2 = {:.6}",
            v.integral(),
            v.expectation()
        );
    }
    Ok(())
}
