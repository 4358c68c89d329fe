//! Seeded Monte Carlo estimates next to the exact segment sums.
//!
//! cargo run --release --example monte_carlo

use hvlab::bell::bell_value;
use hvlab::montecarlo::{estimate_step, random_unit_vector, seeded_rng};
use hvlab::qubit::PureState;

fn main() -> hvlab::Result<()> {
    let mut rng = seeded_rng(42, 0);
    for _ in 0..5 {
        let (s, m) = (random_unit_vector(&mut rng), random_unit_vector(&mut rng));
        let v = bell_value(&PureState::new(s)?, m)?;
        let e = estimate_step(&v.values, 1_000_000, &mut rng);
        println!(
            "exact {:.6}  mc {:.6} ± {:.6}  ({:.2}σ)",
            v.integral(),
            e.mean,
            e.std_error,
            e.deviation_in_sigmas(v.integral())
        );
    }
    Ok(())
}
