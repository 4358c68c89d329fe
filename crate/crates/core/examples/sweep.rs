//! Seeded randomized sweep over every invariant.
//!
//! cargo run --release --example sweep [seed] [trials]

use hvlab::scenario::run_sweep;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let trials = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let report = run_sweep(seed, trials);
    for c in &report.checks {
        println!(
            "{:<26} {}  failures {}/{}  worst {:.1e}",
            c.name,
            if c.pass { "ok  " } else { "FAIL" },
            c.failures,
            c.trials,
            c.worst_error
        );
    }
}
