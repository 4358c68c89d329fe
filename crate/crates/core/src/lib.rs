//! Exact verification lab for Bell's dispersion-free hidden-variable model of a
//! qubit.
//!
//! * [`interval`]: step functions on `Λ = [-½, ½]` and factored products over `Λ^k`.
//! * [`qubit`]: exact 2×2 quantum mechanics in Bloch form, the reference oracle.
//! * [`bell`]: Bell's value map, both conditional-measurement routes, conflict witnesses.
//! * [`branching`]: one fresh `Λ` per measurement, normalized product functions.
//! * [`scenario`]: config-driven scenarios, JSON reports, CSV traces, randomized sweeps.
//! * [`montecarlo`]: seeded sampling cross-checks.

pub mod bell;
pub mod branching;
pub mod error;
pub mod interval;
pub mod montecarlo;
pub mod qubit;
pub mod scenario;

pub use error::{Error, Result};

/// Allowed deviation of `|v|` from 1 for states and projector axes.
pub const UNIT_TOLERANCE: f64 = 1e-9;
/// `Tr[ρB]` at or below this is treated as zero.
pub const TRACE_CUTOFF: f64 = 1e-12;
/// Axes with `|n × m|` at or below this are collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-9;
