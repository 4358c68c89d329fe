//! Bell's dispersion-free value assignment for a qubit, the two
//! hidden-variable representations of a conditional measurement, and the
//! witnesses that show where they (and sums of projectors) disagree pointwise.
//!
//! For a pure state with Bloch vector `s` and a projector `P_m` the value map is
//!
//! ```text
//! X(ω) = ½[1 + sign(ω + ½|s·m|)·sign(s·m)],   ω ∈ [-½, ½]
//! ```
//!
//! with the uniform measure `dω`. `sign(ω + t)` uses `sign(0) = +1`. For the
//! outer factor, `s·m = 0` is resolved by the orientation of `m` (the sign of
//! its first nonzero component) so that `X_m + X_{-m} = 1` holds for every
//! state, including `s ⟂ m`. Both choices only touch measure-zero sets or the
//! `s ⟂ m` slice, and every positively oriented axis still gets `+1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{indicator_from_sign, Polarity, StepFunction};
use crate::qubit::{expectation, projector, BlochVector, HermitianOp, PureState};
use crate::{COLLINEAR_TOLERANCE, TRACE_CUTOFF};

/// Overlaps within this distance of ±1 are treated as exactly ±1, so that
/// `v·v` rounding to `1 - 2⁻⁵³` does not leave a sliver segment behind.
pub const OVERLAP_SNAP: f64 = 1e-14;

/// `s·m`, clamped to `[-1, 1]` and snapped to ±1 within [`OVERLAP_SNAP`].
pub fn overlap(s: BlochVector, m: BlochVector) -> f64 {
    let d = s.dot(m).clamp(-1.0, 1.0);
    if 1.0 - d.abs() <= OVERLAP_SNAP {
        d.signum()
    } else {
        d
    }
}

fn outer_sign(d: f64, axis: BlochVector) -> Polarity {
    if d > 0.0 {
        Polarity::Positive
    } else if d < 0.0 {
        Polarity::Negative
    } else if axis.orientation() > 0.0 {
        Polarity::Positive
    } else {
        Polarity::Negative
    }
}

/// The 0/1 indicator `½[1 + sign(ω + ½|s·m|)·sign(s·m)]`.
pub fn bell_indicator(s: BlochVector, m: BlochVector) -> StepFunction {
    let d = overlap(s, m);
    indicator_from_sign(0.5 * d.abs(), outer_sign(d, m))
        .expect("threshold |s·m|/2 lies in [0, 1/2] after clamping")
}

/// A dispersion-free value map for one observable in one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueAssignment {
    pub state: PureState,
    pub observable: HermitianOp,
    pub values: StepFunction,
}

impl ValueAssignment {
    pub fn integral(&self) -> f64 {
        self.values.integrate()
    }

    /// The quantum value the integral must reproduce.
    pub fn expectation(&self) -> f64 {
        expectation(&self.state, &self.observable)
    }

    /// True if every segment value is an eigenvalue `a ± |b|` of the observable
    /// (within `tol`).
    pub fn respects_spectrum(&self, tol: f64) -> bool {
        let (lo, hi) = self.observable.eigenvalues();
        self.values
            .values()
            .iter()
            .all(|v| (v - lo).abs() <= tol || (v - hi).abs() <= tol)
    }
}

/// Bell's value map for the projector `P_m` in state `psi`.
pub fn bell_value(psi: &PureState, m: BlochVector) -> Result<ValueAssignment> {
    let observable = projector(m)?;
    Ok(ValueAssignment {
        state: *psi,
        observable,
        values: bell_indicator(psi.bloch(), m),
    })
}

/// Value map for a general observable `a + b·σ`:
/// `a + |b|·sign(ω + ½|s·b̂|)·sign(s·b̂)`, or the constant `a` when `b = 0`.
///
/// Takes only the eigenvalues `a ± |b|` and integrates to `a + b·s`.
pub fn bell_value_operator(psi: &PureState, op: &HermitianOp) -> Result<ValueAssignment> {
    if op.is_projector() {
        let axis = op.projector_axis()?;
        if axis.is_unit() {
            return Ok(ValueAssignment {
                observable: *op,
                ..bell_value(psi, axis)?
            });
        }
    }
    let r = op.b.norm();
    let values = if r == 0.0 {
        StepFunction::constant(op.a)
    } else {
        let (lo, hi) = op.eigenvalues();
        let axis = op.b * (1.0 / r);
        bell_indicator(psi.bloch(), axis).map(|v| if v == 1.0 { hi } else { lo })
    };
    Ok(ValueAssignment {
        state: *psi,
        observable: *op,
        values,
    })
}

/// Conditional measurement via the reduced state: after `P_n` the state is
/// `n`, so the value map of `P_m` is `bell_value(n, m)`. Symmetric in `n`, `m`.
pub fn route_state_update(n: BlochVector, m: BlochVector) -> Result<ValueAssignment> {
    let reduced = PureState::new(n)?;
    bell_value(&reduced, m)
}

/// Conditional measurement via the operator product `BAB / ⟨B⟩`:
/// `((1 + n·m)/(1 + n·s)) × bell_value(ψ, n)`, evaluated in the original state.
pub fn route_operator_product(
    psi: &PureState,
    n: BlochVector,
    m: BlochVector,
) -> Result<ValueAssignment> {
    let b = bell_value(psi, n)?;
    projector(m)?;
    let denom = 1.0 + psi.bloch().dot(n);
    if denom <= TRACE_CUTOFF {
        return Err(Error::ReductionUndefined {
            step: 0,
            trace: 0.5 * denom,
        });
    }
    let ratio = (1.0 + n.dot(m)) / denom;
    Ok(ValueAssignment {
        state: *psi,
        observable: b.observable * ratio,
        values: b.values.scale(ratio),
    })
}

/// One disagreement segment sampled at its midpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessSample {
    pub omega_left: f64,
    pub omega_right: f64,
    pub omega: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Where two representations of the same quantum quantity disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConflictWitness {
    /// 0/1 indicator of the disagreement set.
    pub omega_region: StepFunction,
    pub measure: f64,
    pub samples: Vec<WitnessSample>,
}

impl ConflictWitness {
    pub fn between(lhs: &StepFunction, rhs: &StepFunction) -> Self {
        let omega_region = lhs.disagreement(rhs);
        let samples = omega_region
            .segments()
            .filter(|s| s.value == 1.0)
            .map(|s| {
                let omega = s.midpoint();
                WitnessSample {
                    omega_left: s.left,
                    omega_right: s.right,
                    omega,
                    lhs: lhs.eval(omega),
                    rhs: rhs.eval(omega),
                }
            })
            .collect();
        ConflictWitness {
            measure: omega_region.integrate(),
            omega_region,
            samples,
        }
    }

    pub fn is_conflict(&self) -> bool {
        self.measure > 0.0
    }
}

/// Disagreement set between the state-update route and the operator-product
/// route for `P_m` measured after `P_n`.
pub fn nonuniqueness_witness(
    psi: &PureState,
    n: BlochVector,
    m: BlochVector,
) -> Result<ConflictWitness> {
    let route_b = route_operator_product(psi, n, m)?;
    let route_a = route_state_update(n, m)?;
    Ok(ConflictWitness::between(&route_a.values, &route_b.values))
}

/// `μ[a ∩ b] / μ[b]` with both sets taken from the same state `psi`.
pub fn classical_conditional(psi: &PureState, m: BlochVector, n: BlochVector) -> Result<f64> {
    let a = bell_value(psi, m)?;
    let b = bell_value(psi, n)?;
    let mu_b = b.integral();
    if mu_b <= TRACE_CUTOFF {
        return Err(Error::ConditionalUndefined { measure: mu_b });
    }
    Ok(a.values.mul(&b.values).integrate() / mu_b)
}

/// `λP_n + (1-λ)P_m`.
pub fn convex_sum(n: BlochVector, m: BlochVector, lambda: f64) -> Result<HermitianOp> {
    Ok(projector(n)? * lambda + projector(m)? * (1.0 - lambda))
}

/// The value map of `E = λP_n + (1-λ)P_m` compared against the same
/// combination of the separate projector value maps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumConflict {
    pub lambda: f64,
    /// Value map assigned to `E` as one operator.
    pub lhs: ValueAssignment,
    /// `λ·X_n(ω) + (1-λ)·X_m(ω)`.
    pub rhs: StepFunction,
    pub witness: ConflictWitness,
    /// Where both projector values are 0.
    pub both_zero: StepFunction,
    /// Where both projector values are 1.
    pub both_one: StepFunction,
}

pub fn sum_conflict_witness(
    psi: &PureState,
    n: BlochVector,
    m: BlochVector,
    lambda: f64,
) -> Result<SumConflict> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain(format!("lambda {lambda} outside (0, 1)")));
    }
    let cross = n.cross(m).norm();
    if cross <= COLLINEAR_TOLERANCE {
        return Err(Error::WitnessUndefined { cross });
    }
    let e = convex_sum(n, m, lambda)?;
    let lhs = bell_value_operator(psi, &e)?;
    let xn = bell_value(psi, n)?.values;
    let xm = bell_value(psi, m)?.values;
    let rhs = xn.scale(lambda).add(&xm.scale(1.0 - lambda));
    let witness = ConflictWitness::between(&lhs.values, &rhs);
    Ok(SumConflict {
        lambda,
        both_zero: xn.complement().mul(&xm.complement()),
        both_one: xn.mul(&xm),
        lhs,
        rhs,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(v: BlochVector) -> PureState {
        PureState::new(v).unwrap()
    }

    #[test]
    fn eigenstate_gives_constant_one() {
        let m = BlochVector::unit(0.0, 0.6, 0.8).unwrap();
        let v = bell_value(&state(m), m).unwrap();
        assert_eq!(v.values, StepFunction::one());
    }

    #[test]
    fn overlap_point_six() {
        let v = bell_value(
            &state(BlochVector::X),
            BlochVector::unit(0.6, 0.8, 0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(v.values.breakpoints(), &[-0.3]);
        assert_eq!(v.values.values(), &[0.0, 1.0]);
        assert!((v.integral() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_overlap_uses_positive_sign() {
        let v = bell_value(&state(BlochVector::Z), BlochVector::X).unwrap();
        assert_eq!(v.values, StepFunction::indicator(0.0, 0.5).unwrap());
        let w = bell_value(&state(BlochVector::Z), -BlochVector::X).unwrap();
        assert_eq!(w.values, StepFunction::indicator(-0.5, 0.0).unwrap());
        assert_eq!(v.values.add(&w.values), StepFunction::one());
    }

    #[test]
    fn general_operator_reduces_to_projector() {
        let m = BlochVector::unit(0.6, 0.0, 0.8).unwrap();
        let psi = state(BlochVector::Y);
        let p = projector(m).unwrap();
        assert_eq!(
            bell_value_operator(&psi, &p).unwrap().values,
            bell_value(&psi, m).unwrap().values
        );
        let id = bell_value_operator(&psi, &HermitianOp::IDENTITY).unwrap();
        assert_eq!(id.values, StepFunction::one());
    }

    #[test]
    fn state_update_route_is_symmetric() {
        let n = BlochVector::unit(0.6, 0.8, 0.0).unwrap();
        let m = BlochVector::X;
        let ab = route_state_update(n, m).unwrap();
        let ba = route_state_update(m, n).unwrap();
        assert_eq!(ab.values, ba.values);
        assert!((ab.integral() - 0.8).abs() < 1e-15);
        assert_eq!(
            route_state_update(m, m).unwrap().values,
            StepFunction::one()
        );
    }

    #[test]
    fn operator_product_route_example() {
        let rb =
            route_operator_product(&state(BlochVector::Z), BlochVector::X, BlochVector::X).unwrap();
        assert_eq!(
            rb.values,
            StepFunction::indicator(0.0, 0.5).unwrap().scale(2.0)
        );
        assert_eq!(rb.values.value_set(), vec![0.0, 2.0]);
        assert_eq!(rb.integral(), 1.0);
        assert!(rb.respects_spectrum(1e-15));
        assert!(matches!(
            route_operator_product(&state(-BlochVector::X), BlochVector::X, BlochVector::Y),
            Err(Error::ReductionUndefined { .. })
        ));
    }

    #[test]
    fn nonuniqueness_examples() {
        let w =
            nonuniqueness_witness(&state(BlochVector::Z), BlochVector::X, BlochVector::X).unwrap();
        assert_eq!(w.measure, 1.0);
        assert_eq!(w.samples.len(), 1);
        let z = BlochVector::Z;
        let w = nonuniqueness_witness(&state(z), z, z).unwrap();
        assert_eq!(w.measure, 0.0);
        assert!(w.samples.is_empty());
    }

    #[test]
    fn repeated_measurement_routes_disagree() {
        let s = BlochVector::unit(0.0, 0.6, 0.8).unwrap();
        let a = BlochVector::unit(0.8, 0.6, 0.0).unwrap();
        let w = nonuniqueness_witness(&state(s), a, a).unwrap();
        assert_eq!(
            route_state_update(a, a).unwrap().values,
            StepFunction::one()
        );
        assert!(w.measure > 0.0);
    }

    #[test]
    fn classical_conditional_examples() {
        let psi = state(BlochVector::Z);
        assert_eq!(
            classical_conditional(&psi, BlochVector::X, BlochVector::X).unwrap(),
            1.0
        );
        assert_eq!(
            classical_conditional(&psi, BlochVector::Y, BlochVector::X).unwrap(),
            1.0
        );
        assert_eq!(
            classical_conditional(&psi, -BlochVector::X, BlochVector::X).unwrap(),
            0.0
        );
        assert!(matches!(
            classical_conditional(&state(-BlochVector::X), BlochVector::Y, BlochVector::X),
            Err(Error::ConditionalUndefined { .. })
        ));
    }

    #[test]
    fn sum_conflict_rejects_collinear_and_bad_lambda() {
        let psi = state(BlochVector::Z);
        assert!(matches!(
            sum_conflict_witness(&psi, BlochVector::X, BlochVector::X, 0.5),
            Err(Error::WitnessUndefined { .. })
        ));
        assert!(sum_conflict_witness(&psi, BlochVector::X, BlochVector::Y, 1.0).is_err());
    }

    #[test]
    fn overlap_snaps_near_unity() {
        let v = BlochVector::new(0.1, 0.2, 0.3).normalized().unwrap();
        assert_eq!(overlap(v, v), 1.0);
        assert_eq!(overlap(v, -v), -1.0);
        assert_eq!(bell_indicator(v, v), StepFunction::one());
        assert_eq!(bell_indicator(v, -v), StepFunction::zero());
    }
}
