//! Exact qubit quantum mechanics in Bloch form.
//!
//! Every operator is kept as `a·1 + b·σ`; products, traces and sandwiches all
//! have closed forms in `(a, b)`, so no complex arithmetic is needed. This is
//! the reference every hidden-variable computation is compared against.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{TRACE_CUTOFF, UNIT_TOLERANCE};

/// A real 3-vector. Unit vectors label pure states and projector axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const X: BlochVector = BlochVector::new(1.0, 0.0, 0.0);
    pub const Y: BlochVector = BlochVector::new(0.0, 1.0, 0.0);
    pub const Z: BlochVector = BlochVector::new(0.0, 0.0, 1.0);
    pub const ZERO: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    /// Builds a vector and checks `|v| = 1` within [`UNIT_TOLERANCE`].
    pub fn unit(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector::new(x, y, z);
        v.require_unit()?;
        Ok(v)
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        BlochVector::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: BlochVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: BlochVector) -> BlochVector {
        BlochVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Result<BlochVector> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Validation(format!("cannot normalize {self:?}")));
        }
        Ok(self * (1.0 / n))
    }

    pub fn is_unit(self) -> bool {
        (self.norm() - 1.0).abs() <= UNIT_TOLERANCE
    }

    pub fn require_unit(self) -> Result<()> {
        if self.is_unit() {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "expected a unit vector, |{:?}| = {}",
                self,
                self.norm()
            )))
        }
    }

    /// +1 if the first nonzero component is positive, -1 otherwise (and for zero).
    ///
    /// Splits every antipodal pair `v, -v` into one positive and one negative member.
    pub fn orientation(self) -> f64 {
        for c in [self.x, self.y, self.z] {
            if c > 0.0 {
                return 1.0;
            }
            if c < 0.0 {
                return -1.0;
            }
        }
        -1.0
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;
    fn neg(self) -> BlochVector {
        BlochVector::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, c: f64) -> BlochVector {
        BlochVector::new(c * self.x, c * self.y, c * self.z)
    }
}

/// A qubit observable `a·1 + b·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianOp {
    pub a: f64,
    pub b: BlochVector,
}

impl HermitianOp {
    pub const IDENTITY: HermitianOp = HermitianOp {
        a: 1.0,
        b: BlochVector::ZERO,
    };

    pub fn new(a: f64, b: BlochVector) -> Self {
        HermitianOp { a, b }
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.b.norm();
        (self.a - r, self.a + r)
    }

    pub fn is_projector(&self) -> bool {
        (self.a - 0.5).abs() <= UNIT_TOLERANCE && (self.b.norm() - 0.5).abs() <= UNIT_TOLERANCE
    }

    pub fn require_projector(&self) -> Result<()> {
        if self.is_projector() {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "{self:?} is not a rank-1 projector"
            )))
        }
    }

    /// Axis `m` of a projector `P_m`, recovered as `2b`.
    pub fn projector_axis(&self) -> Result<BlochVector> {
        self.require_projector()?;
        Ok(self.b * 2.0)
    }

    /// The `c` with `self = c·other`, if `self` is proportional to `other`
    /// within `tol` in every Bloch coordinate.
    pub fn coefficient_over(&self, other: &HermitianOp, tol: f64) -> Option<f64> {
        if other.a == 0.0 {
            return None;
        }
        let c = self.a / other.a;
        let residual = (self.b - other.b * c).norm();
        (residual <= tol).then_some(c)
    }

    pub fn max_abs_diff(&self, other: &HermitianOp) -> f64 {
        let d = self.b - other.b;
        [(self.a - other.a).abs(), d.x.abs(), d.y.abs(), d.z.abs()]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

impl Add for HermitianOp {
    type Output = HermitianOp;
    fn add(self, o: HermitianOp) -> HermitianOp {
        HermitianOp::new(self.a + o.a, self.b + o.b)
    }
}

impl Mul<f64> for HermitianOp {
    type Output = HermitianOp;
    fn mul(self, c: f64) -> HermitianOp {
        HermitianOp::new(c * self.a, self.b * c)
    }
}

/// A pure qubit state `½(1 + s·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    s: BlochVector,
}

impl PureState {
    pub fn new(s: BlochVector) -> Result<Self> {
        s.require_unit()?;
        Ok(PureState { s })
    }

    pub fn bloch(&self) -> BlochVector {
        self.s
    }

    pub fn density(&self) -> HermitianOp {
        HermitianOp::new(0.5, self.s * 0.5)
    }
}

/// `P_m = ½(1 + m·σ)`.
pub fn projector(m: BlochVector) -> Result<HermitianOp> {
    m.require_unit()?;
    Ok(HermitianOp::new(0.5, m * 0.5))
}

/// `⟨ψ|O|ψ⟩ = a + b·s`.
pub fn expectation(psi: &PureState, op: &HermitianOp) -> f64 {
    op.a + op.b.dot(psi.s)
}

/// `B A B` in Bloch form, valid for arbitrary Hermitian `A`, `B`:
/// scalar `a²c + 2a(b·d) + c|b|²`, vector `(a² − |b|²)d + 2(ac + b·d)b`
/// for `B = a + b·σ`, `A = c + d·σ`.
pub(crate) fn sandwich_general(outer: &HermitianOp, inner: &HermitianOp) -> HermitianOp {
    let (a, b) = (outer.a, outer.b);
    let (c, d) = (inner.a, inner.b);
    let bd = b.dot(d);
    let bb = b.dot(b);
    HermitianOp::new(
        a * a * c + 2.0 * a * bd + c * bb,
        d * (a * a - bb) + b * (2.0 * (a * c + bd)),
    )
}

/// `B A B` for two projectors. Equals `((1 + n·m)/2)·P_n`.
pub fn sandwich(outer: &HermitianOp, inner: &HermitianOp) -> Result<HermitianOp> {
    outer.require_projector()?;
    inner.require_projector()?;
    Ok(sandwich_general(outer, inner))
}

fn measurable(psi: &PureState, b: &HermitianOp, step: usize) -> Result<f64> {
    let trace = expectation(psi, b);
    if trace <= TRACE_CUTOFF {
        Err(Error::ReductionUndefined { step, trace })
    } else {
        Ok(trace)
    }
}

/// Post-measurement state `BρB / Tr[ρB]`; for pure `ψ` and rank-1 `B` this is `B` itself.
pub fn reduce(psi: &PureState, b: &HermitianOp) -> Result<PureState> {
    let axis = b.projector_axis()?;
    measurable(psi, b, 0)?;
    Ok(PureState { s: axis })
}

/// `Tr[ρBAB] / Tr[ρB]`.
pub fn conditional_expectation(psi: &PureState, a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    let bab = sandwich(b, a)?;
    let trace = measurable(psi, b, 0)?;
    Ok(expectation(psi, &bab) / trace)
}

/// Probability that a sequence of projective measurements all return "yes":
/// `Π_k Tr[ρ_{k-1} P_k]` with `ρ_k` the reduced state after step `k`.
pub fn chain_probability(psi: &PureState, sequence: &[HermitianOp]) -> Result<f64> {
    let mut state = *psi;
    let mut prob = 1.0;
    for (step, p) in sequence.iter().enumerate() {
        p.require_projector()?;
        prob *= measurable(&state, p, step)?;
        state = PureState {
            s: p.projector_axis()?,
        };
    }
    Ok(prob)
}
