//! Exact arithmetic on piecewise-constant functions over the hidden-variable
//! interval `Λ = [-1/2, 1/2]`, and factored products of them over `Λ × Λ × …`.
//!
//! A [`StepFunction`] stores its breakpoints and one value per open segment.
//! Integration against the uniform measure `dω` is a finite sum of
//! `value × length`, so no quadrature error ever enters. Pointwise queries are
//! right-continuous: at a breakpoint the function takes the value of the
//! segment to its right, which matches `sign(0) = +1` in `sign(ω + t)`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const OMEGA_MIN: f64 = -0.5;
pub const OMEGA_MAX: f64 = 0.5;

/// A piecewise-constant real function on `[-1/2, 1/2]`.
///
/// Always canonical: adjacent segments carry different values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

/// One maximal constant piece of a [`StepFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub left: f64,
    pub right: f64,
    pub value: f64,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Orientation of the `sign(·)` factor in `½[1 + sign(ω + t)·polarity]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_f64(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl StepFunction {
    /// Builds a step function from breakpoints and per-segment values, then
    /// merges adjacent equal segments.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::Validation(format!(
                "step function needs {} values for {} breakpoints, got {}",
                breakpoints.len() + 1,
                breakpoints.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite segment value {v}")));
        }
        for b in &breakpoints {
            if !(*b > OMEGA_MIN && *b < OMEGA_MAX) {
                return Err(Error::Validation(format!(
                    "breakpoint {b} outside the open interval (-1/2, 1/2)"
                )));
            }
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Self::canonical(breakpoints, values))
    }

    pub fn constant(value: f64) -> Self {
        StepFunction {
            breakpoints: Vec::new(),
            values: vec![value],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The 0/1 indicator of the open interval `(left, right) ∩ Λ`.
    pub fn indicator(left: f64, right: f64) -> Result<Self> {
        if !(left <= right) {
            return Err(Error::Domain(format!(
                "indicator needs left <= right, got ({left}, {right})"
            )));
        }
        let left = left.max(OMEGA_MIN);
        let right = right.min(OMEGA_MAX);
        if left >= right {
            return Ok(Self::zero());
        }
        let mut breakpoints = Vec::with_capacity(2);
        let mut values = vec![];
        if left > OMEGA_MIN {
            breakpoints.push(left);
            values.push(0.0);
        }
        values.push(1.0);
        if right < OMEGA_MAX {
            breakpoints.push(right);
            values.push(0.0);
        }
        Self::new(breakpoints, values)
    }

    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        let mut bps = Vec::with_capacity(breakpoints.len());
        let mut vals = Vec::with_capacity(values.len());
        vals.push(values[0]);
        for (b, v) in breakpoints.into_iter().zip(values.into_iter().skip(1)) {
            if v != *vals.last().unwrap() {
                bps.push(b);
                vals.push(v);
            }
        }
        StepFunction {
            breakpoints: bps,
            values: vals,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.values.len()).map(move |i| Segment {
            left: if i == 0 {
                OMEGA_MIN
            } else {
                self.breakpoints[i - 1]
            },
            right: self.breakpoints.get(i).copied().unwrap_or(OMEGA_MAX),
            value: self.values[i],
        })
    }

    /// Right-continuous evaluation. Points outside `Λ` clamp to the end segments.
    pub fn eval(&self, omega: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|b| *b <= omega);
        self.values[idx]
    }

    /// `∫_Λ f(ω) dω`, summed segment by segment.
    pub fn integrate(&self) -> f64 {
        self.segments().map(|s| s.value * s.length()).sum()
    }

    pub fn as_constant(&self) -> Option<f64> {
        (self.values.len() == 1).then(|| self.values[0])
    }

    /// True if every segment value is exactly 0 or 1.
    pub fn is_indicator(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0 || *v == 1.0)
    }

    /// Distinct segment values, ascending.
    pub fn value_set(&self) -> Vec<f64> {
        let mut vs = self.values.clone();
        vs.sort_by(f64::total_cmp);
        vs.dedup();
        vs
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::canonical(
            self.breakpoints.clone(),
            self.values.iter().map(|v| f(*v)).collect(),
        )
    }

    /// Combines two step functions pointwise over the union of their breakpoints.
    pub fn zip_with(&self, other: &StepFunction, f: impl Fn(f64, f64) -> f64) -> Self {
        let (a, b) = (&self.breakpoints, &other.breakpoints);
        let mut bps = Vec::with_capacity(a.len() + b.len());
        let mut vals = Vec::with_capacity(a.len() + b.len() + 1);
        vals.push(f(self.values[0], other.values[0]));
        let (mut i, mut j) = (0, 0);
        loop {
            let next = match (a.get(i), b.get(j)) {
                (None, None) => break,
                (Some(x), None) => {
                    i += 1;
                    *x
                }
                (None, Some(y)) => {
                    j += 1;
                    *y
                }
                (Some(x), Some(y)) => {
                    if x < y {
                        i += 1;
                        *x
                    } else if y < x {
                        j += 1;
                        *y
                    } else {
                        i += 1;
                        j += 1;
                        *x
                    }
                }
            };
            bps.push(next);
            vals.push(f(self.values[i], other.values[j]));
        }
        Self::canonical(bps, vals)
    }

    pub fn add(&self, other: &StepFunction) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &StepFunction) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    /// Pointwise product; on 0/1 indicators this is set intersection.
    pub fn mul(&self, other: &StepFunction) -> Self {
        self.zip_with(other, |x, y| x * y)
    }

    pub fn min(&self, other: &StepFunction) -> Self {
        self.zip_with(other, f64::min)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `1 - f`.
    pub fn complement(&self) -> Self {
        self.map(|v| 1.0 - v)
    }

    /// 0/1 indicator of `{ω : f(ω) ≠ g(ω)}` (exact comparison).
    pub fn disagreement(&self, other: &StepFunction) -> Self {
        self.zip_with(other, |x, y| if x != y { 1.0 } else { 0.0 })
    }

    /// Debug dump: one `omega_left,omega_right,value` row per segment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega_left,omega_right,value\n");
        for s in self.segments() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                s.left, s.right, s.value
            ));
        }
        out
    }
}

/// `½[1 + sign(ω + threshold)·polarity]` as an exact 0/1 step function, with
/// `sign(0) = +1`.
pub fn indicator_from_sign(threshold: f64, polarity: Polarity) -> Result<StepFunction> {
    if !(0.0..=0.5).contains(&threshold) {
        return Err(Error::Domain(format!(
            "sign threshold {threshold} outside [0, 1/2]"
        )));
    }
    let (below, above) = match polarity {
        Polarity::Positive => (0.0, 1.0),
        Polarity::Negative => (1.0, 0.0),
    };
    let edge = -threshold;
    if edge <= OMEGA_MIN {
        return Ok(StepFunction::constant(above));
    }
    StepFunction::new(vec![edge], vec![below, above])
}

/// Free-function form of [`StepFunction::integrate`].
pub fn integrate(f: &StepFunction) -> f64 {
    f.integrate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    Add,
    Multiply,
    Scale,
    Complement,
    Min,
}

#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Function(&'a StepFunction),
    Scalar(f64),
    None,
}

/// Dispatches one pointwise operation. Scalars broadcast as constant functions;
/// `Complement` ignores its operand.
pub fn pointwise(op: PointwiseOp, f: &StepFunction, g: Operand<'_>) -> Result<StepFunction> {
    let broadcast;
    let rhs = match g {
        Operand::Function(g) => Some(g),
        Operand::Scalar(c) => {
            broadcast = StepFunction::constant(c);
            Some(&broadcast)
        }
        Operand::None => None,
    };
    match (op, rhs, g) {
        (PointwiseOp::Complement, _, _) => Ok(f.complement()),
        (PointwiseOp::Scale, _, Operand::Scalar(c)) => Ok(f.scale(c)),
        (PointwiseOp::Scale, _, _) => Err(Error::Validation("scale needs a scalar operand".into())),
        (PointwiseOp::Add, Some(g), _) => Ok(f.add(g)),
        (PointwiseOp::Multiply, Some(g), _) => Ok(f.mul(g)),
        (PointwiseOp::Min, Some(g), _) => Ok(f.min(g)),
        (op, None, _) => Err(Error::Validation(format!("{op:?} needs a second operand"))),
    }
}

/// `prefactor × Π factors[i](ω_i)` over independent copies of `Λ`.
///
/// Levels are kept factored; the joint grid is never built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductFunction {
    factors: Vec<StepFunction>,
    prefactor: f64,
}

impl ProductFunction {
    pub fn new(factors: Vec<StepFunction>, prefactor: f64) -> Self {
        ProductFunction { factors, prefactor }
    }

    pub fn factors(&self) -> &[StepFunction] {
        &self.factors
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn levels(&self) -> usize {
        self.factors.len()
    }

    pub fn eval(&self, omegas: &[f64]) -> Result<f64> {
        if omegas.len() != self.factors.len() {
            return Err(Error::Validation(format!(
                "product over {} levels evaluated at {} coordinates",
                self.factors.len(),
                omegas.len()
            )));
        }
        Ok(self
            .factors
            .iter()
            .zip(omegas)
            .fold(self.prefactor, |acc, (f, w)| acc * f.eval(*w)))
    }

    pub fn integrate(&self) -> f64 {
        self.factors
            .iter()
            .fold(self.prefactor, |acc, f| acc * f.integrate())
    }

    /// Integrates out one level (0-based), folding its integral into the prefactor.
    pub fn marginalize(&self, level: usize) -> Result<ProductFunction> {
        if level >= self.factors.len() {
            return Err(Error::InvalidOrder(format!(
                "level index {level} out of range for {} levels",
                self.factors.len()
            )));
        }
        let mut factors = self.factors.clone();
        let removed = factors.remove(level);
        Ok(ProductFunction {
            factors,
            prefactor: self.prefactor * removed.integrate(),
        })
    }
}

pub fn product_integrate(p: &ProductFunction) -> f64 {
    p.integrate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_measure(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        // midpoint rule; exact for step functions whose edges avoid cell interiors
        let h = 1.0 / n as f64;
        (0..n)
            .map(|i| f(OMEGA_MIN + (i as f64 + 0.5) * h) * h)
            .sum()
    }

    #[test]
    fn sign_indicator_full_threshold_is_constant_one() {
        let f = indicator_from_sign(0.5, Polarity::Positive).unwrap();
        assert_eq!(f.as_constant(), Some(1.0));
        assert_eq!(f.integrate(), 1.0);
    }

    #[test]
    fn sign_indicator_zero_threshold() {
        let f = indicator_from_sign(0.0, Polarity::Positive).unwrap();
        assert_eq!(f.breakpoints(), &[0.0]);
        assert_eq!(f.values(), &[0.0, 1.0]);
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.integrate(), 0.5);
    }

    #[test]
    fn sign_indicator_negative_polarity_matches_grid() {
        let f = indicator_from_sign(0.25, Polarity::Negative).unwrap();
        assert_eq!(f.values(), &[1.0, 0.0]);
        assert_eq!(f.breakpoints(), &[-0.25]);
        // closed form on a 10^4-point grid
        let closed = |w: f64| {
            let sign = if w + 0.25 >= 0.0 { 1.0 } else { -1.0 };
            0.5 * (1.0 - sign)
        };
        let grid = grid_measure(closed, 10_000);
        assert!((grid - 0.25).abs() < 1e-12);
        assert_eq!(f.integrate(), 0.25);
    }

    #[test]
    fn sign_indicator_rejects_bad_threshold() {
        assert!(matches!(
            indicator_from_sign(0.6, Polarity::Positive),
            Err(Error::Domain(_))
        ));
        assert!(indicator_from_sign(-0.1, Polarity::Negative).is_err());
    }

    #[test]
    fn new_validates_shape() {
        assert!(StepFunction::new(vec![0.1], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.2, 0.1], vec![0.0, 1.0, 0.0]).is_err());
        assert!(StepFunction::new(vec![0.5], vec![0.0, 1.0]).is_err());
        assert!(StepFunction::new(vec![0.0], vec![f64::NAN, 1.0]).is_err());
        let merged = StepFunction::new(vec![-0.1, 0.2], vec![1.0, 1.0, 0.0]).unwrap();
        assert_eq!(merged.breakpoints(), &[0.2]);
    }

    #[test]
    fn complement_of_one_is_zero() {
        assert_eq!(StepFunction::one().complement(), StepFunction::zero());
    }

    #[test]
    fn multiply_nested_indicators_is_intersection() {
        let f = StepFunction::indicator(0.0, 0.5).unwrap();
        let g = StepFunction::indicator(-0.25, 0.5).unwrap();
        let h = f.mul(&g);
        assert_eq!(h, f);
        assert_eq!(h.integrate(), 0.5);
    }

    #[test]
    fn weighted_sum_of_disjoint_indicators() {
        let f = StepFunction::indicator(-0.5, -0.1).unwrap();
        let g = StepFunction::indicator(0.2, 0.5).unwrap();
        let h = f.scale(0.3).add(&g.scale(0.7));
        // grid oracle: evaluate 0.3 f + 0.7 g at segment midpoints
        let expect = |w: f64| {
            let fv = if w < -0.1 { 1.0 } else { 0.0 };
            let gv = if w >= 0.2 { 1.0 } else { 0.0 };
            0.3 * fv + 0.7 * gv
        };
        for i in 0..1000 {
            let w = OMEGA_MIN + (i as f64 + 0.5) / 1000.0;
            assert_eq!(h.eval(w), expect(w));
        }
        assert_eq!(h.value_set(), vec![0.0, 0.3, 0.7]);
    }

    #[test]
    fn pointwise_dispatch() {
        let f = StepFunction::indicator(0.0, 0.5).unwrap();
        assert_eq!(
            pointwise(PointwiseOp::Scale, &f, Operand::Scalar(2.0)).unwrap(),
            f.scale(2.0)
        );
        assert_eq!(
            pointwise(PointwiseOp::Complement, &f, Operand::None).unwrap(),
            StepFunction::indicator(-0.5, 0.0).unwrap()
        );
        assert_eq!(
            pointwise(PointwiseOp::Add, &f, Operand::Scalar(1.0)).unwrap(),
            f.map(|v| v + 1.0)
        );
        assert!(pointwise(PointwiseOp::Scale, &f, Operand::Function(&f)).is_err());
        assert!(pointwise(PointwiseOp::Min, &f, Operand::None).is_err());
    }

    #[test]
    fn product_integration() {
        let one = ProductFunction::new(vec![StepFunction::one()], 1.0);
        assert_eq!(product_integrate(&one), 1.0);
        let half = StepFunction::indicator(0.0, 0.5).unwrap();
        let eight = StepFunction::indicator(-0.3, 0.5).unwrap();
        let p = ProductFunction::new(vec![half, eight], 2.0);
        assert!((p.integrate() - 0.8).abs() < 1e-15);
        let m0 = p.marginalize(0).unwrap();
        let m1 = p.marginalize(1).unwrap();
        assert!((m0.integrate() - m1.integrate()).abs() < 1e-15);
        assert!(p.marginalize(2).is_err());
        assert_eq!(p.eval(&[0.1, 0.1]).unwrap(), 2.0);
        assert!(p.eval(&[0.1]).is_err());
    }

    #[test]
    fn csv_dump_lists_segments() {
        let f = StepFunction::indicator(0.0, 0.5).unwrap();
        let csv = f.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("omega_left,omega_right,value\n"));
    }
}
