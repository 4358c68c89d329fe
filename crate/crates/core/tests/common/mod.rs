//! Independent oracles for integration tests: explicit complex 2×2 matrices
//! and direct evaluation of the closed-form value maps on an ω grid. Nothing
//! here calls the library's Bloch-form algebra or step-function arithmetic.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type Mat = [[C; 2]; 2];

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity() -> Mat {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

/// `a·1 + v·σ` built from the Pauli matrices.
pub fn bloch_op(a: f64, v: [f64; 3]) -> Mat {
    let [x, y, z] = v;
    [[c(a + z, 0.0), c(x, -y)], [c(x, y), c(a - z, 0.0)]]
}

pub fn projector(m: [f64; 3]) -> Mat {
    bloch_op(0.5, [0.5 * m[0], 0.5 * m[1], 0.5 * m[2]])
}

pub fn density(s: [f64; 3]) -> Mat {
    projector(s)
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(a: &Mat, k: f64) -> Mat {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= k;
        }
    }
    out
}

pub fn trace(a: &Mat) -> C {
    a[0][0] + a[1][1]
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a[i][j] - b[i][j]).norm());
        }
    }
    d
}

/// Eigenvalues of a Hermitian 2×2 matrix from its characteristic polynomial.
pub fn hermitian_eigenvalues(a: &Mat) -> (f64, f64) {
    let t = trace(a).re;
    let det = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).re;
    let disc = (0.25 * t * t - det).max(0.0).sqrt();
    (0.5 * t - disc, 0.5 * t + disc)
}

/// `Tr[P_k ... P_1 ρ P_1 ... P_k]` by explicit matrix products.
pub fn chain_probability(s: [f64; 3], axes: &[[f64; 3]]) -> f64 {
    let mut rho = density(s);
    for a in axes {
        let p = projector(*a);
        rho = mul(&mul(&p, &rho), &p);
    }
    trace(&rho).re
}

/// `Tr[ρBAB]/Tr[ρB]` by explicit matrix products.
pub fn conditional(s: [f64; 3], n: [f64; 3], m: [f64; 3]) -> f64 {
    let (rho, b, a) = (density(s), projector(n), projector(m));
    let bab = mul(&mul(&b, &a), &b);
    trace(&mul(&rho, &bab)).re / trace(&mul(&rho, &b)).re
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// The closed-form value map `½[1 + sign(ω + ½|s·m|) sign(s·m)]`, evaluated
/// directly. Only valid where `s·m ≠ 0`; callers handle the orthogonal slice.
pub fn bell_closed_form(s: [f64; 3], m: [f64; 3], omega: f64) -> f64 {
    let d = dot(s, m);
    0.5 * (1.0 + sign(omega + 0.5 * d.abs()) * sign(d))
}

/// Cell midpoints of an `n`-cell partition of `[-½, ½]`.
pub fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| -0.5 + (i as f64 + 0.5) / n as f64)
}

/// Midpoint-rule integral; exact up to one cell width per discontinuity.
pub fn grid_integral(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    grid(n).map(f).sum::<f64>() / n as f64
}

/// Length of `(a1, b1) ∩ (a2, b2)`.
pub fn interval_overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.1.min(b.1) - a.0.max(b.0)).max(0.0)
}
