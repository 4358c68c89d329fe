//! Seeded Monte Carlo estimates of step-function integrals, used as an
//! independent cross-check of the exact segment sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

use crate::interval::{ProductFunction, StepFunction, OMEGA_MIN};
use crate::qubit::BlochVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    fn from_moments(sum: f64, sum_sq: f64, n: usize) -> Estimate {
        let nf = n as f64;
        let mean = sum / nf;
        let var = ((sum_sq / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
        Estimate {
            mean,
            std_error: (var / nf).sqrt(),
            samples: n,
        }
    }

    /// `|mean - exact| ≤ k·σ`. A zero-variance estimate must match to 1e-12.
    pub fn agrees_with(&self, exact: f64, k_sigma: f64) -> bool {
        let diff = (self.mean - exact).abs();
        if self.std_error == 0.0 {
            diff <= 1e-12
        } else {
            diff <= k_sigma * self.std_error
        }
    }

    pub fn deviation_in_sigmas(&self, exact: f64) -> f64 {
        let diff = (self.mean - exact).abs();
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

/// A ChaCha8 generator for one task: `seed` picks the run, `stream` the task.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
    BlochVector::new(x, y, z)
}

fn uniform_omega<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    OMEGA_MIN + rng.random::<f64>()
}

pub fn estimate_step<R: Rng + ?Sized>(f: &StepFunction, samples: usize, rng: &mut R) -> Estimate {
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let v = f.eval(uniform_omega(rng));
        sum += v;
        sum_sq += v * v;
    }
    Estimate::from_moments(sum, sum_sq, samples)
}

/// Samples every level independently and uniformly.
pub fn estimate_product<R: Rng + ?Sized>(
    p: &ProductFunction,
    samples: usize,
    rng: &mut R,
) -> Estimate {
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let v = p
            .factors()
            .iter()
            .fold(p.prefactor(), |acc, f| acc * f.eval(uniform_omega(rng)));
        sum += v;
        sum_sq += v * v;
    }
    Estimate::from_moments(sum, sum_sq, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_zero_error() {
        let mut rng = seeded_rng(1, 0);
        let e = estimate_step(&StepFunction::constant(2.0), 1000, &mut rng);
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.std_error, 0.0);
        assert!(e.agrees_with(2.0, 4.0));
    }

    #[test]
    fn half_indicator_within_four_sigma() {
        let mut rng = seeded_rng(2, 0);
        let f = StepFunction::indicator(0.0, 0.5).unwrap();
        let e = estimate_step(&f, 100_000, &mut rng);
        assert!(e.agrees_with(0.5, 4.0), "{e:?}");
        assert!((e.std_error - (0.25f64 / 100_000.0).sqrt()).abs() < 1e-5);
    }

    #[test]
    fn same_seed_same_stream_reproduces() {
        let a = random_unit_vector(&mut seeded_rng(9, 3));
        let b = random_unit_vector(&mut seeded_rng(9, 3));
        let c = random_unit_vector(&mut seeded_rng(9, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_unit());
    }
}
