//! Shared deterministic instance generators for the integration tests.

use avekit::core::linalg::{extreme_singular_values, inverse, spectral_radius_nonneg};
use avekit::{AveProblem, Mat};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut ChaCha8Rng, n: usize, scale: f64) -> Mat {
    let data: Vec<f64> = (0..n * n).map(|_| r.random_range(-scale..scale)).collect();
    Mat::from_vec(n, n, data)
}

pub fn random_vec(r: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-scale..scale)).collect()
}

/// Random A rescaled so that sigma_min(A) = 1 + margin.
#[allow(dead_code)]
pub fn sigma_gt1_instance(r: &mut ChaCha8Rng, n: usize, margin: f64) -> AveProblem {
    loop {
        let a = random_matrix(r, n, 1.0);
        let (smin, _) = extreme_singular_values(&a);
        if smin > 1e-6 {
            let a = a.scale((1.0 + margin) / smin);
            let b = random_vec(r, n, 1.0);
            return AveProblem::new(a, b).unwrap();
        }
    }
}

/// Random contraction instance with rho(|A|) < 1 (solution bounds apply).
#[allow(dead_code)]
pub fn contraction_instance(r: &mut ChaCha8Rng, n: usize) -> AveProblem {
    loop {
        let a = random_matrix(r, n, 1.0);
        let rho = spectral_radius_nonneg(&a.abs()).unwrap_or(f64::INFINITY);
        if rho < 1e-9 {
            continue;
        }
        let a = a.scale(0.8 / rho);
        if spectral_radius_nonneg(&a.abs()).is_ok_and(|v| v < 1.0 - 1e-9) {
            let b = random_vec(r, n, 1.0);
            return AveProblem::new(a, b).unwrap();
        }
    }
}

/// Random instance with rho(|A^-1|) < 1 (Picard applies).
#[allow(dead_code)]
pub fn picard_instance(r: &mut ChaCha8Rng, n: usize) -> AveProblem {
    loop {
        // dominant diagonal with small off-diagonal entries
        let mut a = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = if i == j {
                    let sign = if r.random_range(0.0..1.0) < 0.5 { -1.0 } else { 1.0 };
                    sign * r.random_range(2.0..4.0)
                } else {
                    r.random_range(-0.3..0.3)
                };
            }
        }
        if let Ok(ai) = inverse(&a) {
            if spectral_radius_nonneg(&ai.abs()).is_ok_and(|v| v < 0.9) {
                let b = random_vec(r, n, 1.0);
                return AveProblem::new(a, b).unwrap();
            }
        }
    }
}
