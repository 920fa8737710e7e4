#![allow(dead_code)]

use lda_shift::{CovarianceFactor, GaussianMixtureModel, LinearClassifier};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_vec(rng: &mut ChaCha8Rng, p: usize, scale: f64) -> DVector<f64> {
    DVector::from_fn(p, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// Lower-triangular factor with diagonal in [0.5, 1.5].
pub fn lower_factor(rng: &mut ChaCha8Rng, p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            rng.random_range(0.5..1.5)
        } else if i > j {
            0.3 * rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        }
    })
}

/// A model with a random correlated covariance and a random linear rule.
pub fn random_instance(seed: u64, max_p: usize) -> (GaussianMixtureModel, LinearClassifier) {
    let mut r = rng(seed);
    let p = r.random_range(1..=max_p);
    let l = lower_factor(&mut r, p);
    let mu0 = normal_vec(&mut r, p, 1.0);
    let mu1 = normal_vec(&mut r, p, 1.0);
    let pi0 = r.random_range(0.1..0.9);
    let model = GaussianMixtureModel::new(mu0, mu1, CovarianceFactor::Lower(l), pi0).unwrap();
    let alpha = normal_vec(&mut r, p, 1.0);
    let beta = normal_vec(&mut r, p, 1.0);
    let b = 0.5 * r.sample::<f64, _>(StandardNormal);
    (model, LinearClassifier::new(alpha, beta, b).unwrap())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
