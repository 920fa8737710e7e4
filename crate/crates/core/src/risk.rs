//! Misclassification risk of a linear rule under a known Gaussian mixture.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimation::sample_class;
use crate::model::{GaussianMixtureModel, Label, LinearClassifier};
use crate::normal::std_normal_cdf;
use crate::rng::{derive_seed, DOMAIN_TEST};
use crate::{Error, Result};

/// Exact risk with its per-class parts. `q0`/`q1` are the standardized margins
/// (`err_ℓ = Φ(q_ℓ)`); they are `None` when `‖β‖_Σ = 0` and the rule is constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub q0: Option<f64>,
    pub q1: Option<f64>,
    pub err0: f64,
    pub err1: f64,
    pub risk: f64,
}

impl RiskReport {
    pub fn is_degenerate(&self) -> bool {
        self.q0.is_none()
    }
}

/// `π0 Φ(q0) + π1 Φ(q1)` with
/// `q0 = (βᵀ(α − μ0) + b)/‖β‖_Σ` and `q1 = (βᵀ(μ1 − α) − b)/‖β‖_Σ`.
pub fn conditional_risk(
    clf: &LinearClassifier,
    model: &GaussianMixtureModel,
) -> Result<RiskReport> {
    if clf.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: clf.dim(),
        });
    }
    let (pi0, pi1) = (model.pi0(), model.pi1());
    let norm = model.sigma_norm(&clf.beta);
    if norm == 0.0 {
        // constant rule: label 0 iff 0 > b
        let (err0, err1) = if clf.b >= 0.0 { (1.0, 0.0) } else { (0.0, 1.0) };
        return Ok(RiskReport {
            q0: None,
            q1: None,
            err0,
            err1,
            risk: pi0 * err0 + pi1 * err1,
        });
    }
    let proj_alpha = clf.beta.dot(&clf.alpha);
    let q0 = (proj_alpha - clf.beta.dot(model.mu0()) + clf.b) / norm;
    let q1 = (clf.beta.dot(model.mu1()) - proj_alpha - clf.b) / norm;
    let err0 = std_normal_cdf(q0);
    let err1 = std_normal_cdf(q1);
    Ok(RiskReport {
        q0: Some(q0),
        q1: Some(q1),
        err0,
        err1,
        risk: pi0 * err0 + pi1 * err1,
    })
}

const TEST_CHUNK: usize = 4096;

/// Monte Carlo estimate of the risk from a fresh test set of `m_test` points.
///
/// Class counts are the deterministic quotas `round(π0·m_test)` and the
/// remainder; the per-class error fractions are weighted by the priors. A class
/// whose quota rounds to zero is dropped and the other class gets weight 1.
pub fn empirical_risk(
    clf: &LinearClassifier,
    model: &GaussianMixtureModel,
    m_test: usize,
    seed: u64,
) -> Result<f64> {
    if clf.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            found: clf.dim(),
        });
    }
    if m_test == 0 {
        return Err(Error::InvalidSpec("m_test must be at least 1".into()));
    }
    let m0 = ((model.pi0() * m_test as f64).round() as usize).min(m_test);
    let m1 = m_test - m0;
    let e0 = count_errors(clf, model, Label::Zero, m0, seed);
    let e1 = count_errors(clf, model, Label::One, m1, seed);
    let frac = |e: usize, m: usize| e as f64 / m as f64;
    Ok(match (m0, m1) {
        (0, _) => frac(e1, m1),
        (_, 0) => frac(e0, m0),
        _ => model.pi0() * frac(e0, m0) + model.pi1() * frac(e1, m1),
    })
}

fn count_errors(
    clf: &LinearClassifier,
    model: &GaussianMixtureModel,
    label: Label,
    count: usize,
    seed: u64,
) -> usize {
    let chunks = count.div_ceil(TEST_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * TEST_CHUNK;
            let len = TEST_CHUNK.min(count - start);
            // each chunk owns a derived seed, so chunking is part of the stream layout
            let chunk_seed = derive_seed(&[seed, DOMAIN_TEST, c as u64]);
            let xs = sample_class(model, label, len, chunk_seed);
            let mut row = vec![0.0; model.dim()];
            let mut wrong = 0;
            for i in 0..len {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = xs[(i, j)];
                }
                if clf.classify(&row) != label {
                    wrong += 1;
                }
            }
            wrong
        })
        .sum()
}
