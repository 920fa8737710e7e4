//! Training-set generation and empirical Fisher / ridge LDA fits.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::linalg::ScatterSpectrum;
use crate::model::{CovarianceFactor, GaussianMixtureModel, Label, LinearClassifier};
use crate::rng::{fill_normal_row, DOMAIN_TRAIN};
use crate::{Error, Result};

/// Per-class training samples, one row per observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    class0: DMatrix<f64>,
    class1: DMatrix<f64>,
    seed: u64,
}

impl Dataset {
    pub fn new(class0: DMatrix<f64>, class1: DMatrix<f64>, seed: u64) -> Result<Self> {
        for (class, m) in [(0, &class0), (1, &class1)] {
            if m.nrows() < 2 {
                return Err(Error::TooFewSamples {
                    class,
                    count: m.nrows(),
                });
            }
        }
        if class0.ncols() != class1.ncols() {
            return Err(Error::DimensionMismatch {
                expected: class0.ncols(),
                found: class1.ncols(),
            });
        }
        Ok(Self {
            class0,
            class1,
            seed,
        })
    }

    pub fn class(&self, label: Label) -> &DMatrix<f64> {
        match label {
            Label::Zero => &self.class0,
            Label::One => &self.class1,
        }
    }

    pub fn n0(&self) -> usize {
        self.class0.nrows()
    }

    pub fn n1(&self) -> usize {
        self.class1.nrows()
    }

    pub fn n(&self) -> usize {
        self.n0() + self.n1()
    }

    pub fn dim(&self) -> usize {
        self.class0.ncols()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The same samples with class labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            class0: self.class1.clone(),
            class1: self.class0.clone(),
            seed: self.seed,
        }
    }

    pub fn class_mean(&self, label: Label) -> DVector<f64> {
        let m = self.class(label);
        m.row_mean().transpose()
    }

    /// Both classes stacked with their own class mean removed.
    pub fn centered(&self) -> DMatrix<f64> {
        let p = self.dim();
        let mut out = DMatrix::zeros(self.n(), p);
        let mut offset = 0;
        for label in [Label::Zero, Label::One] {
            let m = self.class(label);
            let mean = self.class_mean(label);
            for j in 0..p {
                for i in 0..m.nrows() {
                    out[(offset + i, j)] = m[(i, j)] - mean[j];
                }
            }
            offset += m.nrows();
        }
        out
    }

    /// Pooled within-class covariance with divisor `n − 2`.
    pub fn pooled_covariance(&self) -> DMatrix<f64> {
        let xc = self.centered();
        xc.tr_mul(&xc) / self.pooled_divisor()
    }

    fn pooled_divisor(&self) -> f64 {
        (self.n() - 2) as f64
    }
}

/// Draws `n0` rows from class 0 and `n1` rows from class 1.
///
/// Row `i` of class `ℓ` is `mu_ℓ + L z` with `z` taken from the stream for
/// `(seed, ℓ, i)`; outputs are bit-identical for identical inputs.
pub fn generate_dataset(
    model: &GaussianMixtureModel,
    n0: usize,
    n1: usize,
    seed: u64,
) -> Result<Dataset> {
    for (class, count) in [(0, n0), (1, n1)] {
        if count < 2 {
            return Err(Error::TooFewSamples { class, count });
        }
    }
    let class0 = sample_class(model, Label::Zero, n0, seed);
    let class1 = sample_class(model, Label::One, n1, seed);
    Dataset::new(class0, class1, seed)
}

pub(crate) fn sample_class(
    model: &GaussianMixtureModel,
    label: Label,
    count: usize,
    seed: u64,
) -> DMatrix<f64> {
    let p = model.dim();
    let mu = model.mu(label);
    let mut out = DMatrix::zeros(count, p);
    let mut z = vec![0.0; p];
    for i in 0..count {
        fill_normal_row(&mut z, seed, DOMAIN_TRAIN, label.index() as u64, i as u64);
        match model.factor() {
            CovarianceFactor::Identity => {
                for j in 0..p {
                    out[(i, j)] = mu[j] + z[j];
                }
            }
            CovarianceFactor::Lower(l) => {
                for j in 0..p {
                    let mut acc = mu[j];
                    for k in 0..=j {
                        acc += l[(j, k)] * z[k];
                    }
                    out[(i, j)] = acc;
                }
            }
        }
    }
    out
}

fn log_count_ratio(data: &Dataset) -> f64 {
    // ln n1 − ln n0 keeps the threshold exactly antisymmetric under a label swap.
    (data.n1() as f64).ln() - (data.n0() as f64).ln()
}

/// Empirical Fisher discriminant: `α̂ = (μ̂0 + μ̂1)/2`, `β̂ = Σ̂†(μ̂0 − μ̂1)`,
/// `b̂ = ln(n1/n0)`.
///
/// `Σ̂†` is applied through the SVD of the centered data matrix with
/// eigenvalue cut-off `max(p, n − 2) · ε · λ_max`.
pub fn fit_lda(data: &Dataset) -> Result<LinearClassifier> {
    let (alpha, diff) = mean_terms(data);
    let spectrum = ScatterSpectrum::from_data(&data.centered(), data.pooled_divisor());
    let beta = spectrum.pinv_apply(&diff);
    LinearClassifier::new(alpha, beta, log_count_ratio(data))
}

/// Ridge variant: `β̂_λ = (Σ̂ + λI)⁻¹(μ̂0 − μ̂1)` via a Cholesky solve.
pub fn fit_regularized_lda(data: &Dataset, lambda: f64) -> Result<LinearClassifier> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    let (alpha, diff) = mean_terms(data);
    let mut s = data.pooled_covariance();
    for i in 0..s.nrows() {
        s[(i, i)] += lambda;
    }
    let chol = s.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let beta = chol.solve(&diff);
    LinearClassifier::new(alpha, beta, log_count_ratio(data))
}

fn mean_terms(data: &Dataset) -> (DVector<f64>, DVector<f64>) {
    let m0 = data.class_mean(Label::Zero);
    let m1 = data.class_mean(Label::One);
    let alpha = (&m0 + &m1) * 0.5;
    (alpha, m0 - m1)
}

/// Population-optimal rule: `α* = (μ0 + μ1)/2`, `β* = Σ⁻¹(μ0 − μ1)`, `b* = ln(π1/π0)`.
pub fn bayes_classifier(model: &GaussianMixtureModel) -> LinearClassifier {
    let alpha = (model.mu0() + model.mu1()) * 0.5;
    let beta = model.solve_covariance(&(model.mu0() - model.mu1()));
    let b = model.pi1().ln() - model.pi0().ln();
    LinearClassifier { alpha, beta, b }
}
