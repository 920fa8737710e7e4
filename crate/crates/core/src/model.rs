//! Population model and linear decision rules.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn index(self) -> usize {
        match self {
            Label::Zero => 0,
            Label::One => 1,
        }
    }
}

/// Lower-triangular factor `L` of the shared covariance `Σ = L Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceFactor {
    Identity,
    Lower(DMatrix<f64>),
}

/// Two Gaussian classes `N(mu0, Σ)` and `N(mu1, Σ)` with test prior `pi0` on class 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureModel {
    mu0: DVector<f64>,
    mu1: DVector<f64>,
    factor: CovarianceFactor,
    pi0: f64,
}

impl GaussianMixtureModel {
    pub fn new(
        mu0: DVector<f64>,
        mu1: DVector<f64>,
        factor: CovarianceFactor,
        pi0: f64,
    ) -> Result<Self> {
        let p = mu0.len();
        if p == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if mu1.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: mu1.len(),
            });
        }
        if !(pi0 > 0.0 && pi0 < 1.0) {
            return Err(Error::InvalidPrior(pi0));
        }
        if let CovarianceFactor::Lower(l) = &factor {
            if l.nrows() != p || l.ncols() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: l.nrows(),
                });
            }
            for j in 0..p {
                if !(l[(j, j)] > 0.0 && l[(j, j)].is_finite()) {
                    return Err(Error::NotPositiveDefinite);
                }
                for i in 0..j {
                    if l[(i, j)] != 0.0 {
                        return Err(Error::NotPositiveDefinite);
                    }
                }
            }
        }
        let model = Self {
            mu0,
            mu1,
            factor,
            pi0,
        };
        if !model.snr().is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(model)
    }

    /// `Σ = I`, `mu0 = +(Δ/2) e1`, `mu1 = -(Δ/2) e1`, so that the SNR equals `delta2`.
    ///
    /// Risk is invariant under whitening, so this is the canonical model for a given SNR.
    pub fn isotropic(p: usize, delta2: f64, pi0: f64) -> Result<Self> {
        if !(delta2.is_finite() && delta2 >= 0.0) {
            return Err(Error::InvalidDelta(delta2));
        }
        let half = 0.5 * delta2.sqrt();
        let mut mu0 = DVector::zeros(p);
        let mut mu1 = DVector::zeros(p);
        if p > 0 {
            mu0[0] = half;
            mu1[0] = -half;
        }
        Self::new(mu0, mu1, CovarianceFactor::Identity, pi0)
    }

    pub fn dim(&self) -> usize {
        self.mu0.len()
    }

    pub fn mu(&self, label: Label) -> &DVector<f64> {
        match label {
            Label::Zero => &self.mu0,
            Label::One => &self.mu1,
        }
    }

    pub fn mu0(&self) -> &DVector<f64> {
        &self.mu0
    }

    pub fn mu1(&self) -> &DVector<f64> {
        &self.mu1
    }

    pub fn factor(&self) -> &CovarianceFactor {
        &self.factor
    }

    pub fn pi0(&self) -> f64 {
        self.pi0
    }

    pub fn pi1(&self) -> f64 {
        1.0 - self.pi0
    }

    pub fn prior(&self, label: Label) -> f64 {
        match label {
            Label::Zero => self.pi0,
            Label::One => self.pi1(),
        }
    }

    pub fn with_pi0(mut self, pi0: f64) -> Result<Self> {
        if !(pi0 > 0.0 && pi0 < 1.0) {
            return Err(Error::InvalidPrior(pi0));
        }
        self.pi0 = pi0;
        Ok(self)
    }

    /// Mahalanobis separation `(mu0 - mu1)ᵀ Σ⁻¹ (mu0 - mu1)`.
    pub fn snr(&self) -> f64 {
        self.whiten(&(&self.mu0 - &self.mu1)).norm_squared()
    }

    /// `Σ` as a dense matrix.
    pub fn covariance(&self) -> DMatrix<f64> {
        match &self.factor {
            CovarianceFactor::Identity => DMatrix::identity(self.dim(), self.dim()),
            CovarianceFactor::Lower(l) => l * l.transpose(),
        }
    }

    /// `L z`.
    pub fn apply_factor(&self, z: &DVector<f64>) -> DVector<f64> {
        match &self.factor {
            CovarianceFactor::Identity => z.clone(),
            CovarianceFactor::Lower(l) => l * z,
        }
    }

    /// `L⁻¹ v`.
    pub fn whiten(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.factor {
            CovarianceFactor::Identity => v.clone(),
            CovarianceFactor::Lower(l) => l
                .solve_lower_triangular(v)
                .expect("factor diagonal checked positive at construction"),
        }
    }

    /// `Σ⁻¹ v`.
    pub fn solve_covariance(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.factor {
            CovarianceFactor::Identity => v.clone(),
            CovarianceFactor::Lower(l) => {
                let w = self.whiten(v);
                l.tr_solve_lower_triangular(&w)
                    .expect("factor diagonal checked positive at construction")
            }
        }
    }

    /// `‖β‖_Σ = sqrt(βᵀ Σ β)`.
    pub fn sigma_norm(&self, beta: &DVector<f64>) -> f64 {
        match &self.factor {
            CovarianceFactor::Identity => beta.norm(),
            CovarianceFactor::Lower(l) => l.tr_mul(beta).norm(),
        }
    }
}

/// Linear rule: label 0 iff `βᵀ(x − α) > b`, label 1 otherwise (ties go to label 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearClassifier {
    pub alpha: DVector<f64>,
    pub beta: DVector<f64>,
    pub b: f64,
}

impl LinearClassifier {
    pub fn new(alpha: DVector<f64>, beta: DVector<f64>, b: f64) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::DimensionMismatch {
                expected: beta.len(),
                found: alpha.len(),
            });
        }
        Ok(Self { alpha, beta, b })
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    /// Replaces the threshold. Fitted rules use `ln(n1/n0)`; this is for exploring
    /// other cut-offs (e.g. the Bayes threshold under known test priors).
    pub fn with_threshold(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    /// `βᵀ(x − α)`.
    pub fn score(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        x.iter()
            .zip(self.alpha.iter())
            .zip(self.beta.iter())
            .map(|((xi, ai), bi)| bi * (xi - ai))
            .sum()
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        if self.score(x) > self.b {
            Label::Zero
        } else {
            Label::One
        }
    }
}
