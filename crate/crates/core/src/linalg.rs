//! Rank-revealing pseudo-inverse helpers.

use nalgebra::{DMatrix, DVector};

/// Eigen-pairs of a scatter matrix `XᵀX / divisor`, obtained from the thin SVD of
/// `X` so that near-null directions are not polluted by squaring `X`.
#[derive(Debug, Clone)]
pub struct ScatterSpectrum {
    /// Eigenvalues `s_i² / divisor`, one per column of `vectors`.
    pub eigenvalues: Vec<f64>,
    /// `p × r` matrix of right singular vectors of `X`.
    pub vectors: DMatrix<f64>,
    /// Eigenvalues at or below this are treated as zero.
    pub cutoff: f64,
}

impl ScatterSpectrum {
    /// Cut-off `τ = max(p, divisor) · ε · λ_max`.
    pub fn from_data(x: &DMatrix<f64>, divisor: f64) -> Self {
        let p = x.ncols();
        let svd = x.clone().svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let eigenvalues: Vec<f64> = svd
            .singular_values
            .iter()
            .map(|s| s * s / divisor)
            .collect();
        let max = eigenvalues.iter().copied().fold(0.0, f64::max);
        let cutoff = (p as f64).max(divisor) * f64::EPSILON * max;
        Self {
            eigenvalues,
            vectors: v_t.transpose(),
            cutoff,
        }
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&e| e > self.cutoff)
            .count()
    }

    /// `(XᵀX / divisor)† v`.
    pub fn pinv_apply(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.vectors.nrows());
        for (i, &e) in self.eigenvalues.iter().enumerate() {
            if e > self.cutoff {
                let col = self.vectors.column(i);
                let coef = col.dot(v) / e;
                out.axpy(coef, &col, 1.0);
            }
        }
        out
    }
}

/// Singular values of `a` that survive the cut-off `max(rows, cols) · ε · σ_max`.
pub fn retained_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let s = a.singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    let cutoff = (a.nrows().max(a.ncols()) as f64) * f64::EPSILON * max;
    s.iter().copied().filter(|&x| x > cutoff).collect()
}

/// `tr(a†)` for a symmetric positive semidefinite matrix.
pub fn pinv_trace(a: &DMatrix<f64>) -> f64 {
    retained_singular_values(a).iter().map(|s| 1.0 / s).sum()
}
