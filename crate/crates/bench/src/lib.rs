//! Shared inputs for the benchmarks.

use lda_shift::{generate_dataset, Dataset, GaussianMixtureModel, Result};

/// Isotropic model at `Δ² = 9` with balanced priors.
pub fn model(p: usize) -> Result<GaussianMixtureModel> {
    GaussianMixtureModel::isotropic(p, 9.0, 0.5)
}

/// Model and training set with `p = ⌈γ n⌉` features and an even class split.
pub fn fixture(gamma: f64, n: usize, seed: u64) -> Result<(GaussianMixtureModel, Dataset)> {
    let p = (gamma * n as f64).ceil() as usize;
    let model = model(p)?;
    let data = generate_dataset(&model, n / 2, n - n / 2, seed)?;
    Ok((model, data))
}
