//! Asymptotic regime parameters.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Half-width of the band around `gamma == 1` rejected by the unregularized
/// asymptotic evaluators.
pub const GAMMA_ONE_TOL: f64 = 1e-9;

/// Proportional-limit regime: `p/n0 -> gamma0`, `p/n1 -> gamma1`, SNR `delta2`,
/// test prior `pi0`, and an optional ridge level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeConfig {
    pub gamma0: f64,
    pub gamma1: f64,
    pub delta2: f64,
    pub pi0: f64,
    pub lambda: Option<f64>,
}

impl RegimeConfig {
    /// Balanced test priors, no ridge.
    pub fn new(gamma0: f64, gamma1: f64, delta2: f64) -> Self {
        Self {
            gamma0,
            gamma1,
            delta2,
            pi0: 0.5,
            lambda: None,
        }
    }

    pub fn with_pi0(mut self, pi0: f64) -> Self {
        self.pi0 = pi0;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn without_lambda(mut self) -> Self {
        self.lambda = None;
        self
    }

    /// Overall aspect ratio `gamma0 * gamma1 / (gamma0 + gamma1)`, the limit of `p/n`.
    pub fn gamma(&self) -> f64 {
        combined_gamma(self.gamma0, self.gamma1)
    }

    pub fn pi1(&self) -> f64 {
        1.0 - self.pi0
    }

    /// True when `gamma` sits within [`GAMMA_ONE_TOL`] of the interpolation threshold.
    pub fn at_interpolation_threshold(&self) -> bool {
        (self.gamma() - 1.0).abs() < GAMMA_ONE_TOL
    }

    /// Checks every invariant; the first failing one is reported.
    pub fn validate(&self) -> Result<()> {
        self.validate_parameters()?;
        let ridge_active = matches!(self.lambda, Some(l) if l > 0.0);
        if !ridge_active && self.at_interpolation_threshold() {
            return Err(Error::InvalidGamma(format!(
                "gamma = {} is excluded without regularization",
                self.gamma()
            )));
        }
        Ok(())
    }

    /// Invariants that do not depend on the regime (everything except `gamma != 1`).
    pub(crate) fn validate_parameters(&self) -> Result<()> {
        for (name, g) in [("gamma0", self.gamma0), ("gamma1", self.gamma1)] {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::InvalidGamma(format!(
                    "{name} = {g} must be finite and positive"
                )));
            }
        }
        if !(self.delta2.is_finite() && self.delta2 >= 0.0) {
            return Err(Error::InvalidDelta(self.delta2));
        }
        if !(self.pi0 > 0.0 && self.pi0 < 1.0) {
            return Err(Error::InvalidPrior(self.pi0));
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::InvalidLambda(l));
            }
        }
        Ok(())
    }
}

pub fn combined_gamma(gamma0: f64, gamma1: f64) -> f64 {
    gamma0 * gamma1 / (gamma0 + gamma1)
}

/// Free-function form of [`RegimeConfig::validate`].
pub fn validate_config(cfg: &RegimeConfig) -> Result<()> {
    cfg.validate()
}
