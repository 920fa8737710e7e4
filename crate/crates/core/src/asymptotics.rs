//! Closed-form limiting risk of empirical and ridge LDA in the proportional
//! regime, and the Marchenko–Pastur Stieltjes transform they rely on.
//!
//! For class `ℓ` the limiting standardized margin is
//!
//! ```text
//! arg_ℓ = (h_ℓ · B + (−1)^ℓ ln(γ0/γ1)) / (k · sqrt(B'))
//! h_0 = −(Δ² + γ1 − γ0)/2,   h_1 = −(Δ² + γ0 − γ1)/2,   k = sqrt(Δ² + γ0 + γ1)
//! ```
//!
//! where `(B, B')` are the limits of `p⁻¹ tr(W†)` and `p⁻¹ tr((W†)²)` for the
//! whitened pooled scatter `W`:
//!
//! * `γ < 1`: `B = 1/(1−γ)`, `B' = 1/(1−γ)³`
//! * `γ > 1`: `B = 1/(γ(γ−1))`, `B' = 1/(γ−1)³`
//! * ridge `λ > 0`: `B = m(−λ)`, `B' = m'(−λ)` with `m` the MP transform at ratio `γ`.

use serde::{Deserialize, Serialize};

use crate::config::{RegimeConfig, GAMMA_ONE_TOL};
use crate::normal::std_normal_cdf;
use crate::{Error, Result};

/// Radicands this close to zero are clamped before the square root.
const RADICAND_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Under,
    Over,
    Regularized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRisk {
    pub arg0: f64,
    pub arg1: f64,
    pub risk: f64,
    pub regime: Regime,
    /// Set when a ridge evaluation sits at `γ = 1`, which the unregularized theory excludes.
    pub at_interpolation_threshold: bool,
}

fn mp_radical(gamma: f64, zeta: f64) -> f64 {
    let r = (zeta - gamma - 1.0).powi(2) - 4.0 * gamma;
    if r < 0.0 && r > -RADICAND_CLAMP {
        0.0
    } else {
        r.sqrt()
    }
}

fn check_mp_args(gamma: f64, zeta: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidGamma(format!(
            "MP ratio {gamma} must be positive"
        )));
    }
    if zeta.is_nan() || zeta > 0.0 {
        return Err(Error::InvalidLambda(-zeta));
    }
    if zeta == 0.0 && gamma >= 1.0 {
        return Err(Error::AtomAtZero(gamma));
    }
    Ok(())
}

/// `m(ζ) = ∫ dF_γ(s) / (s − ζ)` for `ζ ≤ 0`.
///
/// Uses `m(ζ) = 2 / (1 − γ − ζ + sqrt((ζ − γ − 1)² − 4γ))`, which is the
/// textbook `(1 − γ − ζ − sqrt(·)) / (2γζ)` with the cancellation removed. For
/// `γ > 1` it carries the `(1 − 1/γ)/(−ζ)` atom at zero.
pub fn mp_stieltjes(gamma: f64, zeta: f64) -> Result<f64> {
    check_mp_args(gamma, zeta)?;
    if zeta == 0.0 {
        return Ok(1.0 / (1.0 - gamma));
    }
    Ok(2.0 / (1.0 - gamma - zeta + mp_radical(gamma, zeta)))
}

/// `m'(ζ) = ∫ dF_γ(s) / (s − ζ)²` for `ζ ≤ 0`.
pub fn mp_stieltjes_deriv(gamma: f64, zeta: f64) -> Result<f64> {
    check_mp_args(gamma, zeta)?;
    if zeta == 0.0 {
        return Ok((1.0 - gamma).powi(-3));
    }
    let root = mp_radical(gamma, zeta);
    let denom = 1.0 - gamma - zeta + root;
    Ok(2.0 * (1.0 + (1.0 + gamma - zeta) / root) / (denom * denom))
}

/// Class-wise mean-noise numerators `h_0`, `h_1`.
fn numerators(cfg: &RegimeConfig) -> [f64; 2] {
    let d = cfg.gamma0 - cfg.gamma1;
    [-0.5 * (cfg.delta2 - d), -0.5 * (cfg.delta2 + d)]
}

fn assemble(cfg: &RegimeConfig, b: f64, b_prime: f64, regime: Regime) -> AsymptoticRisk {
    let [h0, h1] = numerators(cfg);
    let log_ratio = cfg.gamma0.ln() - cfg.gamma1.ln();
    let scale = (cfg.delta2 + (cfg.gamma0 + cfg.gamma1)).sqrt() * b_prime.sqrt();
    let arg0 = (h0 * b + log_ratio) / scale;
    let arg1 = (h1 * b - log_ratio) / scale;
    AsymptoticRisk {
        arg0,
        arg1,
        risk: cfg.pi0 * std_normal_cdf(arg0) + cfg.pi1() * std_normal_cdf(arg1),
        regime,
        at_interpolation_threshold: cfg.at_interpolation_threshold(),
    }
}

/// Limiting risk of the unregularized fit. `cfg.lambda` is ignored.
pub fn theorem1_risk(cfg: &RegimeConfig) -> Result<AsymptoticRisk> {
    let cfg = cfg.without_lambda();
    cfg.validate()?;
    let gamma = cfg.gamma();
    let out = if gamma < 1.0 {
        let c = 1.0 - gamma;
        assemble(&cfg, 1.0 / c, c.powi(-3), Regime::Under)
    } else {
        let c = gamma - 1.0;
        assemble(&cfg, 1.0 / (gamma * c), c.powi(-3), Regime::Over)
    };
    Ok(out)
}

/// Balanced training and test data (`γ0 = γ1 = 2γ`, `π0 = 1/2`).
pub fn theorem1_balanced_risk(gamma: f64, delta2: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma > 0.0) || (gamma - 1.0).abs() < GAMMA_ONE_TOL {
        return Err(Error::InvalidGamma(format!("balanced gamma = {gamma}")));
    }
    if !(delta2.is_finite() && delta2 >= 0.0) {
        return Err(Error::InvalidDelta(delta2));
    }
    let spread = 2.0 * (delta2 + 4.0 * gamma).sqrt();
    let arg = if gamma < 1.0 {
        -delta2 * (1.0 - gamma).sqrt() / spread
    } else {
        -delta2 * (gamma - 1.0).sqrt() / (gamma * spread)
    };
    Ok(std_normal_cdf(arg))
}

/// Limiting risk of the ridge fit; requires `cfg.lambda > 0`.
pub fn theorem2_risk(cfg: &RegimeConfig) -> Result<AsymptoticRisk> {
    let lambda = match cfg.lambda {
        Some(l) if l.is_finite() && l > 0.0 => l,
        Some(l) => return Err(Error::InvalidLambda(l)),
        None => return Err(Error::InvalidLambda(f64::NAN)),
    };
    cfg.validate()?;
    let gamma = cfg.gamma();
    let m = mp_stieltjes(gamma, -lambda)?;
    let dm = mp_stieltjes_deriv(gamma, -lambda)?;
    Ok(assemble(cfg, m, dm, Regime::Regularized))
}

/// Dispatches on `cfg.lambda`: ridge theory when present and positive, plain otherwise.
pub fn asymptotic_risk(cfg: &RegimeConfig) -> Result<AsymptoticRisk> {
    match cfg.lambda {
        Some(l) if l > 0.0 => theorem2_risk(cfg),
        Some(l) if l < 0.0 || !l.is_finite() => Err(Error::InvalidLambda(l)),
        _ => theorem1_risk(cfg),
    }
}

/// Balanced ridge risk as a function of `γ` alone (`γ0 = γ1 = 2γ`, `π0 = 1/2`).
pub fn theorem2_balanced_risk(gamma: f64, delta2: f64, lambda: f64) -> Result<f64> {
    let cfg = RegimeConfig::new(2.0 * gamma, 2.0 * gamma, delta2).with_lambda(lambda);
    theorem2_risk(&cfg).map(|r| r.risk)
}
