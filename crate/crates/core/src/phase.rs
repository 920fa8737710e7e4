//! Shape of the risk as a function of the training imbalance `n1/n0`.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{asymptotic_risk, theorem2_balanced_risk};
use crate::config::{combined_gamma, RegimeConfig};
use crate::{Error, Result};

/// Deadband for classifying noise-free closed-form curves.
pub const CLOSED_FORM_EPSILON: f64 = 1e-9;

/// Slack allowed by [`regularized_monotonicity_check`].
pub const MONOTONE_TOL: f64 = 1e-10;

/// Boundaries between the imbalance phases in `γ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseKnots {
    pub gamma_a: f64,
    pub gamma_b: f64,
}

/// `γ_a = 2`, `γ_b = (12 − Δ² + sqrt(Δ⁴ + 40Δ² + 144)) / 8`.
pub fn phase_knots(delta2: f64) -> Result<PhaseKnots> {
    if !(delta2.is_finite() && delta2 >= 0.0) {
        return Err(Error::InvalidDelta(delta2));
    }
    let disc = (delta2 * delta2 + 40.0 * delta2 + 144.0).sqrt();
    Ok(PhaseKnots {
        gamma_a: 2.0,
        gamma_b: (12.0 - delta2 + disc) / 8.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    PhaseI,
    PhaseII,
    /// Above `γ_b`. The upper end of this phase is not characterized, so the
    /// curve shape decides.
    PhaseIIICandidate,
}

pub fn classify_phase(gamma0: f64, delta2: f64) -> Result<Phase> {
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::InvalidGamma(format!(
            "gamma0 = {gamma0} must be positive"
        )));
    }
    let knots = phase_knots(delta2)?;
    for knot in [knots.gamma_a, knots.gamma_b] {
        if (gamma0 - knot).abs() <= 1e-12 * knot.max(1.0) {
            return Err(Error::OnKnot { gamma0, knot });
        }
    }
    Ok(if gamma0 < knots.gamma_a {
        Phase::PhaseI
    } else if gamma0 < knots.gamma_b {
        Phase::PhaseII
    } else {
        Phase::PhaseIIICandidate
    })
}

/// Central difference of the balanced-test asymptotic risk in `γ1` at `γ1 = γ0`,
/// step `1e-5 · γ0`. Positive means the risk falls as `n1/n0` grows past 1.
pub fn derivative_at_balance(gamma0: f64, delta2: f64, lambda: Option<f64>) -> Result<f64> {
    if !(gamma0.is_finite() && gamma0 > 0.0) {
        return Err(Error::InvalidGamma(format!(
            "gamma0 = {gamma0} must be positive"
        )));
    }
    let h = 1e-5 * gamma0;
    let ridge = matches!(lambda, Some(l) if l > 0.0);
    if !ridge {
        let lo = combined_gamma(gamma0, gamma0 - h) - 1.0;
        let hi = combined_gamma(gamma0, gamma0 + h) - 1.0;
        if lo * hi <= 0.0 {
            return Err(Error::InvalidGamma(format!(
                "stencil around gamma0 = {gamma0} straddles gamma = 1"
            )));
        }
    }
    let at = |g1: f64| -> Result<f64> {
        let mut cfg = RegimeConfig::new(gamma0, g1, delta2);
        cfg.lambda = lambda;
        asymptotic_risk(&cfg).map(|r| r.risk)
    };
    Ok((at(gamma0 + h)? - at(gamma0 - h)?) / (2.0 * h))
}

/// Asymptotic risk against the class ratio `n1/n0` at fixed `γ0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImbalanceCurve {
    pub ratio_grid: Vec<f64>,
    pub risks: Vec<f64>,
    /// Ratios dropped because they put `γ` at 1 without a ridge.
    pub skipped: Vec<f64>,
    pub gamma0: f64,
    pub delta2: f64,
    pub lambda: Option<f64>,
    pub pi0: f64,
}

/// Evaluates the risk at `(γ0, γ0 / r)` for every ratio `r ≥ 1` in the grid.
pub fn imbalance_curve(
    gamma0: f64,
    delta2: f64,
    ratio_grid: &[f64],
    lambda: Option<f64>,
    pi0: f64,
) -> Result<ImbalanceCurve> {
    if ratio_grid.is_empty() {
        return Err(Error::InvalidGrid("empty ratio grid".into()));
    }
    if ratio_grid.iter().any(|r| !(r.is_finite() && *r >= 1.0)) {
        return Err(Error::InvalidGrid(
            "ratios must be finite and at least 1".into(),
        ));
    }
    if ratio_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "ratios must be strictly ascending".into(),
        ));
    }
    let mut curve = ImbalanceCurve {
        ratio_grid: Vec::with_capacity(ratio_grid.len()),
        risks: Vec::with_capacity(ratio_grid.len()),
        skipped: Vec::new(),
        gamma0,
        delta2,
        lambda,
        pi0,
    };
    let ridge = matches!(lambda, Some(l) if l > 0.0);
    for &r in ratio_grid {
        let mut cfg = RegimeConfig::new(gamma0, gamma0 / r, delta2).with_pi0(pi0);
        cfg.lambda = lambda;
        if !ridge && cfg.at_interpolation_threshold() {
            cfg.validate_parameters()?;
            curve.skipped.push(r);
            continue;
        }
        curve.ratio_grid.push(r);
        curve.risks.push(asymptotic_risk(&cfg)?.risk);
    }
    if curve.risks.is_empty() {
        return Err(Error::InvalidGamma(
            "every grid point lies at gamma = 1".into(),
        ));
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Behavior {
    /// Falls, then rises.
    I,
    /// Rises, then falls.
    II,
    /// Falls, rises, falls again.
    III,
    Other,
}

/// Run-length-collapsed signs of consecutive differences. A step with
/// `|Δ| ≤ epsilon` inherits the previous sign; leading flat steps are dropped.
pub fn sign_pattern(values: &[f64], epsilon: f64) -> Vec<i8> {
    let mut pattern: Vec<i8> = Vec::new();
    let mut prev: Option<i8> = None;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let s = if d.abs() <= epsilon {
            match prev {
                Some(s) => s,
                None => continue,
            }
        } else if d > 0.0 {
            1
        } else {
            -1
        };
        prev = Some(s);
        if pattern.last() != Some(&s) {
            pattern.push(s);
        }
    }
    pattern
}

pub fn behavior_signature(curve: &ImbalanceCurve, epsilon: f64) -> Result<Behavior> {
    if curve.risks.len() < 8 {
        return Err(Error::CurveTooShort(curve.risks.len()));
    }
    Ok(match sign_pattern(&curve.risks, epsilon).as_slice() {
        [-1, 1] => Behavior::I,
        [1, -1] => Behavior::II,
        [-1, 1, -1] => Behavior::III,
        _ => Behavior::Other,
    })
}

/// Indices `i` with `values[i]` strictly above both neighbors.
pub fn interior_local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

/// Indices `i` with `values[i]` strictly below both neighbors.
pub fn interior_local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] < values[i - 1] && values[i] < values[i + 1])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub monotone: bool,
    /// First index whose risk drops more than [`MONOTONE_TOL`] below its predecessor.
    pub first_violation: Option<usize>,
    pub risks: Vec<f64>,
}

/// Whether the balanced ridge risk is nondecreasing along `gamma_grid`.
pub fn regularized_monotonicity_check(
    delta2: f64,
    lambda: f64,
    gamma_grid: &[f64],
) -> Result<MonotonicityReport> {
    let risks = gamma_grid
        .iter()
        .map(|&g| theorem2_balanced_risk(g, delta2, lambda))
        .collect::<Result<Vec<_>>>()?;
    let first_violation = (1..risks.len()).find(|&i| risks[i] < risks[i - 1] - MONOTONE_TOL);
    Ok(MonotonicityReport {
        monotone: first_violation.is_none(),
        first_violation,
        risks,
    })
}

/// `start, start + step, …` up to `stop` (inclusive when within `1e-12` of a step).
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || stop < start {
        return Vec::new();
    }
    let count = ((stop - start) / step + 1e-12).floor() as usize;
    (0..=count).map(|i| start + i as f64 * step).collect()
}
