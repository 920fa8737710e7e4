//! Fisher linear discriminant analysis under label shift.
//!
//! Exact risk of a fitted linear rule under a two-class Gaussian model, the
//! high-dimensional limit of that risk for the plain and ridge estimators, the
//! shape of the risk against the class ratio, and a Monte Carlo harness that
//! compares the two.

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod normal;
pub mod phase;
pub mod risk;
pub mod rng;
pub mod suites;

pub use asymptotics::{
    asymptotic_risk, mp_stieltjes, mp_stieltjes_deriv, theorem1_balanced_risk, theorem1_risk,
    theorem2_balanced_risk, theorem2_risk, AsymptoticRisk, Regime,
};
pub use config::{combined_gamma, validate_config, RegimeConfig};
pub use error::{Error, Result};
pub use estimation::{bayes_classifier, fit_lda, fit_regularized_lda, generate_dataset, Dataset};
pub use harness::{
    run_sweep, trace_functional_check, wishart_trace_check, CurveRow, CurveTable, SweepMode,
    SweepSpec,
};
pub use model::{CovarianceFactor, GaussianMixtureModel, Label, LinearClassifier};
pub use normal::{std_normal_cdf, std_normal_pdf};
pub use phase::{
    behavior_signature, classify_phase, derivative_at_balance, imbalance_curve, phase_knots,
    regularized_monotonicity_check, Behavior, ImbalanceCurve, Phase, PhaseKnots,
};
pub use risk::{conditional_risk, empirical_risk, RiskReport};
