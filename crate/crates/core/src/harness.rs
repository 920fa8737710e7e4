//! Monte Carlo sweeps over the dimension ratio or the class ratio, plus
//! simulation checks of the trace functionals behind the asymptotic formulas.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::asymptotic_risk;
use crate::config::{combined_gamma, RegimeConfig};
use crate::estimation::{fit_lda, fit_regularized_lda, generate_dataset};
use crate::linalg::pinv_trace;
use crate::model::GaussianMixtureModel;
use crate::risk::{conditional_risk, empirical_risk};
use crate::rng::{derive_seed, fill_normal_row, DOMAIN_MATRIX};
use crate::{Error, Result};

/// Header of the CSV written by [`CurveTable::write_csv`].
pub const CSV_HEADER: [&str; 15] = [
    "mode",
    "grid",
    "gamma0",
    "gamma1",
    "delta2",
    "lambda",
    "pi0",
    "n0",
    "n1",
    "p",
    "reps",
    "theory_risk",
    "mc_mean",
    "mc_std",
    "flag",
];

pub const NEAR_INTERPOLATION: &str = "near_interpolation";

/// Points with `γ` in this closed interval are flagged.
pub const NEAR_INTERPOLATION_BAND: (f64, f64) = (0.9, 1.1);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepMode {
    /// Grid over `γ = p/n` at `n` total samples split `1 : ratio`.
    Gamma { n: usize, ratio: f64 },
    /// Grid over `n1/n0` at fixed `n0` and `γ0 = p/n0`.
    Imbalance { n0: usize, gamma0: f64 },
}

impl SweepMode {
    pub fn name(&self) -> &'static str {
        match self {
            SweepMode::Gamma { .. } => "gamma",
            SweepMode::Imbalance { .. } => "imbalance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub grid: Vec<f64>,
    pub delta2: f64,
    pub pi0: f64,
    pub lambda: Option<f64>,
    pub reps: usize,
    pub master_seed: u64,
    /// Score each replication on a sampled test set of this size instead of
    /// the exact conditional risk.
    #[serde(default)]
    pub test_size: Option<usize>,
}

/// Concrete sample sizes and nominal regime for one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub n0: usize,
    pub n1: usize,
    pub p: usize,
    pub config: RegimeConfig,
}

impl GridPoint {
    pub fn gamma(&self) -> f64 {
        self.config.gamma()
    }

    pub fn near_interpolation(&self) -> bool {
        let g = self.gamma();
        g >= NEAR_INTERPOLATION_BAND.0 && g <= NEAR_INTERPOLATION_BAND.1
    }
}

// ⌈x⌉ that ignores rounding noise such as 0.30000000000000004 · 200.
fn ceil_count(x: f64) -> usize {
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as usize
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::InvalidSpec("reps must be at least 1".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidGrid("empty grid".into()));
        }
        if self.grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::InvalidGrid(
                "grid values must be positive and finite".into(),
            ));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("grid must be strictly ascending".into()));
        }
        if !(self.delta2.is_finite() && self.delta2 >= 0.0) {
            return Err(Error::InvalidDelta(self.delta2));
        }
        if !(self.pi0 > 0.0 && self.pi0 < 1.0) {
            return Err(Error::InvalidPrior(self.pi0));
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidLambda(l));
            }
        }
        if self.test_size == Some(0) {
            return Err(Error::InvalidSpec("test_size must be at least 1".into()));
        }
        match self.mode {
            SweepMode::Gamma { n, ratio } => {
                if n < 4 {
                    return Err(Error::InvalidSpec(format!("n = {n} is too small")));
                }
                if !(ratio.is_finite() && ratio > 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "ratio = {ratio} must be positive"
                    )));
                }
            }
            SweepMode::Imbalance { n0, gamma0 } => {
                if n0 < 2 {
                    return Err(Error::TooFewSamples {
                        class: 0,
                        count: n0,
                    });
                }
                if !(gamma0.is_finite() && gamma0 > 0.0) {
                    return Err(Error::InvalidGamma(format!(
                        "gamma0 = {gamma0} must be positive"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sample sizes and nominal `(γ0, γ1)` at grid value `x`.
    pub fn grid_point(&self, x: f64) -> Result<GridPoint> {
        let (n0, n1, p, gamma0, gamma1) = match self.mode {
            SweepMode::Gamma { n, ratio } => {
                let n0 = ((n as f64) / (1.0 + ratio)).round() as usize;
                let n1 = n.saturating_sub(n0);
                let gamma0 = x * (1.0 + ratio);
                (n0, n1, ceil_count(x * n as f64), gamma0, gamma0 / ratio)
            }
            SweepMode::Imbalance { n0, gamma0 } => {
                let n1 = (x * n0 as f64).round() as usize;
                (n0, n1, ceil_count(gamma0 * n0 as f64), gamma0, gamma0 / x)
            }
        };
        for (class, count) in [(0, n0), (1, n1)] {
            if count < 2 {
                return Err(Error::TooFewSamples { class, count });
            }
        }
        if p == 0 {
            return Err(Error::InvalidGrid(format!("grid value {x} gives p = 0")));
        }
        let mut config = RegimeConfig::new(gamma0, gamma1, self.delta2).with_pi0(self.pi0);
        config.lambda = self.lambda;
        Ok(GridPoint { n0, n1, p, config })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub grid: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub n0: usize,
    pub n1: usize,
    pub p: usize,
    pub theory_risk: Option<f64>,
    pub mc_mean: f64,
    pub mc_std: f64,
    pub near_interpolation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub spec: SweepSpec,
    pub rows: Vec<CurveRow>,
}

/// Runs `reps` fits per grid point and aggregates their risks.
///
/// Replication `r` at grid index `i` uses the dataset seed
/// `derive_seed([master_seed, i, r])`, so results do not depend on the thread
/// pool size.
pub fn run_sweep(spec: &SweepSpec) -> Result<CurveTable> {
    spec.validate()?;
    let points = spec
        .grid
        .iter()
        .map(|&x| spec.grid_point(x))
        .collect::<Result<Vec<_>>>()?;
    let models = points
        .iter()
        .map(|pt| GaussianMixtureModel::isotropic(pt.p, spec.delta2, spec.pi0))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..spec.reps).map(move |r| (i, r)))
        .collect();
    let risks = jobs
        .par_iter()
        .map(|&(i, r)| {
            let seed = derive_seed(&[spec.master_seed, i as u64, r as u64]);
            replicate(spec, &points[i], &models[i], seed)
        })
        .collect::<Result<Vec<f64>>>()?;

    let rows = points
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            let sample = &risks[i * spec.reps..(i + 1) * spec.reps];
            let (mc_mean, mc_std) = mean_and_std(sample);
            CurveRow {
                grid: spec.grid[i],
                gamma0: pt.config.gamma0,
                gamma1: pt.config.gamma1,
                n0: pt.n0,
                n1: pt.n1,
                p: pt.p,
                theory_risk: asymptotic_risk(&pt.config).ok().map(|a| a.risk),
                mc_mean,
                mc_std,
                near_interpolation: pt.near_interpolation(),
            }
        })
        .collect();
    Ok(CurveTable {
        spec: spec.clone(),
        rows,
    })
}

fn replicate(
    spec: &SweepSpec,
    point: &GridPoint,
    model: &GaussianMixtureModel,
    seed: u64,
) -> Result<f64> {
    let data = generate_dataset(model, point.n0, point.n1, seed)?;
    let clf = match spec.lambda {
        Some(l) => fit_regularized_lda(&data, l)?,
        None => fit_lda(&data)?,
    };
    match spec.test_size {
        Some(m) => empirical_risk(&clf, model, m, derive_seed(&[seed, 1])),
        None => Ok(conditional_risk(&clf, model)?.risk),
    }
}

/// Mean and sample standard deviation (zero for a single value).
fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Fixed-point rendering with nine significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-6..=15).contains(&exp) {
        return sci;
    }
    let decimals = (8 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

impl CurveTable {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
        for row in &self.rows {
            w.write_record([
                self.spec.mode.name().to_string(),
                format_sig9(row.grid),
                format_sig9(row.gamma0),
                format_sig9(row.gamma1),
                format_sig9(self.spec.delta2),
                opt(self.spec.lambda),
                format_sig9(self.spec.pi0),
                row.n0.to_string(),
                row.n1.to_string(),
                row.p.to_string(),
                self.spec.reps.to_string(),
                opt(row.theory_risk),
                format_sig9(row.mc_mean),
                format_sig9(row.mc_std),
                if row.near_interpolation {
                    NEAR_INTERPOLATION.into()
                } else {
                    String::new()
                },
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }
}

fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut z = DMatrix::zeros(rows, cols);
    let mut buf = vec![0.0; cols];
    for i in 0..rows {
        fill_normal_row(&mut buf, seed, DOMAIN_MATRIX, 0, i as u64);
        for (j, v) in buf.iter().enumerate() {
            z[(i, j)] = *v;
        }
    }
    z
}

/// Relative gap between `tr((ZᵀZ)†)` and `tr((ZZᵀ)†)` for a Gaussian
/// `(n − 2) × p` matrix `Z`.
pub fn wishart_trace_check(p: usize, n: usize, seed: u64) -> Result<f64> {
    if p < 2 || n < 3 {
        return Err(Error::InvalidSpec(format!(
            "need p >= 2 and n >= 3, got p = {p}, n = {n}"
        )));
    }
    let z = gaussian_matrix(n - 2, p, seed);
    let big = pinv_trace(&(z.transpose() * &z));
    let small = pinv_trace(&(&z * z.transpose()));
    Ok((big - small).abs() / big)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceFunctionalErrors {
    /// Relative error of `(1/p) tr(S⁻¹)` against `1/(1−γ)`.
    pub first: f64,
    /// Relative error of `(1/p) tr(S⁻²)` against `1/(1−γ)³`.
    pub second: f64,
}

/// Simulates `S = ZᵀZ/(n−2)` with `p = ⌈γn⌉` and compares the normalized
/// traces of `S⁻¹` and `S⁻²` with their limits.
pub fn trace_functional_check(gamma: f64, n: usize, seed: u64) -> Result<TraceFunctionalErrors> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidGamma(format!(
            "gamma = {gamma} must lie in (0, 1)"
        )));
    }
    let p = ceil_count(gamma * n as f64);
    if p < 2 || n < p + 3 {
        return Err(Error::InvalidSpec(format!(
            "n = {n} is too small for gamma = {gamma}"
        )));
    }
    let m = n - 2;
    let z = gaussian_matrix(m, p, seed);
    let s = (z.transpose() * &z) / m as f64;
    let eig = s.symmetric_eigenvalues();
    let pf = p as f64;
    let t1 = eig.iter().map(|e| 1.0 / e).sum::<f64>() / pf;
    let t2 = eig.iter().map(|e| 1.0 / (e * e)).sum::<f64>() / pf;
    let b = 1.0 / (1.0 - gamma);
    let b2 = b * b * b;
    Ok(TraceFunctionalErrors {
        first: (t1 - b).abs() / b,
        second: (t2 - b2).abs() / b2,
    })
}

/// Combined `γ` for a grid point of an imbalance sweep.
pub fn imbalance_gamma(gamma0: f64, ratio: f64) -> f64 {
    combined_gamma(gamma0, gamma0 / ratio)
}
