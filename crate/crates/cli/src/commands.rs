use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use lda_shift::phase::{sign_pattern, CLOSED_FORM_EPSILON};
use lda_shift::suites::{agreement_suite, mp_suite, traces_suite, CheckOutcome};
use lda_shift::{
    asymptotic_risk, behavior_signature, classify_phase, derivative_at_balance, imbalance_curve,
    phase_knots, regularized_monotonicity_check, run_sweep, RegimeConfig, SweepMode, SweepSpec,
};
use serde_json::json;

use crate::grid::parse_grid;
use crate::manifest::{sidecar_path, RunManifest};
use crate::{
    CheckArgs, PhaseArgs, RerunArgs, Suite, SweepCommon, SweepGammaArgs, SweepImbalanceArgs,
    TheoryArgs,
};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<lda_shift::Error> for CliError {
    fn from(e: lda_shift::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CmdResult = Result<ExitCode, CliError>;

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json values serialize")
    );
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn theory(a: TheoryArgs) -> CmdResult {
    let mut cfg = RegimeConfig::new(a.gamma0, a.gamma1, a.delta2).with_pi0(a.pi0);
    cfg.lambda = a.lambda;
    let r = asymptotic_risk(&cfg)?;
    print_json(&json!({ "arg0": r.arg0, "arg1": r.arg1, "risk": r.risk, "regime": r.regime }));
    Ok(ExitCode::SUCCESS)
}

fn build_spec(mode: SweepMode, grid: &str, c: &SweepCommon) -> Result<SweepSpec, CliError> {
    let spec = SweepSpec {
        mode,
        grid: parse_grid(grid).map_err(CliError::Invalid)?,
        delta2: c.delta2,
        pi0: c.pi0,
        lambda: c.lambda,
        reps: c.reps,
        master_seed: c.seed,
        test_size: c.test_size,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn sweep_gamma(a: SweepGammaArgs) -> CmdResult {
    let spec = build_spec(
        SweepMode::Gamma {
            n: a.n,
            ratio: a.ratio,
        },
        &a.grid,
        &a.common,
    )?;
    execute_sweep("sweep-gamma", spec, &a.common.out, a.common.json.as_deref())
}

pub fn sweep_imbalance(a: SweepImbalanceArgs) -> CmdResult {
    let spec = build_spec(
        SweepMode::Imbalance {
            n0: a.n0,
            gamma0: a.gamma0,
        },
        &a.ratios,
        &a.common,
    )?;
    execute_sweep(
        "sweep-imbalance",
        spec,
        &a.common.out,
        a.common.json.as_deref(),
    )
}

fn execute_sweep(
    subcommand: &str,
    spec: SweepSpec,
    csv: &Path,
    json_out: Option<&Path>,
) -> CmdResult {
    let start = Instant::now();
    let table = run_sweep(&spec)?;
    let text = table.to_csv_string()?;
    write_file(csv, text.as_bytes())?;
    if let Some(path) = json_out {
        write_file(path, table.to_json()?.as_bytes())?;
    }
    let manifest = RunManifest {
        subcommand: subcommand.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: spec.master_seed,
        spec,
        csv: csv.to_path_buf(),
        json: json_out.map(Path::to_path_buf),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&sidecar_path(csv), body.as_bytes())?;
    eprintln!("wrote {} rows to {}", table.rows.len(), csv.display());
    Ok(ExitCode::SUCCESS)
}

pub fn rerun(a: RerunArgs) -> CmdResult {
    let text = fs::read_to_string(&a.manifest)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.manifest.display())))?;
    let m: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", a.manifest.display())))?;
    let csv = a.out.unwrap_or(m.csv);
    execute_sweep(&m.subcommand, m.spec, &csv, m.json.as_deref())
}

pub fn phase(a: PhaseArgs) -> CmdResult {
    let knots = phase_knots(a.delta2)?;
    let Some(g0) = a.gamma0 else {
        print_json(&json!({ "gamma_a": knots.gamma_a, "gamma_b": knots.gamma_b }));
        return Ok(ExitCode::SUCCESS);
    };
    let phase = classify_phase(g0, a.delta2)?;
    let derivative = derivative_at_balance(g0, a.delta2, a.lambda)?;
    let ratios = parse_grid(&a.ratios).map_err(CliError::Invalid)?;
    let curve = imbalance_curve(g0, a.delta2, &ratios, a.lambda, 0.5)?;
    let behavior = behavior_signature(&curve, CLOSED_FORM_EPSILON)?;
    let signs = sign_pattern(&curve.risks, CLOSED_FORM_EPSILON);
    let mut out = json!({
        "gamma_a": knots.gamma_a,
        "gamma_b": knots.gamma_b,
        "gamma0": g0,
        "phase": phase,
        "derivative_at_balance": derivative,
        "derivative_sign": if derivative > 0.0 { "+" } else if derivative < 0.0 { "-" } else { "0" },
        "behavior": behavior,
        "curve_signs": signs,
        "skipped_ratios": curve.skipped,
    });
    if let Some(lambda) = a.lambda {
        let grid = lda_shift::phase::linear_grid(0.05, 5.0, 0.05);
        let report = regularized_monotonicity_check(a.delta2, lambda, &grid)?;
        out["lambda"] = json!(lambda);
        out["monotone"] = json!(report.monotone);
        out["first_violation_gamma"] = json!(report.first_violation.map(|i| grid[i]));
    }
    print_json(&out);
    Ok(ExitCode::SUCCESS)
}

pub fn check(a: CheckArgs) -> CmdResult {
    let mut outcomes: Vec<(&str, CheckOutcome)> = Vec::new();
    let mut add = |suite: &'static str, list: Vec<CheckOutcome>| {
        outcomes.extend(list.into_iter().map(|c| (suite, c)));
    };
    if matches!(a.suite, Suite::Mp | Suite::All) {
        add("mp", mp_suite()?);
    }
    if matches!(a.suite, Suite::Traces | Suite::All) {
        add("traces", traces_suite(a.seed)?);
    }
    if matches!(a.suite, Suite::Agreement | Suite::All) {
        add("agreement", agreement_suite(a.fast, a.seed)?);
    }
    let mut failures = 0;
    for (suite, c) in &outcomes {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{suite}] {}: {:.3e} (bound {:.3e})",
            c.name, c.measured, c.bound
        );
        failures += usize::from(!c.passed);
    }
    println!("{} checks, {failures} failed", outcomes.len());
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
