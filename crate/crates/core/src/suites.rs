//! Named numerical checks, grouped the way the command line runs them.

use serde::Serialize;

use crate::asymptotics::{mp_stieltjes, mp_stieltjes_deriv};
use crate::harness::{
    run_sweep, trace_functional_check, wishart_trace_check, SweepMode, SweepSpec,
};
use crate::phase::linear_grid;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            passed: measured <= bound,
        }
    }
}

pub const MP_GAMMAS_UNDER: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const MP_DERIV_GAMMAS: [f64; 12] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.5, 2.0, 5.0];
pub const MP_DERIV_ZETAS: [f64; 3] = [-0.1, -1.0, -10.0];

/// Values at the origin and a central-difference check of the derivative.
pub fn mp_suite() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut worst_m: f64 = 0.0;
    let mut worst_dm: f64 = 0.0;
    for &g in &MP_GAMMAS_UNDER {
        let b = 1.0 / (1.0 - g);
        worst_m = worst_m.max((mp_stieltjes(g, 0.0)? - b).abs() / b);
        worst_dm = worst_dm.max((mp_stieltjes_deriv(g, 0.0)? - b * b * b).abs() / (b * b * b));
    }
    out.push(CheckOutcome::at_most("m(0) = 1/(1-gamma)", worst_m, 1e-12));
    out.push(CheckOutcome::at_most(
        "m'(0) = 1/(1-gamma)^3",
        worst_dm,
        1e-12,
    ));

    let mut worst_fd: f64 = 0.0;
    for &g in &MP_DERIV_GAMMAS {
        for &z in &MP_DERIV_ZETAS {
            let h = 1e-5;
            let fd = (mp_stieltjes(g, z + h)? - mp_stieltjes(g, z - h)?) / (2.0 * h);
            let d = mp_stieltjes_deriv(g, z)?;
            worst_fd = worst_fd.max((fd - d).abs() / d.abs());
        }
    }
    out.push(CheckOutcome::at_most(
        "m' matches finite differences",
        worst_fd,
        1e-6,
    ));
    Ok(out)
}

pub fn traces_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (p, n, bound) in [(2, 4, 1e-12), (50, 30, 1e-8), (200, 100, 1e-7)] {
        out.push(CheckOutcome::at_most(
            format!("wishart trace identity p={p} n={n}"),
            wishart_trace_check(p, n, seed)?,
            bound,
        ));
    }
    for (gamma, bound) in [(0.5, 0.05), (0.1, 0.02)] {
        let e = trace_functional_check(gamma, 2000, seed)?;
        out.push(CheckOutcome::at_most(
            format!("tr(S^-1)/p gamma={gamma} n=2000"),
            e.first,
            bound,
        ));
        out.push(CheckOutcome::at_most(
            format!("tr(S^-2)/p gamma={gamma} n=2000"),
            e.second,
            bound,
        ));
    }
    Ok(out)
}

pub const PEAKING_DELTA2: [f64; 3] = [9.0, 16.0, 25.0];
pub const PEAKING_GRID: [f64; 8] = [0.25, 0.5, 0.75, 1.25, 1.5, 2.0, 3.0, 4.0];
pub const IMBALANCE_GAMMA0: [f64; 3] = [0.5, 2.5, 5.0];

/// Largest `|mc_mean − theory|` near and away from the peak for one balanced
/// dimension sweep at `n = 200`.
pub fn peaking_deviation(delta2: f64, reps: usize, seed: u64) -> Result<(f64, f64)> {
    let table = run_sweep(&SweepSpec {
        mode: SweepMode::Gamma { n: 200, ratio: 1.0 },
        grid: PEAKING_GRID.to_vec(),
        delta2,
        pi0: 0.5,
        lambda: None,
        reps,
        master_seed: seed,
        test_size: None,
    })?;
    let (mut near, mut far) = (0.0f64, 0.0f64);
    for row in &table.rows {
        let dev = (row.mc_mean - row.theory_risk.unwrap_or(f64::NAN)).abs();
        let dev = if dev.is_nan() { f64::INFINITY } else { dev };
        if (row.grid - 1.0).abs() >= 0.5 {
            far = far.max(dev);
        } else {
            near = near.max(dev);
        }
    }
    Ok((near, far))
}

/// Largest `|mc_mean − theory|` over the unflagged points of an imbalance
/// sweep at `n0 = 40`, `Δ² = 9`, ratios `1..10` in steps of `0.5`.
pub fn imbalance_deviation(gamma0: f64, reps: usize, seed: u64) -> Result<f64> {
    let table = run_sweep(&SweepSpec {
        mode: SweepMode::Imbalance { n0: 40, gamma0 },
        grid: linear_grid(1.0, 10.0, 0.5),
        delta2: 9.0,
        pi0: 0.5,
        lambda: None,
        reps,
        master_seed: seed,
        test_size: None,
    })?;
    Ok(table
        .rows
        .iter()
        .filter(|r| !r.near_interpolation)
        .map(|r| {
            r.theory_risk
                .map_or(f64::INFINITY, |t| (r.mc_mean - t).abs())
        })
        .fold(0.0, f64::max))
}

/// Monte Carlo against theory. `fast` cuts replications to 25 and doubles the
/// tolerances.
pub fn agreement_suite(fast: bool, seed: u64) -> Result<Vec<CheckOutcome>> {
    let (scale, reps_gamma, reps_imb) = if fast { (2.0, 25, 25) } else { (1.0, 100, 200) };
    let mut out = Vec::new();
    for &d in &PEAKING_DELTA2 {
        let (near, far) = peaking_deviation(d, reps_gamma, seed)?;
        out.push(CheckOutcome::at_most(
            format!("balanced sweep delta2={d} |gamma-1|<0.5"),
            near,
            0.03 * scale,
        ));
        out.push(CheckOutcome::at_most(
            format!("balanced sweep delta2={d} |gamma-1|>=0.5"),
            far,
            0.02 * scale,
        ));
    }
    for &g0 in &IMBALANCE_GAMMA0 {
        let dev = imbalance_deviation(g0, reps_imb, seed)?;
        out.push(CheckOutcome::at_most(
            format!("imbalance sweep gamma0={g0}"),
            dev,
            0.04 * scale,
        ));
    }
    Ok(out)
}
