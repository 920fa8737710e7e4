use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const HEADER: &str =
    "mode,grid,gamma0,gamma1,delta2,lambda,pi0,n0,n1,p,reps,theory_risk,mc_mean,mc_std,flag";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lda-shift"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let idx = HEADER.split(',').position(|c| c == name).unwrap();
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().to_string())
        .collect()
}

#[test]
fn theory_values() {
    let v = json(&run(&[
        "theory", "--gamma0", "1", "--gamma1", "1", "--delta2", "9",
    ]));
    assert!((v["risk"].as_f64().unwrap() - 0.168_678).abs() < 1e-6);
    assert_eq!(v["regime"], "under");

    let v = json(&run(&[
        "theory", "--gamma0", "1", "--gamma1", "1", "--delta2", "9", "--lambda", "1",
    ]));
    assert!((v["risk"].as_f64().unwrap() - 0.098_534).abs() < 1e-6);
    assert!((v["arg0"].as_f64().unwrap() + 1.289_948).abs() < 1e-6);
    assert_eq!(v["regime"], "regularized");

    let v = json(&run(&[
        "theory", "--gamma0", "5", "--gamma1", "0.625", "--delta2", "9",
    ]));
    assert!((v["risk"].as_f64().unwrap() - 0.248_326).abs() < 1e-6);
    assert_eq!(v["regime"], "under");

    let v = json(&run(&[
        "theory", "--gamma0", "4", "--gamma1", "4", "--delta2", "9",
    ]));
    assert!((v["risk"].as_f64().unwrap() - 0.292_634).abs() < 1e-6);
    assert_eq!(v["regime"], "over");
}

#[test]
fn theory_rejects_the_interpolation_threshold() {
    let out = run(&["theory", "--gamma0", "2", "--gamma1", "2", "--delta2", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        run(&["theory", "--gamma0", "1", "--gamma1", "1", "--delta2", "9", "--pi0", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["theory", "--gamma0", "1"]).status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_manifest_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let js = dir.path().join("g.json");
    let out = run(&[
        "sweep-gamma",
        "--n",
        "60",
        "--ratio",
        "2",
        "--delta2",
        "9",
        "--grid",
        "0.5:1.5:0.5",
        "--reps",
        "3",
        "--out",
        csv.to_str().unwrap(),
        "--json",
        js.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), HEADER);
    assert_eq!(text.lines().count(), 4);
    assert_eq!(column(&text, "flag"), ["", "near_interpolation", ""]);
    assert_eq!(column(&text, "theory_risk")[1], "");
    assert_eq!(column(&text, "n0"), ["20", "20", "20"]);
    assert_eq!(column(&text, "p"), ["30", "60", "90"]);

    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("g.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["master_seed"], 42);
    assert_eq!(manifest["subcommand"], "sweep-gamma");
    let table: Value = serde_json::from_str(&fs::read_to_string(&js).unwrap()).unwrap();
    assert_eq!(table["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn manifest_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("imb.csv");
    let out = run(&[
        "sweep-imbalance",
        "--n0",
        "20",
        "--gamma0",
        "2.5",
        "--ratios",
        "1:3:0.5",
        "--delta2",
        "9",
        "--reps",
        "4",
        "--seed",
        "7",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let again = dir.path().join("again.csv");
    let manifest = dir.path().join("imb.csv.manifest.json");
    let out = run(&[
        "rerun",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());

    // grid values such as 0.1 + 2·0.3 must survive the manifest exactly
    let csv = dir.path().join("g.csv");
    let out = run(&[
        "sweep-gamma",
        "--n",
        "40",
        "--delta2",
        "4",
        "--grid",
        "0.1:0.7:0.3",
        "--reps",
        "2",
        "--lambda",
        "0.3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let manifest = dir.path().join("g.csv.manifest.json");
    let again = dir.path().join("g2.csv");
    assert!(run(&[
        "rerun",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        again.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(fs::read(&csv).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn peak_recipe_theory_column() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("peak.csv");
    let out = run(&[
        "sweep-gamma",
        "--n",
        "200",
        "--ratio",
        "1",
        "--delta2",
        "9",
        "--grid",
        "0.1:5:0.1",
        "--reps",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let grid: Vec<f64> = column(&text, "grid")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let theory: Vec<Option<f64>> = column(&text, "theory_risk")
        .iter()
        .map(|s| s.parse().ok())
        .collect();
    assert_eq!(grid.len(), 50);
    // γ = 1 has no theory value; the curve climbs to each side of it and
    // descends away from it until the second descent bottoms out near γ = 1.7.
    assert!(theory[9].is_none());
    assert_eq!(column(&text, "flag")[9], "near_interpolation");
    let t: Vec<f64> = theory.iter().map(|t| t.unwrap_or(f64::NAN)).collect();
    assert!(t[..9].windows(2).all(|w| w[1] > w[0]));
    assert!(t[10..17].windows(2).all(|w| w[1] < w[0]));
    assert!(t[10] > t[11] && t[8] > t[7]);
}

#[test]
fn ridge_recipe_theory_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ridge.csv");
    let out = run(&[
        "sweep-gamma",
        "--n",
        "60",
        "--ratio",
        "1",
        "--delta2",
        "9",
        "--grid",
        "0.1:5:0.1",
        "--reps",
        "1",
        "--lambda",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let theory: Vec<f64> = column(&fs::read_to_string(&csv).unwrap(), "theory_risk")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(theory.len(), 50);
    assert!(theory.windows(2).all(|w| w[1] >= w[0] - 1e-8));
}

#[test]
fn bad_grids_and_paths() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let base = [
        "sweep-gamma",
        "--n",
        "60",
        "--delta2",
        "9",
        "--reps",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ];
    for grid in ["2:1:1", "1:2", "x"] {
        let mut args = base.to_vec();
        args.extend(["--grid", grid]);
        assert_eq!(run(&args).status.code(), Some(2), "{grid}");
    }
    assert!(!csv.exists());

    let missing = Path::new("/nonexistent-dir/out.csv");
    let out = run(&[
        "sweep-gamma",
        "--n",
        "60",
        "--delta2",
        "9",
        "--reps",
        "1",
        "--grid",
        "0.5",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        run(&["rerun", "--manifest", "/nonexistent-dir/m.json"])
            .status
            .code(),
        Some(3)
    );

    let bogus = dir.path().join("bogus.json");
    fs::write(&bogus, "{}").unwrap();
    assert_eq!(
        run(&["rerun", "--manifest", bogus.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn too_few_samples_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let out = run(&[
        "sweep-imbalance",
        "--n0",
        "2",
        "--gamma0",
        "1",
        "--ratios",
        "0.5",
        "--delta2",
        "9",
        "--reps",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn phase_reports() {
    let v = json(&run(&["phase", "--delta2", "9"]));
    assert_eq!(v["gamma_a"], 2.0);
    assert!((v["gamma_b"].as_f64().unwrap() - 3.398_347).abs() < 1e-6);

    let v = json(&run(&["phase", "--delta2", "9", "--gamma0", "0.5"]));
    assert_eq!(v["phase"], "PhaseI");
    assert_eq!(v["behavior"], "I");
    assert_eq!(v["derivative_sign"], "+");

    let v = json(&run(&["phase", "--delta2", "9", "--gamma0", "5"]));
    assert_eq!(v["phase"], "PhaseIIICandidate");
    assert_eq!(v["behavior"], "III");

    // rises to the γ = 1 peak, falls, then turns up again before r = 10
    let v = json(&run(&["phase", "--delta2", "9", "--gamma0", "2.5"]));
    assert_eq!(v["phase"], "PhaseII");
    assert_eq!(v["derivative_sign"], "-");
    assert_eq!(v["curve_signs"], serde_json::json!([1, -1, 1]));
    assert_eq!(v["skipped_ratios"], serde_json::json!([1.5]));

    let v = json(&run(&[
        "phase", "--delta2", "9", "--gamma0", "2.5", "--lambda", "1",
    ]));
    assert_eq!(v["monotone"], true);
    assert!(v["behavior"] != "II" && v["behavior"] != "III");

    assert_eq!(
        run(&["phase", "--delta2", "9", "--gamma0", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_suites() {
    let out = run(&["check", "--suite", "mp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 3);

    let out = run(&["check", "--suite", "traces"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(!String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn agreement_suite_fast() {
    let out = run(&["check", "--suite", "agreement", "--fast"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);
}
