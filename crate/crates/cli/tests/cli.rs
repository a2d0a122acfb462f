use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compactnet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn compactnet")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn gaussians(p: f64, weight: &str, count: usize) -> String {
    let members: Vec<String> = (0..count)
        .map(|k| {
            format!(
                r#"{{"label": "g{k}", "shape": {{"gaussian": {{"center": [{c}], "sigma": 0.5, "amplitude": 1.0}}}}}}"#,
                c = -0.5 + 0.1 * k as f64
            )
        })
        .collect();
    format!(
        r#"{{"grid": {{"dim": 1, "box_level": 2, "cell_exp": -9}},
            "space": {{"p": {p}, "weight": {weight}}},
            "members": [{}]}}"#,
        members.join(",")
    )
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zero_family_has_zero_curves() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "zero.json",
        r#"{"grid": {"dim": 1, "box_level": 1, "cell_exp": -5},
            "space": {"p": 2.0, "weight": {"power": 0.5}},
            "members": [{"shape": "zero"}, {"shape": "zero"}]}"#,
    );
    let out_dir = dir.path().join("m");
    let out = run(&[
        "moduli",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("moduli.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows.len() > 4);
    for row in rows {
        let value: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(value, 0.0, "{row}");
    }
    let json = read_json(&out_dir.join("moduli.json"));
    assert!(json["cstar"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn malformed_spec_names_the_key() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "bad.json",
        r#"{"grid": {"dim": 1, "box_level": 1, "cell_exp": -5},
            "space": {"p": 2.0, "wieght": {"power": 0.5}},
            "members": [{"shape": "zero"}]}"#,
    );
    let out = run(&["moduli", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("wieght"), "{}", stderr(&out));
}

#[test]
fn negative_exponent_is_a_model_violation() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "neg.json",
        &gaussians(-1.0, r#"{"constant": 1.0}"#, 2),
    );
    let out = run(&["moduli", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn singleton_net_and_validate_round_trip() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "one.json",
        &gaussians(2.0, r#"{"power": 0.5}"#, 1),
    );
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "net",
        "--spec",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.1",
        "--relative",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json = read_json(&cert);
    assert_eq!(json["net_elements"].as_array().unwrap().len(), 1);

    let report = dir.path().join("report.json");
    let out = run(&[
        "validate",
        "--spec",
        spec.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(read_json(&report)["passed"], true);
}

#[test]
fn validation_against_another_family_exits_one() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "a.json",
        &gaussians(2.0, r#"{"constant": 1.0}"#, 4),
    );
    let other = write_spec(
        dir.path(),
        "b.json",
        &gaussians(2.0, r#"{"constant": 3.0}"#, 4),
    );
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "net",
        "--spec",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.05",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&[
        "validate",
        "--spec",
        other.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn quasi_banach_net_records_the_transfer() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "half.json",
        &gaussians(0.5, r#"{"power": 0.5}"#, 4),
    );
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "net",
        "--spec",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.2",
        "--relative",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json = read_json(&cert);
    let quasi = &json["quasi"];
    assert!(quasi.is_object());
    let out = run(&[
        "validate",
        "--spec",
        spec.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn tiny_epsilon_is_a_hypothesis_failure() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "g.json",
        &gaussians(2.0, r#"{"constant": 1.0}"#, 3),
    );
    let out = run(&["net", "--spec", spec.to_str().unwrap(), "--epsilon", "1e-9"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("select_mesh"), "{}", stderr(&out));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "g.json",
        &gaussians(2.0, r#"{"power": 0.5}"#, 6),
    );
    let args = [
        "net",
        "--spec",
        spec.to_str().unwrap(),
        "--epsilon",
        "0.05",
        "--relative",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn weight_verdicts() {
    let dir = TempDir::new().unwrap();
    let flat = write_spec(
        dir.path(),
        "flat.json",
        &gaussians(2.0, r#"{"constant": 2.0}"#, 1),
    );
    let out = run(&["weight", "--spec", flat.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["b5_star"], "holds");
    assert_eq!(report["ap"].as_f64().unwrap(), 1.0);
    assert_eq!(report["a1"].as_f64().unwrap(), 1.0);

    // |x|^(n(p-1)+1) with n = 1, p = 2: the dual weight |x|^-2 is not integrable near 0
    let steep = write_spec(
        dir.path(),
        "steep.json",
        &gaussians(2.0, r#"{"power": 2.0}"#, 1),
    );
    let out = run(&["weight", "--spec", steep.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_ne!(report["b5_star"], "holds");
}

#[test]
fn blowup_slope_follows_the_exponent() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("b");
    let out = run(&[
        "experiments",
        "blowup",
        "--p",
        "2",
        "--cell-exp",
        "-10",
        "--n-list",
        "4,8,16,32,64",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json = read_json(&out_dir.join("blowup.json"));
    let slope = json["report"]["slope"].as_f64().unwrap();
    assert!((slope - 0.5).abs() < 0.01, "slope {slope}");
    let csv = std::fs::read_to_string(out_dir.join("blowup.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn completeness_run_has_k_rows() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("c");
    let out = run(&[
        "experiments",
        "completeness",
        "--p",
        "1.5",
        "--k",
        "10",
        "--mode",
        "geometric",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let json = read_json(&out_dir.join("completeness.json"));
    assert_eq!(json["holds"], true);
    assert_eq!(json["report"]["rows"].as_array().unwrap().len(), 10);
}

#[test]
fn unknown_experiment_exits_two() {
    let out = run(&["experiments", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
