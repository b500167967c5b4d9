//! End-to-end tests of the command-line surface: file formats, flag
//! validation, exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hspline"))
}

#[test]
fn interpolate_roundtrip_via_csv() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let values = dir.path().join("values.csv");
    let eval = dir.path().join("eval.csv");
    let out = dir.path().join("out.csv");

    // 6 generic sites, linear data f = 1 + 2x - y
    let sites: [(f64, f64); 6] = [
        (0.1, 0.2),
        (0.9, 0.15),
        (0.5, 0.75),
        (0.2, 0.85),
        (0.67, 0.43),
        (0.35, 0.55),
    ];
    let mut pts = String::from("x1,x2\n");
    let mut vals = String::from("value\n");
    for (x, y) in sites {
        pts.push_str(&format!("{x},{y}\n"));
        vals.push_str(&format!("{}\n", 1.0 + 2.0 * x - y));
    }
    std::fs::write(&points, pts).unwrap();
    std::fs::write(&values, vals).unwrap();
    std::fs::write(&eval, "x1,x2\n0.25,0.5\n0.8,0.1\n").unwrap();

    let output = bin()
        .args(["interpolate", "--points"])
        .arg(&points)
        .arg("--values")
        .arg(&values)
        .args(["--n", "2", "--lambda", "2", "--c", "1", "--eval"])
        .arg(&eval)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,s"));
    // linear data is reproduced exactly by the polynomial part
    for (line, (x, y)) in lines.zip([(0.25f64, 0.5f64), (0.8, 0.1)]) {
        let s: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(
            (s - (1.0 + 2.0 * x - y)).abs() < 1e-8,
            "line {line}: s = {s}"
        );
    }
}

#[test]
fn interpolate_rejects_dimension_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    std::fs::write(&points, "x1,x2\n0,0\n1,0\n0,1\n").unwrap();
    let values = dir.path().join("values.csv");
    std::fs::write(&values, "value\n0\n1\n2\n").unwrap();
    let output = bin()
        .args(["interpolate", "--points"])
        .arg(&points)
        .arg("--values")
        .arg(&values)
        .args(["--n", "4", "--lambda", "2", "--c", "1", "--eval"])
        .arg(&points)
        .arg("--out")
        .arg(dir.path().join("out.csv"))
        .output()
        .unwrap();
    assert!(!output.status.success());
}

#[test]
fn bound_requires_exactly_one_spacing() {
    let output = bin()
        .args([
            "bound", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1", "--fnorm", "1",
        ])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let output = bin()
        .args([
            "bound", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1", "--fnorm", "1",
            "--delta", "0.1", "--fill", "0.1",
        ])
        .output()
        .unwrap();
    assert!(!output.status.success());
}

#[test]
fn bound_hypothesis_violation_fails_without_force() {
    let args = [
        "bound", "--n", "2", "--lambda", "2", "--c", "1", "--b0", "1", "--fnorm", "1", "--delta",
        "0.25",
    ];
    let output = bin().args(args).output().unwrap();
    assert!(!output.status.success());
    let text = String::from_utf8_lossy(&output.stderr);
    assert!(text.contains("delta_0"), "{text}");

    let output = bin().args(args).arg("--force-hypothesis").output().unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["evaluation"]["forced"], serde_json::json!(true));
    assert_eq!(doc["evaluation"]["hypothesis_ok"], serde_json::json!(false));
}

#[test]
fn constants_rejects_odd_dimension() {
    let output = bin()
        .args([
            "constants",
            "--n",
            "3",
            "--lambda",
            "2",
            "--c",
            "1",
            "--b0",
            "1",
        ])
        .output()
        .unwrap();
    assert!(!output.status.success());
}

#[test]
fn constants_floats_use_17_significant_digits() {
    let output = bin()
        .args([
            "constants",
            "--n",
            "2",
            "--lambda",
            "2",
            "--c",
            "1",
            "--b0",
            "1",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(
        text.contains("3.1415926535897931e0"),
        "alpha_n must carry 17 significant digits: {text}"
    );
}

#[test]
fn convergence_writes_report_and_levels_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{
            "n": 2, "lambda": 2, "c": 1.0, "b0": 1.0,
            "levels": 3, "delta1": 0.5,
            "target": {"kind": "polynomial", "coeffs": [1.0, 2.0, -1.0]},
            "eval_resolution": 21, "fill_resolution": 31,
            "seed": 3
        }"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let output = bin()
        .args(["convergence", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["degenerate"], serde_json::json!(true));
    let levels = std::fs::read_to_string(dir.path().join("levels.csv")).unwrap();
    assert!(levels.starts_with("delta,N,fill_upper,max_error,condition\n"));
    assert_eq!(levels.lines().count(), 4); // header + 3 levels

    // stdout report equals the file
    assert_eq!(
        String::from_utf8_lossy(&output.stdout),
        std::fs::read_to_string(&out).unwrap()
    );
}

#[test]
fn convergence_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{
            "n": 2, "lambda": 2, "c": 1.0, "b0": 1.0,
            "levels": 3, "delta1": 0.5,
            "target": {"kind": "polynomial", "coeffs": [1.0]},
            "eval_resolution": 21, "fill_resolution": 31,
            "seed": 3
        }"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let output = bin()
        .current_dir(dir.path())
        .args(["convergence", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .args(["--seed", "9", "--delta1", "0.25"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], serde_json::json!(9));
    assert_eq!(report["config"]["delta1"], serde_json::json!(0.25));
}

#[test]
fn verify_lemma23_exits_zero() {
    let output = bin()
        .args(["verify", "--suite", "lemma23"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(doc["pass"], serde_json::json!(true));
}

#[test]
fn verify_rejects_unknown_suite_and_grid() {
    assert!(!bin()
        .args(["verify", "--suite", "everything"])
        .output()
        .unwrap()
        .status
        .success());
    assert!(!bin()
        .args(["verify", "--suite", "lemma23", "--grid", "huge"])
        .output()
        .unwrap()
        .status
        .success());
}
