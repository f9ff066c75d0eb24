use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sewing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sewing"))
        .args(args)
        .env_remove("SEWING_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = sewing(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn calibrate_is_deterministic() {
    let args = ["calibrate", "--shape", "unit_circle", "--n", "100000", "--reps", "50", "--seed", "7"];
    let a = sewing(&args);
    let b = sewing(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["counting"], "incidence");
    assert!((v["alpha_hat"].as_f64().unwrap() - 1.182).abs() < 0.02);
}

#[test]
fn exit_codes() {
    assert_eq!(sewing(&["--help"]).status.code(), Some(0));
    assert_eq!(sewing(&["--version"]).status.code(), Some(0));
    assert_eq!(sewing(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(sewing(&["calibrate", "--n", "1000"]).status.code(), Some(1), "seed is required");
    assert_eq!(sewing(&["estimate", "--shape", "cardioid", "--alpha-const", "-1"]).status.code(), Some(1));
    assert_eq!(sewing(&["estimate", "--shape", "no_such_shape", "--seed", "1"]).status.code(), Some(1));
    let out = sewing(&["estimate", "--input", "/definitely/missing.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn estimate_cardioid_length() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "estimate", "--shape", "cardioid", "--field", "one", "--n", "100000", "--seed", "1", "--alpha-const", "1.1820",
        "--out-dir", path(dir.path()),
    ];
    let v = ok_json(&args);
    let est = v["calibrated"].as_f64().unwrap();
    assert!((est - 8.0).abs() < 4.0 * 0.0538, "{est}");
    assert_eq!(v["true_value"], 8.0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let csv = std::fs::read_to_string(dir.path().join("estimate.csv")).unwrap();
    assert!(csv.starts_with("# sewing "));
    assert!(csv.contains("# config: {"));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("estimate.json")).unwrap()).unwrap();
    assert_eq!(file, v);
}

#[test]
fn set_counting_constant_changes_the_estimate() {
    let base = ["estimate", "--shape", "cardioid", "--n", "20000", "--seed", "2"];
    let inc = ok_json(&base);
    let set = ok_json(&[&base[..], &["--face-counting", "set"]].concat());
    assert!(set["combined"].as_f64().unwrap() < inc["combined"].as_f64().unwrap());
    assert_eq!(sewing(&[&base[..], &["--face-counting", "bag"]].concat()).status.code(), Some(1));
}

#[test]
fn calibration_file_feeds_estimate_and_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_sewing"))
        .args(["calibrate", "--n", "5000", "--reps", "4", "--seed", "3", "--face-counting", "set"])
        .env("SEWING_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let calib = dir.path().join("calibration.json");
    assert_eq!(std::fs::read(&calib).unwrap(), out.stdout);
    let c: Value = serde_json::from_slice(&out.stdout).unwrap();

    let v = ok_json(&["estimate", "--shape", "unit_circle", "--n", "5000", "--seed", "4", "--alpha", path(&calib)]);
    assert_eq!(v["alpha_hat"], c["alpha_hat"]);
    assert_eq!(v["config"]["alpha"], path(&calib));
    let both = sewing(&["estimate", "--shape", "unit_circle", "--alpha", path(&calib), "--alpha-const", "1.2"]);
    assert_eq!(both.status.code(), Some(1));
}

#[test]
fn simulate_table3_desk() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim");
    let args = ["simulate", "--table", "3", "--scale", "desk", "--seed", "3", "--out", path(&out)];
    let run = sewing(&args);
    assert!(run.status.success());
    let csv = std::fs::read_to_string(out.join("table3_desk.csv")).unwrap();
    assert_eq!(run.stdout, csv.as_bytes());
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 4);
    let means: Vec<f64> = rows.iter().map(|r| r.split(',').nth(3).unwrap().parse().unwrap()).collect();
    for (m, paper) in means.iter().zip([7.9446, 8.8786, 13.3349, 22.2191]) {
        assert!((m / paper - 1.0).abs() < 0.05, "{m} vs {paper}");
    }
    assert!(csv.contains("# config: {"));
    assert!(out.join("table3_desk_zeta1_replications.csv").exists());
    assert!(out.join("table3_desk_zeta1_qq.csv").exists());

    // Re-running the same configuration reproduces every artifact.
    let first: Vec<(String, Vec<u8>)> = read_dir(&out);
    assert_eq!(sewing(&args).stdout, run.stdout);
    assert_eq!(read_dir(&out), first);
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn custom_simulation_writes_replications() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok_json(&[
        "simulate", "--shape", "trisectrix", "--n", "2000", "--reps", "5", "--seed", "8", "--out", path(dir.path()),
    ]);
    assert_eq!(v["rows"].as_array().map(Vec::len).unwrap_or(5), 5);
    let csv = std::fs::read_to_string(dir.path().join("experiment_replications.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn synthetic_coast_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("coast.csv");
    let meta = ok_json(&["synth-coast", "--n", "20000", "--seed", "5", "--out", path(&file)]);
    assert!(dir.path().join("coast.csv.meta.json").exists());
    let truth = meta["length_km"].as_f64().unwrap();
    let report = dir.path().join("report.json");
    let r = ok_json(&["analyze-geo", "--input", path(&file), "--out", path(&report)]);
    assert_eq!(r["trim_k"], 2);
    assert_eq!(r["h_bar_m"], 10.0);
    assert!((r["length_km"].as_f64().unwrap() / truth - 1.0).abs() < 0.1);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved, r);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "lon,lat,label,elevation\n59,95,1,0\n").unwrap();
    let out = sewing(&["analyze-geo", "--input", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn triangulate_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tri.csv");
    let sew = dir.path().join("sewing.csv");
    let v = ok_json(&[
        "triangulate", "--shape", "cardioid", "--n", "300", "--seed", "6", "--validate", "--csv", path(&csv), "--sewing",
        path(&sew),
    ]);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("point,")).count(), 300);
    let triangles = text.lines().filter(|l| l.starts_with("triangle,")).count();
    assert_eq!(triangles as u64, v["triangles"].as_u64().unwrap());
    let sewing_rows = std::fs::read_to_string(&sew).unwrap();
    assert!(sewing_rows.lines().any(|l| l.contains(",inner,")));
    assert!(sewing_rows.lines().any(|l| l.contains(",outer,")));
}
