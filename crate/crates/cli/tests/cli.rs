use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn schiffer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schiffer")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn circle_all_suites_pass() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "c.json", r#"{"model":{"kind":"Circle"},"truncation":16,"resolution":{"inputs":2}}"#);
    let out = d.path().join("out");
    let o = schiffer(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 10);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("suite,name,anchor,residual,tolerance,pass"));
    assert!(!summary.contains(",false"));
    assert!(out.join("timings.json").exists());
}

#[test]
fn ellipse_grunsky_row() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "e.json", r#"{"model":{"kind":"ExteriorMap","coeffs":[[0,0],[0.5,0]]},"truncation":16}"#);
    let out = d.path().join("out");
    let o = schiffer(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--suite", "grunsky"]);
    assert_eq!(o.status.code(), Some(0));
    let t = fs::read_to_string(out.join("grunsky_vs_c.csv")).unwrap();
    let mut lines = t.lines();
    assert_eq!(lines.next(), Some("c,nu,abs_err"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 0.5);
    assert!((row[1] - 0.5).abs() < 1e-6);
    assert!(row[2] < 1e-6);
}

#[test]
fn report_is_byte_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "c.json", r#"{"model":{"kind":"Circle"},"truncation":8,"seed":3}"#);
    let run = |name: &str| {
        let out = d.path().join(name);
        let o = schiffer(&["run", "--config", &cfg, "--out", out.to_str().unwrap(), "--suite", "schiffer", "--suite", "kernels", "--threads", "1"]);
        assert_eq!(o.status.code(), Some(0));
        fs::read(out.join("report.json")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn unknown_suite_exits_with_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "c.json", r#"{"model":{"kind":"Circle"}}"#);
    let o = schiffer(&["run", "--config", &cfg, "--suite", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
    let bad = write_config(d.path(), "bad.json", r#"{"model":{"kind":"Circle"},"truncation":2}"#);
    assert_eq!(schiffer(&["run", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn tightened_tolerance_fails_with_exit_one() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "c.json",
        r#"{"model":{"kind":"ExteriorMap","coeffs":[[0,0],[0.3,0]]},"truncation":8,"suites":["grunsky"],"tolerances":{"grunsky/norm below one":0.1}}"#,
    );
    let out = d.path().join("out");
    let o = schiffer(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["failures"][0]["name"], "grunsky/norm below one");
}

#[test]
fn sweep_over_c_reports_increasing_norm() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "c.json", r#"{"model":{"kind":"Circle"},"truncation":16,"suites":["grunsky"]}"#);
    let out = d.path().join("sweep");
    let o = schiffer(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--param", "c", "--values", "0.2,0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let t = fs::read_to_string(out.join("sweep_c.csv")).unwrap();
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines[0], "c,pass,worst_grunsky,nu,transmission_norm,nu_increasing");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.2,true") && lines[2].ends_with(",true"));
    assert!(out.join("c=0.5").join("grunsky_vs_c.csv").exists());
}

#[test]
fn matrices_export_when_requested() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "c.json",
        r#"{"model":{"kind":"ExteriorMap","coeffs":[[0,0],[0.4,0]]},"truncation":8,"suites":["grunsky"],"export_matrices":true}"#,
    );
    let out = d.path().join("out");
    assert_eq!(schiffer(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]).status.code(), Some(0));
    let t11 = fs::read_to_string(out.join("matrices").join("T11.csv")).unwrap();
    // Diagonal Grunsky coefficients: the (0,0) entry has modulus c.
    let first: Vec<f64> = t11.lines().next().unwrap().split(',').take(2).map(|x| x.parse().unwrap()).collect();
    assert!((first[0].hypot(first[1]) - 0.4).abs() < 1e-10);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("matrices").join("T12.json")).unwrap()).unwrap();
    assert_eq!(json["tag"], "T12");
    assert_eq!(json["cols"], 8);
}

#[test]
fn sweep_over_truncation_is_nonincreasing() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "c.json", r#"{"model":{"kind":"ExteriorMap","coeffs":[[0,0],[0.3,0],[0,0.1]]},"suites":["complete"]}"#);
    let out = d.path().join("sweep");
    let o = schiffer(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--param", "N", "--values", "8,16,32"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let t = fs::read_to_string(out.join("sweep_N.csv")).unwrap();
    assert!(t.lines().next().unwrap().ends_with("complete_nonincreasing"));
    assert!(t.lines().skip(1).all(|l| l.ends_with(",true")));
}
