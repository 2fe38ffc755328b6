//! Report files: `report.json`, `timings.json`, `summary.csv` and sweep tables.

use crate::config::ExperimentConfig;
use crate::suites::{RunOutcome, SuiteResult};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

pub const SCHEMA: &str = "schiffer-report/1";

#[derive(Debug, Serialize)]
pub struct Environment {
    pub version: &'static str,
    pub threads: usize,
    pub seed: u64,
    pub os: &'static str,
    pub arch: &'static str,
}

impl Environment {
    pub fn current(seed: u64) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            threads: rayon::current_num_threads(),
            seed,
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
        }
    }
}

#[derive(Debug, Serialize)]
struct Failure<'a> {
    suite: &'a str,
    name: &'a str,
    residual: f64,
    tolerance: f64,
}

#[derive(Debug, Serialize)]
struct ReportFile<'a> {
    schema: &'static str,
    config: &'a ExperimentConfig,
    environment: Environment,
    suites: &'a [SuiteResult],
    pass: bool,
    failures: Vec<Failure<'a>>,
    errors: BTreeMap<&'a str, &'a str>,
}

/// Serializes the deterministic part of a run. Identical inputs give identical bytes.
pub fn report_json(config: &ExperimentConfig, out: &RunOutcome) -> String {
    let failures = out
        .suites
        .iter()
        .flat_map(|s| s.records.iter().filter(|r| !r.pass).map(move |r| (s, r)))
        .map(|(s, r)| Failure { suite: &s.name, name: &r.name, residual: r.residual, tolerance: r.tolerance })
        .collect();
    let errors = out
        .suites
        .iter()
        .filter_map(|s| s.error.as_deref().map(|e| (s.name.as_str(), e)))
        .collect();
    let file = ReportFile {
        schema: SCHEMA,
        config,
        environment: Environment::current(config.seed),
        suites: &out.suites,
        pass: out.pass(),
        failures,
        errors,
    };
    serde_json::to_string_pretty(&file).expect("report serializes")
}

pub fn timings_json(out: &RunOutcome) -> String {
    let mut m: BTreeMap<String, f64> = out.timings.clone();
    m.insert("build".into(), out.build_seconds);
    serde_json::to_string_pretty(&m).expect("timings serialize")
}

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

pub fn summary_csv(out: &RunOutcome) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["suite", "name", "anchor", "residual", "tolerance", "pass"]).map_err(csv_err)?;
    for s in &out.suites {
        for r in &s.records {
            w.write_record([
                s.name.as_str(),
                &r.name,
                &r.anchor,
                &format!("{:e}", r.residual),
                &format!("{:e}", r.tolerance),
                if r.pass { "true" } else { "false" },
            ])
            .map_err(csv_err)?;
        }
    }
    String::from_utf8(w.into_inner().map_err(|e| csv_err(e.into_error().into()))?)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

/// Grunsky row for ellipse models; `None` for other curves or when the suite did not run.
pub fn grunsky_row(config: &ExperimentConfig, out: &RunOutcome) -> Option<(f64, f64, f64)> {
    let c = config.model.ellipse_parameter()?;
    let nu = *out.suite("grunsky")?.diagnostics.get("nu")?;
    Some((c, nu, (nu - c.abs()).abs()))
}

/// Writes every file of a single run into `dir`.
pub fn write_run(dir: &Path, config: &ExperimentConfig, out: &RunOutcome) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), report_json(config, out))?;
    fs::write(dir.join("timings.json"), timings_json(out))?;
    fs::write(dir.join("summary.csv"), summary_csv(out)?)?;
    if let Some((c, nu, err)) = grunsky_row(config, out) {
        let mut w = csv::Writer::from_path(dir.join("grunsky_vs_c.csv")).map_err(csv_err)?;
        w.write_record(["c", "nu", "abs_err"]).map_err(csv_err)?;
        w.write_record([c.to_string(), format!("{nu:.17e}"), format!("{err:e}")]).map_err(csv_err)?;
        w.flush()?;
    }
    if !out.matrices.is_empty() {
        let mdir = dir.join("matrices");
        fs::create_dir_all(&mdir)?;
        for (stem, op) in &out.matrices {
            fs::write(mdir.join(format!("{stem}.csv")), op.to_csv())?;
            fs::write(mdir.join(format!("{stem}.json")), serde_json::to_string(&op.to_json()).expect("matrix serializes"))?;
        }
    }
    Ok(())
}

/// One row of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub pass: bool,
    /// Worst residual per suite (NaN when skipped or errored).
    pub worst: BTreeMap<String, f64>,
    pub nu: Option<f64>,
    pub transmission_norm: Option<f64>,
    /// Smallest tolerance per suite, used for the plateau floor.
    pub tolerance: BTreeMap<String, f64>,
}

impl SweepRow {
    pub fn from_outcome(value: f64, out: &RunOutcome) -> Self {
        let worst = out
            .suites
            .iter()
            .map(|s| {
                let w = if s.skipped.is_some() || s.error.is_some() { f64::NAN } else { s.worst() };
                (s.name.clone(), w)
            })
            .collect();
        let tolerance = out
            .suites
            .iter()
            .filter(|s| !s.records.is_empty())
            .map(|s| (s.name.clone(), s.records.iter().map(|r| r.tolerance).fold(f64::INFINITY, f64::min)))
            .collect();
        let diag = |suite: &str, key: &str| out.suite(suite).and_then(|s| s.diagnostics.get(key).copied());
        Self {
            value,
            pass: out.pass(),
            worst,
            nu: diag("grunsky", "nu"),
            transmission_norm: diag("reflection", "transmission_norm"),
            tolerance,
        }
    }
}

/// Values ordered by the swept parameter.
fn by_value(rows: &[SweepRow], f: impl Fn(&SweepRow) -> Option<f64>) -> Vec<f64> {
    let mut v: Vec<(f64, f64)> = rows.iter().filter_map(|r| f(r).map(|y| (r.value, y))).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v.into_iter().map(|p| p.1).collect()
}

/// Monotonicity columns the sweep table reports for a parameter.
///
/// `nu_increasing` is strict. `complete_nonincreasing` lets a residual rise
/// only while it stays below a thousandth of its tolerance (quadrature floor).
pub fn monotone_flags(param: &str, rows: &[SweepRow]) -> Vec<(String, bool)> {
    // A flag needs at least two measured values.
    let flag = |name: &str, v: Vec<f64>, ok: &dyn Fn(f64, f64) -> bool| {
        (v.len() >= 2).then(|| (name.to_string(), v.windows(2).all(|w| ok(w[0], w[1]))))
    };
    let f = match param {
        "c" => flag("nu_increasing", by_value(rows, |r| r.nu), &|a, b| b > a),
        "N" => {
            let floor = 1e-3 * rows.iter().filter_map(|r| r.tolerance.get("complete").copied()).fold(f64::INFINITY, f64::min);
            let res = by_value(rows, |r| r.worst.get("complete").copied().filter(|x| x.is_finite()));
            flag("complete_nonincreasing", res, &|a, b| b <= a.max(floor))
        }
        _ => None,
    };
    f.into_iter().collect()
}

pub fn sweep_csv(param: &str, rows: &[SweepRow]) -> io::Result<String> {
    let suites: Vec<String> = {
        let mut s: Vec<String> = rows.iter().flat_map(|r| r.worst.keys().cloned()).collect();
        s.sort();
        s.dedup();
        s
    };
    let flags = monotone_flags(param, rows);
    let mut w = csv::Writer::from_writer(vec![]);
    let mut head = vec![param.to_string(), "pass".into()];
    head.extend(suites.iter().map(|s| format!("worst_{s}")));
    head.push("nu".into());
    head.push("transmission_norm".into());
    head.extend(flags.iter().map(|(k, _)| k.clone()));
    w.write_record(&head).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.value.to_string(), r.pass.to_string()];
        for s in &suites {
            rec.push(r.worst.get(s).map(|x| format!("{x:e}")).unwrap_or_default());
        }
        rec.push(r.nu.map(|x| format!("{x:.17e}")).unwrap_or_default());
        rec.push(r.transmission_norm.map(|x| format!("{x:.17e}")).unwrap_or_default());
        rec.extend(flags.iter().map(|(_, b)| b.to_string()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| csv_err(e.into_error().into()))?)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(value: f64, nu: f64, complete: f64) -> SweepRow {
        SweepRow {
            value,
            pass: true,
            worst: [("complete".to_string(), complete)].into(),
            nu: Some(nu),
            transmission_norm: None,
            tolerance: [("complete".to_string(), 1e-6)].into(),
        }
    }

    #[test]
    fn monotone_flags_read_sorted_values() {
        let rows = [row(0.5, 0.5, 0.0), row(0.2, 0.2, 0.0), row(0.8, 0.8, 0.0)];
        assert_eq!(monotone_flags("c", &rows), vec![("nu_increasing".to_string(), true)]);
        let rows = [row(8.0, 0.0, 1e-3), row(16.0, 0.0, 1e-2)];
        assert_eq!(monotone_flags("N", &rows), vec![("complete_nonincreasing".to_string(), false)]);
        // Roundoff growth below the floor is a plateau.
        let rows = [row(8.0, 0.0, 3e-14), row(16.0, 0.0, 2e-13), row(32.0, 0.0, 7e-13)];
        assert_eq!(monotone_flags("N", &rows), vec![("complete_nonincreasing".to_string(), true)]);
        let rows = [row(0.2, 0.2, 0.0), row(0.5, 0.2, 0.0)];
        assert_eq!(monotone_flags("c", &rows), vec![("nu_increasing".to_string(), false)]);
        assert!(monotone_flags("rho", &rows).is_empty());
    }

    #[test]
    fn sweep_table_has_one_line_per_value() {
        let rows = [row(8.0, 0.1, 1e-3), row(16.0, 0.1, 1e-5)];
        let t = sweep_csv("N", &rows).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "N,pass,worst_complete,nu,transmission_norm,complete_nonincreasing");
        assert!(lines[1].ends_with(",true"));
    }
}
