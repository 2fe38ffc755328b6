//! Runs the registered verification suites against one model.

use crate::config::{expand_suites, ConfigError, ExperimentConfig};
use rayon::prelude::*;
use schiffer::forms::HarmonicFun;
use schiffer::geometry::{build_model_with, BuildOptions, Comp, SurfaceModel};
use schiffer::jump::{self, JumpOptions};
use schiffer::kernels;
use schiffer::report::{CheckRecord, Report};
use schiffer::schiffer as ops;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub records: Vec<CheckRecord>,
    /// Reason the suite does not apply to this model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    /// Library error that aborted the suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Measured quantities that carry no tolerance.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.records.iter().all(|r| r.pass)
    }

    /// Largest residual over the records.
    pub fn worst(&self) -> f64 {
        self.records.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Everything produced by one configuration.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub suites: Vec<SuiteResult>,
    /// Wall-clock seconds per suite, kept out of the deterministic report.
    pub timings: BTreeMap<String, f64>,
    pub build_seconds: f64,
    /// `(file stem, operator)` pairs when matrix export is requested.
    pub matrices: Vec<(String, ops::OperatorMatrix)>,
}

impl RunOutcome {
    pub fn pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass())
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn records(&self) -> impl Iterator<Item = &CheckRecord> {
        self.suites.iter().flat_map(|s| s.records.iter())
    }
}

struct Ctx<'a> {
    model: &'a SurfaceModel,
    n: usize,
    seed: u64,
    inputs: usize,
    eps: Option<f64>,
}

impl Ctx<'_> {
    fn inputs(&self, admissible: bool) -> Vec<HarmonicFun> {
        jump::random_inputs(self.seed, self.inputs, self.n.min(16), admissible && self.model.genus() == 1)
    }
}

fn collect(reports: Vec<Report>) -> Vec<CheckRecord> {
    reports.into_iter().flat_map(|r| r.records).collect()
}

type SuiteOut = schiffer::Result<(Vec<CheckRecord>, BTreeMap<String, f64>)>;

fn run_leaf(name: &str, ctx: &Ctx) -> Result<SuiteOut, String> {
    let m = ctx.model;
    let genus0 = m.genus() == 0;
    let none = BTreeMap::new;
    let out: SuiteOut = match name {
        "reproducing" => kernels::verify_reproducing(m, ctx.seed).map(|r| (r.records, none())),
        "vanishing" => kernels::verify_vanishing(m, ctx.seed).map(|r| {
            let mut rec = r.records;
            for k in [Comp::One, Comp::Two] {
                if m.chart(k).is_ok() {
                    let eta = schiffer::C64::new(0.3, -0.2);
                    if let Ok(v) = kernels::level_curve_residual(m, k, eta, 64) {
                        rec.push(CheckRecord::new(
                            format!("kernels/level-curve identity {}", k.number()),
                            "level-curve-identity",
                            v,
                            1e-8,
                        ));
                    }
                }
            }
            (rec, none())
        }),
        "symmetry" => kernels::verify_kernel_symmetry(m, ctx.seed).map(|r| (r.records, none())),
        "adjoint" => ops::verify_adjoint_identity(m, ctx.n, ctx.seed).map(|r| (r.records, none())),
        "complete" => ops::verify_complete_identity(m, ctx.n).map(|r| (r.records, none())),
        "grunsky" => ops::verify_grunsky(m, ctx.n).map(|(r, g)| {
            let mut d = BTreeMap::new();
            d.insert("nu".into(), g.nu);
            if let Some(s) = g.sigma_min {
                d.insert("sigma_min".into(), s);
            }
            (r.records, d)
        }),
        "derivatives" => ctx
            .inputs(false)
            .par_iter()
            .map(|h| jump::verify_jump_derivatives(m, h, m.q, ctx.n))
            .collect::<schiffer::Result<Vec<_>>>()
            .map(|r| (collect(r), none())),
        "reflection" => {
            if !genus0 {
                return Err("reflection identities need transmission (genus 0)".into());
            }
            ctx.inputs(false)
                .par_iter()
                .map(|h| jump::verify_reflection(m, h, m.q, ctx.n))
                .chain(rayon::iter::once(jump::verify_left_inverse(m, ctx.n)))
                .collect::<schiffer::Result<Vec<_>>>()
                .and_then(|r| {
                    // Measured only: no bound is asserted on the transmission norm.
                    let mut d = BTreeMap::new();
                    d.insert("transmission_norm".into(), jump::transmission_norm(m, ctx.n.min(16))?);
                    Ok((collect(r), d))
                })
        }
        "plemelj" => {
            let hs = ctx.inputs(true);
            hs.par_iter()
                .map(|h| jump::verify_plemelj(m, h, m.q))
                .collect::<schiffer::Result<Vec<_>>>()
                .and_then(|r| {
                    let mut opts = JumpOptions::default();
                    if let Some(e) = ctx.eps {
                        opts.eps = (0..4).map(|k| e / f64::from(1 << k)).collect();
                        opts.eps_alt = opts.eps.iter().map(|x| 0.75 * x).collect();
                    }
                    let d = jump::jump_with(m, &hs[0], m.q, 1, &opts)?.diagnostics;
                    let mut diag = BTreeMap::new();
                    diag.insert("literal_extrapolation_error".into(), d.extrapolation_error);
                    diag.insert("literal_alt_difference".into(), (d.extrapolated - d.extrapolated_alt).norm());
                    diag.insert("richardson_spread".into(), d.richardson_spread);
                    diag.insert("extrapolation_stable".into(), f64::from(u8::from(d.extrapolation_stable)));
                    diag.insert("collar_depth".into(), d.collar_depth);
                    diag.insert("eps_max".into(), d.eps[0]);
                    Ok((collect(r), diag))
                })
        }
        "side_independence" => {
            if !genus0 {
                return Err("the side-2 jump needs transmission (genus 0)".into());
            }
            ctx.inputs(false)
                .par_iter()
                .map(|h| jump::verify_side_independence(m, h, m.q))
                .collect::<schiffer::Result<Vec<_>>>()
                .map(|r| (collect(r), none()))
        }
        other => unreachable!("unregistered suite {other}"),
    };
    Ok(out)
}

/// Applies tolerance overrides keyed by record name.
fn override_tolerances(recs: &mut [CheckRecord], tol: &BTreeMap<String, f64>) {
    for r in recs {
        if let Some(t) = tol.get(&r.name) {
            r.tolerance = *t;
            r.pass = r.residual <= *t;
        }
    }
}

/// Builds the model and runs the selected suites (`selection` overrides the
/// config's list when non-empty).
pub fn run(config: &ExperimentConfig, selection: &[String]) -> Result<RunOutcome, ConfigError> {
    let names = if selection.is_empty() {
        expand_suites(&config.suites)?
    } else {
        expand_suites(selection)?
    };
    let t0 = Instant::now();
    let mut opts = BuildOptions::new(config.truncation);
    opts.tol = config.resolution.build_tol;
    opts.complement = config.resolution.complement;
    let model = build_model_with(&config.model, &opts)
        .map_err(|e| ConfigError(format!("model: {e}")))?;
    let build_seconds = t0.elapsed().as_secs_f64();
    let ctx = Ctx {
        model: &model,
        n: config.truncation,
        seed: config.seed,
        inputs: config.resolution.inputs.max(1),
        eps: config.resolution.eps,
    };
    let results: Vec<(SuiteResult, f64)> = names
        .par_iter()
        .map(|name| {
            let t = Instant::now();
            let mut res = SuiteResult {
                name: name.to_string(),
                records: vec![],
                skipped: None,
                error: None,
                diagnostics: BTreeMap::new(),
            };
            match run_leaf(name, &ctx) {
                Err(reason) => res.skipped = Some(reason),
                Ok(Err(e)) => res.error = Some(e.to_string()),
                Ok(Ok((mut recs, diag))) => {
                    override_tolerances(&mut recs, &config.tolerances);
                    res.records = recs;
                    res.diagnostics = diag;
                }
            }
            (res, t.elapsed().as_secs_f64())
        })
        .collect();
    let mut matrices = vec![];
    if config.export_matrices {
        for (stem, k) in [("T11", Comp::One), ("T12", Comp::Two)] {
            match ops::assemble_t(&model, Comp::One, k, config.truncation) {
                Ok(t) => matrices.push((stem.to_string(), t)),
                Err(e) => return Err(ConfigError(format!("matrix export {stem}: {e}"))),
            }
        }
    }
    let timings = results.iter().map(|(r, t)| (r.name.clone(), *t)).collect();
    Ok(RunOutcome {
        suites: results.into_iter().map(|(r, _)| r).collect(),
        timings,
        build_seconds,
        matrices,
    })
}
