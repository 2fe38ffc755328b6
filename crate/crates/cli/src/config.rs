//! Experiment configuration and suite registry.

use schiffer::geometry::{ComplementPolicy, CurveSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Suite groups and their members, in execution order.
pub const GROUPS: &[(&str, &[&str])] = &[
    ("kernels", &["reproducing", "vanishing", "symmetry"]),
    ("schiffer", &["adjoint", "complete", "grunsky"]),
    ("jump", &["derivatives", "reflection", "plemelj", "side_independence"]),
];

/// Invalid configuration; the message is shown to the user verbatim.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

/// Parameters `sweep` can vary.
pub const SWEEP_PARAMS: &[&str] = &["c", "N", "rho", "tau_im", "eps"];

fn default_truncation() -> usize {
    32
}

fn default_suites() -> Vec<String> {
    GROUPS.iter().map(|(g, _)| g.to_string()).collect()
}

/// Numerical resolution knobs that are not tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    /// Tolerance for building the conformal maps.
    #[serde(default = "Resolution::default_build_tol")]
    pub build_tol: f64,
    /// Random test vectors per jump suite.
    #[serde(default = "Resolution::default_inputs")]
    pub inputs: usize,
    /// Largest level of the literal level-curve diagnostics (levels halve from it).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    /// Whether a failed complementary map aborts the run.
    #[serde(default)]
    pub complement: ComplementPolicy,
}

impl Resolution {
    fn default_build_tol() -> f64 {
        1e-10
    }
    fn default_inputs() -> usize {
        4
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Self { build_tol: 1e-10, inputs: 4, eps: None, complement: ComplementPolicy::Required }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: CurveSpec,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub resolution: Resolution,
    /// Tolerance overrides keyed by record name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_suites")]
    pub suites: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Also write the truncated `T(Σ₁,Σ₁)` and `T(Σ₁,Σ₂)` matrices.
    #[serde(default)]
    pub export_matrices: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let c: Self = serde_json::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.truncation < 8 {
            return Err(ConfigError(format!("truncation {} < 8", self.truncation)));
        }
        if !(self.resolution.build_tol > 0.0) {
            return Err(ConfigError("resolution.build_tol must be positive".into()));
        }
        if let Some(e) = self.resolution.eps {
            if !(e > 0.0 && e <= 0.5) {
                return Err(ConfigError(format!("resolution.eps {e} outside (0, 0.5]")));
            }
        }
        for (k, v) in &self.tolerances {
            if !(*v >= 0.0) {
                return Err(ConfigError(format!("tolerance for {k} must be non-negative")));
            }
        }
        expand_suites(&self.suites)?;
        Ok(())
    }
}

/// Expands group names into leaf suites, deduplicated, in registry order.
pub fn expand_suites(names: &[String]) -> Result<Vec<&'static str>, ConfigError> {
    let mut want = Vec::new();
    for n in names {
        let n = n.as_str();
        if let Some((_, leaves)) = GROUPS.iter().find(|(g, _)| *g == n) {
            want.extend_from_slice(leaves);
        } else if let Some(leaf) = GROUPS.iter().flat_map(|(_, l)| l.iter()).find(|l| **l == n) {
            want.push(*leaf);
        } else {
            return Err(ConfigError(format!("unknown suite '{n}'")));
        }
    }
    if want.is_empty() {
        return Err(ConfigError("no suites selected".into()));
    }
    Ok(GROUPS
        .iter()
        .flat_map(|(_, l)| l.iter().copied())
        .filter(|l| want.contains(l))
        .collect())
}

/// Returns a copy of `base` with one sweep parameter set.
pub fn with_param(base: &ExperimentConfig, param: &str, value: f64) -> Result<ExperimentConfig, ConfigError> {
    let mut c = base.clone();
    match param {
        "c" => {
            if !(value.abs() < 1.0) {
                return Err(ConfigError(format!("ellipse parameter {value} must satisfy |c| < 1")));
            }
            c.model = CurveSpec::ellipse(value);
        }
        "N" => {
            if value.fract() != 0.0 || value < 8.0 {
                return Err(ConfigError(format!("N = {value} must be an integer ≥ 8")));
            }
            c.truncation = value as usize;
        }
        "rho" => {
            if c.model.rho.is_none() {
                return Err(ConfigError("rho sweep needs a torus model".into()));
            }
            c.model.rho = Some(value);
        }
        "tau_im" => match c.model.tau.as_mut() {
            Some(t) => t[1] = value,
            None => return Err(ConfigError("tau_im sweep needs a torus model".into())),
        },
        "eps" => c.resolution.eps = Some(value),
        other => {
            return Err(ConfigError(format!(
                "unknown sweep parameter '{other}' (expected one of {})",
                SWEEP_PARAMS.join(", ")
            )))
        }
    }
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_expand_in_registry_order() {
        let s = expand_suites(&["plemelj".into(), "kernels".into(), "reproducing".into()]).unwrap();
        assert_eq!(s, vec!["reproducing", "vanishing", "symmetry", "plemelj"]);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(expand_suites(&["bogus".into()]).is_err());
        assert!(expand_suites(&[]).is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_json(r#"{"model":{"kind":"Circle"}}"#).unwrap();
        assert_eq!(c.truncation, 32);
        assert_eq!(c.suites.len(), 3);
        assert!(ExperimentConfig::from_json(r#"{"model":{"kind":"Circle"},"truncation":4}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"model":{"kind":"Circle"},"typo":1}"#).is_err());
    }

    #[test]
    fn sweep_parameters_apply() {
        let c = ExperimentConfig::from_json(r#"{"model":{"kind":"Circle"}}"#).unwrap();
        assert_eq!(with_param(&c, "N", 16.0).unwrap().truncation, 16);
        assert_eq!(with_param(&c, "c", 0.5).unwrap().model.ellipse_parameter(), Some(0.5));
        assert!(with_param(&c, "rho", 0.1).is_err());
        assert!(with_param(&c, "N", 12.5).is_err());
    }
}
