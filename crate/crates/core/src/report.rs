//! Structured verification records shared by the library checks and the CLI.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Identity names a record may cite as its anchor.
pub const ANCHORS: &[&str] = &[
    "green-function",
    "kernel-symmetry",
    "reproducing-property",
    "schiffer-vanishing",
    "level-curve-identity",
    "adjoint-identity",
    "bergman-residue-adjoint",
    "complete-identity",
    "grunsky-inequality",
    "isomorphism-onto-exact",
    "exactness",
    "left-inverse",
    "jump-derivatives",
    "holomorphic-jump",
    "reflection-formula",
    "transmission-derivative",
    "plemelj-decomposition",
    "jump-isomorphism",
    "two-sided-limit",
    "contour-independence",
    "transmission",
];

pub fn is_registered_anchor(a: &str) -> bool {
    ANCHORS.contains(&a)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl CheckRecord {
    /// A residual check: passes when `residual <= tolerance` (NaN fails).
    pub fn new(name: impl Into<String>, anchor: &str, residual: f64, tolerance: f64) -> Self {
        debug_assert!(is_registered_anchor(anchor), "unregistered anchor {anchor}");
        Self {
            name: name.into(),
            anchor: anchor.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, v: f64) -> Self {
        self.extra.insert(key.into(), v);
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn extend(&mut self, o: Report) {
        self.records.extend(o.records);
    }

    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    /// Largest residual among records whose name starts with `prefix`.
    pub fn worst(&self, prefix: &str) -> f64 {
        self.records
            .iter()
            .filter(|r| r.name.starts_with(prefix))
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let r = CheckRecord::new("x", "complete-identity", f64::NAN, 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn anchors_are_unique() {
        let mut a = ANCHORS.to_vec();
        a.sort();
        a.dedup();
        assert_eq!(a.len(), ANCHORS.len());
    }
}
