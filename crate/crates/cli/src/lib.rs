//! Experiment runner behind the `schiffer` binary.

pub mod config;
pub mod output;
pub mod suites;
