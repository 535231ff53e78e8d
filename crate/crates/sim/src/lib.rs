//! Scenario simulator for the relay-selection toolkit.
//!
//! Five scenario presets sweep the number of sources from 0 to 100 and
//! compare the selection algorithms on identical Monte-Carlo instances
//! (paired runs): total machine count fixed (1), relay count fixed (2),
//! relay count per curve (3), LTE channel count per curve (4), fading
//! factor per curve (5). Metrics are the average capacity over a point's
//! sources (unmatched sources count as zero, then averaged over runs), its
//! standard deviation, and the average number of unmatched sources;
//! [`csv::write_csv`] emits them in a fixed row order so reruns with the
//! same seed are byte-identical.

use std::path::PathBuf;

pub mod config;
pub mod csv;
pub mod runner;

pub use config::{Algorithm, Overrides, RelayRule, ScenarioConfig, DEFAULT_SEED};
pub use runner::{run_scenario, MetricsRow};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
