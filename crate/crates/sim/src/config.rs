//! Scenario configuration: presets, JSON/CLI overrides, algorithm selection.

use relay_core::RadioParams;
use serde::{Deserialize, Serialize};

use crate::SimError;

/// Fixed default seed so bare invocations are reproducible.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Orsa,
    Mrsa,
    Wrsa,
    Rrsa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Orsa,
        Algorithm::Mrsa,
        Algorithm::Wrsa,
        Algorithm::Rrsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Orsa => "ORSA",
            Algorithm::Mrsa => "MRSA",
            Algorithm::Wrsa => "WRSA",
            Algorithm::Rrsa => "RRSA",
        }
    }
}

/// How the relay count is chosen at each sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RelayRule {
    /// `N_r = total − N_s` (total machine count fixed).
    Complement { total: usize },
    /// One curve per fixed relay count.
    Fixed(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario_id: u8,
    /// Sources sweep 0..=ns_max in steps of ns_step.
    pub ns_max: usize,
    pub ns_step: usize,
    pub relay_rule: RelayRule,
    /// LTE channel counts, one curve each; the channel count is also the BS
    /// quota.
    pub channels: Vec<u32>,
    /// Fading factors, one curve each.
    pub alphas: Vec<f64>,
    pub runs: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    /// Joint BS budget for ORSA (relayed paths consume channels too). The
    /// relaxed alternative budgets only direct links.
    pub strict_quota: bool,
    pub side_m: f64,
    pub radio: RadioParams,
}

impl ScenarioConfig {
    /// The five scenario presets.
    pub fn preset(id: u8) -> Result<Self, SimError> {
        let base = |relay_rule, channels, alphas, algorithms| ScenarioConfig {
            scenario_id: id,
            ns_max: 100,
            ns_step: 5,
            relay_rule,
            channels,
            alphas,
            runs: 100,
            seed: DEFAULT_SEED,
            algorithms,
            strict_quota: true,
            side_m: 590.0,
            radio: RadioParams::default(),
        };
        let both = vec![Algorithm::Orsa, Algorithm::Mrsa];
        match id {
            1 => Ok(base(
                RelayRule::Complement { total: 100 },
                vec![100],
                vec![1e-4],
                Algorithm::ALL.to_vec(),
            )),
            2 => Ok(base(
                RelayRule::Fixed(vec![75]),
                vec![100],
                vec![1e-4],
                Algorithm::ALL.to_vec(),
            )),
            3 => Ok(base(
                RelayRule::Fixed(vec![25, 50, 75]),
                vec![100],
                vec![1e-4],
                both,
            )),
            4 => Ok(base(
                RelayRule::Fixed(vec![100]),
                vec![25, 50, 75],
                vec![1e-4],
                both,
            )),
            5 => Ok(base(
                RelayRule::Fixed(vec![100]),
                vec![25, 50, 75],
                vec![1e-8, 1e-6, 1e-4],
                both,
            )),
            other => Err(SimError::Config(format!("unknown scenario {other}"))),
        }
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(runs) = overrides.runs {
            self.runs = runs;
        }
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(ns_max) = overrides.ns_max {
            self.ns_max = ns_max;
        }
        if let Some(ns_step) = overrides.ns_step {
            self.ns_step = ns_step;
        }
        if let Some(channels) = &overrides.channels {
            self.channels = channels.clone();
        }
        if let Some(alpha) = &overrides.alpha {
            self.alphas = alpha.clone();
        }
        if let Some(algos) = &overrides.algos {
            self.algorithms = algos.clone();
        }
        if let Some(strict) = overrides.strict_quota {
            self.strict_quota = strict;
        }
        if let Some(p) = overrides.fading_probability {
            self.radio.fading_probability = p;
        }
        if let Some(w) = overrides.noise_power_w {
            self.radio.noise_power_w = w;
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.runs == 0 {
            return Err(SimError::Config("runs must be at least 1".into()));
        }
        if self.ns_step == 0 {
            return Err(SimError::Config("ns_step must be at least 1".into()));
        }
        if self.channels.is_empty() || self.alphas.is_empty() {
            return Err(SimError::Config(
                "need at least one channel count and one fading factor".into(),
            ));
        }
        if self.channels.contains(&0) {
            return Err(SimError::Config("channel counts must be positive".into()));
        }
        if self
            .alphas
            .iter()
            .any(|&a| a.is_nan() || a <= 0.0 || a > 1.0)
        {
            return Err(SimError::Config("fading factors must lie in (0, 1]".into()));
        }
        if self.algorithms.is_empty() {
            return Err(SimError::Config("no algorithms selected".into()));
        }
        if let RelayRule::Complement { total } = self.relay_rule {
            if self.ns_max > total {
                return Err(SimError::Config(format!(
                    "ns_max {} exceeds the fixed machine total {total}",
                    self.ns_max
                )));
            }
        }
        self.radio
            .validate()
            .map_err(|e| SimError::Config(e.to_string()))
    }

    /// Relay counts for one sweep point, one entry per curve.
    pub fn relay_counts(&self, n_s: usize) -> Vec<usize> {
        match &self.relay_rule {
            RelayRule::Complement { total } => vec![total - n_s],
            RelayRule::Fixed(values) => values.clone(),
        }
    }

    pub fn sweep_points(&self) -> Vec<usize> {
        (0..=self.ns_max).step_by(self.ns_step).collect()
    }
}

/// Optional overrides, sourced from a JSON file (`--config`) or CLI flags;
/// flags win over the file, the file wins over the preset. Field names match
/// the flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub ns_max: Option<usize>,
    pub ns_step: Option<usize>,
    pub channels: Option<Vec<u32>>,
    pub alpha: Option<Vec<f64>>,
    pub algos: Option<Vec<Algorithm>>,
    pub strict_quota: Option<bool>,
    pub fading_probability: Option<f64>,
    pub noise_power_w: Option<f64>,
}

impl Overrides {
    /// Later overrides win field by field.
    pub fn merged_with(mut self, later: Overrides) -> Overrides {
        self.runs = later.runs.or(self.runs);
        self.seed = later.seed.or(self.seed);
        self.ns_max = later.ns_max.or(self.ns_max);
        self.ns_step = later.ns_step.or(self.ns_step);
        self.channels = later.channels.or(self.channels);
        self.alpha = later.alpha.or(self.alpha);
        self.algos = later.algos.or(self.algos);
        self.strict_quota = later.strict_quota.or(self.strict_quota);
        self.fading_probability = later.fading_probability.or(self.fading_probability);
        self.noise_power_w = later.noise_power_w.or(self.noise_power_w);
        self
    }
}
