use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{authentic_percent, load_stddev, summarize, Summary};
use crate::config::{Algorithm, SimConfig};
use crate::engine::{run, ExperimentResult};
use crate::error::SimError;

/// Which population parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// Fraction of pure malicious peers; everyone else is good.
    Malicious,
    /// Fraction of unpredictable peers on top of a fixed pure malicious share.
    Unpredictable,
    /// Number of collectives, each a fixed fraction of the peers.
    Collective,
}

impl Scenario {
    /// Pure malicious share kept fixed in the unpredictable scenario.
    pub const UNPREDICTABLE_BACKGROUND: f64 = 0.10;
    /// Size of one collective as a share of the peers.
    pub const GROUP_FRACTION: f64 = 0.05;

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Malicious => "malicious",
            Scenario::Unpredictable => "unpredictable",
            Scenario::Collective => "collective",
        }
    }

    /// The sweep points of the reference experiments.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            Scenario::Malicious => (1..=9).map(|k| f64::from(k) / 20.0).collect(),
            Scenario::Unpredictable => (1..=7).map(|k| f64::from(k) / 20.0).collect(),
            Scenario::Collective => (1..=6).map(f64::from).collect(),
        }
    }

    /// `base` with the population set for sweep point `value`.
    pub fn apply(self, base: &SimConfig, value: f64) -> Result<SimConfig, SimError> {
        let mut config = base.clone();
        let pop = &mut config.population;
        match self {
            Scenario::Malicious => {
                pop.malicious_fraction = value;
                pop.unpredictable_fraction = 0.0;
                pop.collective_groups = 0;
            }
            Scenario::Unpredictable => {
                pop.malicious_fraction = Self::UNPREDICTABLE_BACKGROUND;
                pop.unpredictable_fraction = value;
                pop.collective_groups = 0;
            }
            Scenario::Collective => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(SimError::InvalidConfig(format!(
                        "collective sweep values are group counts, got {value}"
                    )));
                }
                pop.malicious_fraction = 0.0;
                pop.unpredictable_fraction = 0.0;
                pop.collective_groups = value as usize;
                pop.group_fraction = Self::GROUP_FRACTION;
            }
        }
        config.validate()?;
        Ok(config)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "malicious" | "pure-malicious" => Ok(Scenario::Malicious),
            "unpredictable" => Ok(Scenario::Unpredictable),
            "collective" | "collectives" => Ok(Scenario::Collective),
            other => Err(SimError::UnknownScenario(other.to_string())),
        }
    }
}

/// Per-trial figures kept in a sweep row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub seed: u64,
    pub authentic_pct: f64,
    pub load_stddev: f64,
    pub result: ExperimentResult,
}

/// Aggregate of all trials at one sweep point for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scenario: Scenario,
    pub scenario_value: f64,
    pub algorithm: Algorithm,
    pub seed_base: u64,
    pub trials: usize,
    pub mean_authentic_pct: f64,
    pub stddev_authentic_pct: f64,
    pub stderr_authentic_pct: f64,
    pub mean_load_stddev: f64,
    pub stddev_load_stddev: f64,
    pub mean_feedback_messages: f64,
    pub mean_trust_read_messages: f64,
    pub runs: Vec<Trial>,
}

impl SweepRow {
    pub fn from_trials(scenario: Scenario, value: f64, algorithm: Algorithm, seed_base: u64, runs: Vec<Trial>) -> Self {
        let pick = |f: &dyn Fn(&Trial) -> f64| runs.iter().map(f).collect::<Vec<_>>();
        let authentic: Summary = summarize(&pick(&|t| t.authentic_pct));
        let load: Summary = summarize(&pick(&|t| t.load_stddev));
        let feedback = summarize(&pick(&|t| t.result.message_tally.feedback_messages as f64)).mean;
        let reads = summarize(&pick(&|t| t.result.message_tally.trust_read_messages as f64)).mean;
        Self {
            scenario,
            scenario_value: value,
            algorithm,
            seed_base,
            trials: runs.len(),
            mean_authentic_pct: authentic.mean,
            stddev_authentic_pct: authentic.stddev,
            stderr_authentic_pct: authentic.stderr,
            mean_load_stddev: load.mean,
            stddev_load_stddev: load.stddev,
            mean_feedback_messages: feedback,
            mean_trust_read_messages: reads,
            runs,
        }
    }
}

/// Runs one trial with seed `base.seed + trial`.
pub fn run_trial(config: &SimConfig, trial: usize) -> Result<Trial, SimError> {
    let seed = config.seed.wrapping_add(trial as u64);
    let config = SimConfig { seed, ..config.clone() };
    let result = run(&config)?;
    Ok(Trial {
        seed,
        authentic_pct: authentic_percent(&result)?,
        load_stddev: load_stddev(&result, &result.good_peers)?,
        result,
    })
}

/// Every `(value, algorithm)` pair over `trials` seeds, in parallel on the
/// current rayon pool. Rows come back ordered by value, then algorithm as given.
pub fn sweep(
    scenario: Scenario,
    algorithms: &[Algorithm],
    values: &[f64],
    trials: usize,
    base: &SimConfig,
) -> Result<Vec<SweepRow>, SimError> {
    if trials == 0 {
        return Err(SimError::InvalidConfig("trials must be at least 1".into()));
    }
    let mut points = Vec::new();
    for &value in values {
        for &algorithm in algorithms {
            let config = SimConfig {
                algorithm,
                ..scenario.apply(base, value)?
            };
            points.push((value, config));
        }
    }
    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..trials).map(move |t| (p, t))).collect();
    let outcomes: Vec<Result<Trial, SimError>> = jobs.par_iter().map(|&(p, t)| run_trial(&points[p].1, t)).collect();
    let mut outcomes = outcomes.into_iter();
    points
        .iter()
        .map(|(value, config)| {
            let runs = outcomes.by_ref().take(trials).collect::<Result<Vec<_>, _>>()?;
            Ok(SweepRow::from_trials(scenario, *value, config.algorithm, base.seed, runs))
        })
        .collect()
}
