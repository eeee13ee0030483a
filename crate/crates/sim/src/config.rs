use std::fmt;
use std::str::FromStr;

use atrust_core::{SolverConfig, WeightConfig};
use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// Aggregation scheme driving source selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Absolute,
    EigenTrust,
    PowerTrust,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Absolute, Algorithm::EigenTrust, Algorithm::PowerTrust];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Absolute => "absolute",
            Algorithm::EigenTrust => "eigentrust",
            Algorithm::PowerTrust => "powertrust",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "absolute" | "absolutetrust" | "at" => Ok(Algorithm::Absolute),
            "eigentrust" | "eigen" | "et" => Ok(Algorithm::EigenTrust),
            "powertrust" | "power" | "pt" => Ok(Algorithm::PowerTrust),
            other => Err(SimError::UnknownAlgorithm(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    /// Highest score wins, ties to the lower id.
    Max,
    /// Sample survivors with probability proportional to global trust.
    Proportional,
}

impl FromStr for SelectionMode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" => Ok(SelectionMode::Max),
            "proportional" | "prop" => Ok(SelectionMode::Proportional),
            other => Err(SimError::UnknownSelectionMode(other.to_string())),
        }
    }
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::Max => "max",
            SelectionMode::Proportional => "proportional",
        })
    }
}

/// Overlay used for query flooding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Topology {
    RandomRegular { degree: usize },
    Ring,
    Complete,
}

/// Behavior mix of the simulated population. Counts are `round(fraction · N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Population {
    pub malicious_fraction: f64,
    pub unpredictable_fraction: f64,
    pub collective_groups: usize,
    /// Size of each collective as a fraction of N.
    pub group_fraction: f64,
    /// Unpredictable peers switch at a uniform point in this window, as fractions
    /// of the total number of transactions.
    pub switch_window: (f64, f64),
}

impl Default for Population {
    fn default() -> Self {
        Self {
            malicious_fraction: 0.0,
            unpredictable_fraction: 0.0,
            collective_groups: 0,
            group_fraction: 0.05,
            switch_window: (0.2, 0.5),
        }
    }
}

/// Parameters of the EigenTrust/PowerTrust baselines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineParams {
    pub damping: f64,
    /// EigenTrust pre-trusts the first this-many good peers by id.
    pub pretrusted_count: usize,
    /// PowerTrust elects `⌈fraction · N⌉` power nodes.
    pub power_node_fraction: f64,
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            damping: 0.15,
            pretrusted_count: 3,
            power_node_fraction: 0.05,
            epsilon: 1e-6,
            max_iterations: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub peers: usize,
    pub num_files: usize,
    /// Query cycles in a run; a rejected query still uses a cycle.
    pub num_transactions: usize,
    pub zipf_gamma: f64,
    /// Replica count of the least popular file.
    pub min_replicas: usize,
    pub topology: Topology,
    pub ttl_initial: u32,
    pub ttl_upper: u32,
    pub ttl_step: u32,
    /// Responders below this global trust are never chosen (Absolute Trust only).
    pub global_ref: f64,
    /// Query cycles between trust updates.
    pub update_period: usize,
    /// Probability a peer acts according to its profile in a given interaction.
    pub behavior_fidelity: f64,
    pub weights: WeightConfig,
    pub solver: SolverConfig,
    pub selection_mode: SelectionMode,
    /// Mixing weight of global against local trust when the requester has history.
    pub beta: f64,
    pub holder_replication: usize,
    pub algorithm: Algorithm,
    pub population: Population,
    pub baseline: BaselineParams,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        let weights = WeightConfig::default();
        Self {
            peers: 100,
            num_files: 1000,
            num_transactions: 10_000,
            zipf_gamma: 0.4,
            min_replicas: 4,
            topology: Topology::RandomRegular { degree: 8 },
            ttl_initial: 3,
            ttl_upper: 7,
            ttl_step: 2,
            global_ref: 5.5,
            update_period: 200,
            behavior_fidelity: 0.95,
            solver: SolverConfig::for_weights(&weights),
            weights,
            selection_mode: SelectionMode::Max,
            beta: 1.0,
            holder_replication: 2,
            algorithm: Algorithm::Absolute,
            population: Population::default(),
            baseline: BaselineParams::default(),
            seed: 42,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.peers < 2 {
            return fail(format!("peers must be at least 2, got {}", self.peers));
        }
        if self.num_files == 0 {
            return fail("num_files must be at least 1".into());
        }
        if !(self.zipf_gamma >= 0.0 && self.zipf_gamma.is_finite()) {
            return fail(format!("zipf_gamma must be nonnegative, got {}", self.zipf_gamma));
        }
        if self.min_replicas == 0 || self.min_replicas > self.peers {
            return fail(format!("min_replicas must lie in [1, peers], got {}", self.min_replicas));
        }
        if self.ttl_upper < self.ttl_initial {
            return fail("ttl_upper must be at least ttl_initial".into());
        }
        if self.ttl_step == 0 && self.ttl_upper > self.ttl_initial {
            return fail("ttl_step must be positive".into());
        }
        if self.update_period == 0 {
            return fail("update_period must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.behavior_fidelity) {
            return fail(format!("behavior_fidelity must lie in [0, 1], got {}", self.behavior_fidelity));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return fail(format!("beta must lie in [0, 1], got {}", self.beta));
        }
        if self.holder_replication == 0 || self.holder_replication >= self.peers {
            return fail(format!(
                "holder_replication must lie in [1, peers - 1], got {}",
                self.holder_replication
            ));
        }
        WeightConfig::new(self.weights.good(), self.weights.bad())?;
        self.solver.validate()?;
        if let Topology::RandomRegular { degree } = self.topology {
            if degree == 0 || degree >= self.peers || (degree * self.peers) % 2 == 1 {
                return fail(format!("no {degree}-regular graph on {} peers", self.peers));
            }
        }
        let pop = &self.population;
        let fractions = [pop.malicious_fraction, pop.unpredictable_fraction, pop.group_fraction];
        if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return fail("population fractions must lie in [0, 1]".into());
        }
        let (lo, hi) = pop.switch_window;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return fail(format!("switch_window must satisfy 0 <= lo <= hi <= 1, got ({lo}, {hi})"));
        }
        let adversaries = self.malicious_count() + self.unpredictable_count() + self.collective_members();
        if adversaries + self.baseline.pretrusted_count.min(1) > self.peers {
            return fail("population mix leaves no good peers".into());
        }
        let b = &self.baseline;
        if !(0.0..=1.0).contains(&b.damping) || !(b.epsilon > 0.0) || b.max_iterations == 0 {
            return fail("baseline damping must lie in [0, 1] with positive epsilon".into());
        }
        if !(b.power_node_fraction > 0.0 && b.power_node_fraction <= 1.0) {
            return fail("power_node_fraction must lie in (0, 1]".into());
        }
        Ok(())
    }

    pub fn malicious_count(&self) -> usize {
        fraction_of(self.population.malicious_fraction, self.peers)
    }

    pub fn unpredictable_count(&self) -> usize {
        fraction_of(self.population.unpredictable_fraction, self.peers)
    }

    pub fn group_size(&self) -> usize {
        fraction_of(self.population.group_fraction, self.peers).max(1)
    }

    pub fn collective_members(&self) -> usize {
        self.population.collective_groups * self.group_size()
    }

    pub fn power_node_count(&self) -> usize {
        ((self.baseline.power_node_fraction * self.peers as f64).ceil() as usize).clamp(1, self.peers)
    }
}

fn fraction_of(fraction: f64, n: usize) -> usize {
    (fraction * n as f64).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_reference_setup() {
        let c = SimConfig::default();
        assert_eq!((c.peers, c.num_files, c.num_transactions), (100, 1000, 10_000));
        assert_eq!(c.zipf_gamma, 0.4);
        assert_eq!((c.solver.p, c.solver.q), (3, 1));
        assert_eq!((c.weights.bad(), c.weights.good()), (1.0, 10.0));
        assert_eq!(c.global_ref, 5.5);
        assert_eq!(c.solver.initial_value, 5.5);
        assert_eq!(c.update_period, 200);
        assert_eq!(c.behavior_fidelity, 0.95);
        assert_eq!(c.power_node_count(), 5);
        c.validate().unwrap();
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("pagerank".parse::<Algorithm>().is_err());
        assert_eq!("max".parse::<SelectionMode>().unwrap(), SelectionMode::Max);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = SimConfig::default();
        c.beta = 1.5;
        assert!(c.validate().is_err());
        let mut c = SimConfig::default();
        c.population.malicious_fraction = 1.0;
        assert!(c.validate().is_err());
        let mut c = SimConfig::default();
        c.topology = Topology::RandomRegular { degree: 7 };
        c.peers = 101;
        assert!(c.validate().is_err());
    }
}
