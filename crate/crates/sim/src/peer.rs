use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;

/// Behavior profile of a simulated peer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Behavior {
    Good,
    PureMalicious,
    /// Good until `switch_at` query cycles have elapsed, malicious afterwards.
    Unpredictable { switch_at: usize },
    /// Member of colluding group `group`.
    Collective { group: usize },
}

impl Behavior {
    /// Whether the profile itself prescribes malicious conduct at `cycle`.
    pub fn is_malicious_at(&self, cycle: usize) -> bool {
        match *self {
            Behavior::Good => false,
            Behavior::PureMalicious | Behavior::Collective { .. } => true,
            Behavior::Unpredictable { switch_at } => cycle >= switch_at,
        }
    }

    pub fn group(&self) -> Option<usize> {
        match *self {
            Behavior::Collective { group } => Some(group),
            _ => None,
        }
    }

    pub fn is_good(&self) -> bool {
        matches!(self, Behavior::Good)
    }

    /// Whether a malicious-acting peer with this profile treats `other` as an ally.
    ///
    /// A collective sides with its own group and with the other malicious kinds;
    /// every other malicious peer sides with anyone malicious at `cycle`.
    pub fn is_allied_with(&self, other: &Behavior, cycle: usize) -> bool {
        match (self.group(), other.group()) {
            (Some(a), Some(b)) => a == b,
            (Some(_), None) => other.is_malicious_at(cycle),
            (None, Some(_)) => false,
            (None, None) => other.is_malicious_at(cycle),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeerProfile {
    pub id: usize,
    pub behavior: Behavior,
    pub owned_files: BTreeSet<usize>,
}

impl PeerProfile {
    pub fn is_malicious_at(&self, cycle: usize) -> bool {
        self.behavior.is_malicious_at(cycle)
    }

    pub fn owns(&self, file: usize) -> bool {
        self.owned_files.contains(&file)
    }
}

/// Draws a behavior for every peer: the configured numbers of pure malicious,
/// unpredictable and collective peers land on a seeded random subset of ids and
/// everyone else is good.
pub fn assign_behaviors<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Vec<Behavior> {
    let n = config.peers;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut behaviors = vec![Behavior::Good; n];
    let mut slots = order.into_iter();

    for peer in slots.by_ref().take(config.malicious_count()) {
        behaviors[peer] = Behavior::PureMalicious;
    }
    let (lo, hi) = config.population.switch_window;
    let total = config.num_transactions as f64;
    for peer in slots.by_ref().take(config.unpredictable_count()) {
        let fraction = if hi > lo { rng.random_range(lo..=hi) } else { lo };
        let switch_at = (fraction * total).round() as usize;
        behaviors[peer] = Behavior::Unpredictable { switch_at };
    }
    let size = config.group_size();
    for group in 0..config.population.collective_groups {
        for peer in slots.by_ref().take(size) {
            behaviors[peer] = Behavior::Collective { group };
        }
    }
    behaviors
}
