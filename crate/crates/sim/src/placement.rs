//! Zipf-shaped file replication.
//!
//! The file of popularity rank `r` (1-based) gets `min_replicas · (F / r)^γ`
//! copies before rounding, so the least popular file still has `min_replicas`
//! owners and the ratio between rank 1 and rank `F` is `F^γ`. Copies land on
//! distinct peers chosen uniformly at random.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;

use crate::config::SimConfig;

/// Unrounded replica count for popularity rank `rank` (1-based).
pub fn replica_weight(rank: usize, num_files: usize, gamma: f64, min_replicas: usize) -> f64 {
    min_replicas as f64 * (num_files as f64 / rank as f64).powf(gamma)
}

/// Rounded replica count per file, indexed by file id (file `f` has rank `f + 1`),
/// capped at the number of peers.
pub fn replica_counts(config: &SimConfig) -> Vec<usize> {
    (1..=config.num_files)
        .map(|rank| {
            let w = replica_weight(rank, config.num_files, config.zipf_gamma, config.min_replicas);
            (w.round() as usize).clamp(1, config.peers)
        })
        .collect()
}

/// Who owns what, indexed both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    owners: Vec<Vec<usize>>,
    owned: Vec<BTreeSet<usize>>,
}

impl Placement {
    pub fn from_owners(peers: usize, owners: Vec<Vec<usize>>) -> Self {
        let mut owned = vec![BTreeSet::new(); peers];
        for (file, list) in owners.iter().enumerate() {
            for &p in list {
                owned[p].insert(file);
            }
        }
        Self { owners, owned }
    }

    /// Owners of `file` in increasing id order.
    pub fn owners_of(&self, file: usize) -> &[usize] {
        &self.owners[file]
    }

    pub fn files_of(&self, peer: usize) -> &BTreeSet<usize> {
        &self.owned[peer]
    }

    pub fn owns(&self, peer: usize, file: usize) -> bool {
        self.owned[peer].contains(&file)
    }

    pub fn num_files(&self) -> usize {
        self.owners.len()
    }

    pub fn num_peers(&self) -> usize {
        self.owned.len()
    }

    /// Per-peer file sets, consuming the placement.
    pub fn into_peer_files(self) -> Vec<BTreeSet<usize>> {
        self.owned
    }
}

pub fn place_files<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Placement {
    let owners = replica_counts(config)
        .into_iter()
        .map(|count| {
            let mut chosen = index::sample(rng, config.peers, count).into_vec();
            chosen.sort_unstable();
            chosen
        })
        .collect();
    Placement::from_owners(config.peers, owners)
}
