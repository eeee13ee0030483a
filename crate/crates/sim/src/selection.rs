use std::cmp::Ordering;

use atrust_core::combined_score;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, SelectionMode, SimConfig};

/// A peer that answered a query, with the trust figures the requester can see.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Responder {
    pub peer: usize,
    pub global: f64,
    /// The requester's own local trust in this peer, if they have interacted.
    pub local: Option<f64>,
}

impl Responder {
    pub fn new(peer: usize, global: f64) -> Self {
        Self { peer, global, local: None }
    }

    pub fn with_local(mut self, local: f64) -> Self {
        self.local = Some(local);
        self
    }
}

/// How a requester picks its source among responders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionRule {
    pub mode: SelectionMode,
    /// Responders whose global trust falls below this are dropped.
    pub threshold: Option<f64>,
    /// Weight of global trust in the score when local history exists; `None`
    /// ignores local history.
    pub beta: Option<f64>,
}

impl SelectionRule {
    /// Absolute Trust scores on the trust scale and filters by `global_ref`; the
    /// baselines produce probability vectors, so they rank by global trust alone.
    pub fn for_config(config: &SimConfig) -> Self {
        match config.algorithm {
            Algorithm::Absolute => Self {
                mode: config.selection_mode,
                threshold: Some(config.global_ref),
                beta: Some(config.beta),
            },
            Algorithm::EigenTrust | Algorithm::PowerTrust => Self {
                mode: config.selection_mode,
                threshold: None,
                beta: None,
            },
        }
    }

    pub fn without_threshold(self) -> Self {
        Self { threshold: None, ..self }
    }

    fn score(&self, r: &Responder) -> f64 {
        match (self.beta, r.local) {
            (Some(beta), Some(local)) => combined_score(r.global, local, beta).unwrap_or(r.global),
            _ => r.global,
        }
    }
}

/// Picks a source, or `None` when no responder survives the threshold.
pub fn select_source<R: Rng + ?Sized>(responders: &[Responder], rule: &SelectionRule, rng: &mut R) -> Option<usize> {
    let survivors: Vec<&Responder> = responders
        .iter()
        .filter(|r| rule.threshold.is_none_or(|t| r.global >= t))
        .collect();
    if survivors.is_empty() {
        return None;
    }
    match rule.mode {
        SelectionMode::Max => survivors
            .iter()
            .map(|r| (rule.score(r), r.peer))
            .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(b.1.cmp(&a.1)))
            .map(|(_, peer)| peer),
        SelectionMode::Proportional => {
            let total: f64 = survivors.iter().map(|r| r.global.max(0.0)).sum();
            if !(total > 0.0) {
                return Some(survivors[rng.random_range(0..survivors.len())].peer);
            }
            let mut target = rng.random::<f64>() * total;
            for r in &survivors {
                target -= r.global.max(0.0);
                if target < 0.0 {
                    return Some(r.peer);
                }
            }
            survivors.iter().rev().find(|r| r.global > 0.0).map(|r| r.peer)
        }
    }
}
