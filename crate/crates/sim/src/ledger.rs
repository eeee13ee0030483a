use atrust_core::{local_trust, Rating, TransactionCounts, TrustError, TrustMatrix, WeightConfig};
use serde::{Deserialize, Serialize};

/// Download history of one rater with one provider, plus the local trust it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub rater: usize,
    pub ratee: usize,
    pub counts: TransactionCounts,
    pub local_trust: f64,
}

/// Message counters for one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageTally {
    /// One per transaction: the rater reports its updated local trust once.
    pub feedback_messages: u64,
    /// Rater-trust fetches between holders during update rounds.
    pub trust_read_messages: u64,
    /// What a scheme that renormalizes and resends every opinion would send.
    pub hypothetical_normalized_feedback: u64,
}

impl MessageTally {
    /// Extra feedback messages a renormalizing scheme would have sent.
    pub fn saving(&self) -> u64 {
        self.hypothetical_normalized_feedback - self.feedback_messages
    }

    pub fn feedback_ratio(&self) -> Option<f64> {
        (self.feedback_messages > 0)
            .then(|| self.hypothetical_normalized_feedback as f64 / self.feedback_messages as f64)
    }
}

/// All pairwise download histories of an `N`-peer network.
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    peers: usize,
    weights: WeightConfig,
    entries: Vec<Option<LedgerEntry>>,
    source_counts: Vec<usize>,
    pairs: usize,
}

impl Ledger {
    pub fn new(peers: usize, weights: WeightConfig) -> Self {
        Self {
            peers,
            weights,
            entries: vec![None; peers * peers],
            source_counts: vec![0; peers],
            pairs: 0,
        }
    }

    pub fn peers(&self) -> usize {
        self.peers
    }

    pub fn get(&self, rater: usize, ratee: usize) -> Option<&LedgerEntry> {
        self.entries[rater * self.peers + ratee].as_ref()
    }

    pub fn local_trust(&self, rater: usize, ratee: usize) -> Option<f64> {
        self.get(rater, ratee).map(|e| e.local_trust)
    }

    /// Records one rated download and refreshes the pair's local trust.
    pub fn record(&mut self, rater: usize, ratee: usize, rating: Rating) -> Result<&LedgerEntry, TrustError> {
        if rater == ratee {
            return Err(TrustError::SelfRating { peer: rater });
        }
        for peer in [rater, ratee] {
            if peer >= self.peers {
                return Err(TrustError::PeerOutOfRange {
                    peer,
                    dimension: self.peers,
                });
            }
        }
        let slot = &mut self.entries[rater * self.peers + ratee];
        if slot.is_none() {
            self.source_counts[rater] += 1;
            self.pairs += 1;
        }
        let entry = slot.get_or_insert(LedgerEntry {
            rater,
            ratee,
            counts: TransactionCounts::default(),
            local_trust: 0.0,
        });
        entry.counts.record(rating);
        entry.local_trust = local_trust(&entry.counts, &self.weights)?;
        Ok(entry)
    }

    /// Number of distinct providers `rater` has downloaded from.
    pub fn source_count(&self, rater: usize) -> usize {
        self.source_counts[rater]
    }

    /// Number of rated pairs.
    pub fn len(&self) -> usize {
        self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs == 0
    }

    /// Peers that have rated at least one provider.
    pub fn active_raters(&self) -> usize {
        self.source_counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn entries(&self) -> impl Iterator<Item = &LedgerEntry> + '_ {
        self.entries.iter().flatten()
    }

    pub fn trust_matrix(&self) -> Result<TrustMatrix, TrustError> {
        TrustMatrix::from_triples(self.peers, self.entries().map(|e| (e.rater, e.ratee, e.local_trust)))
    }

    /// `(rater, ratee, counts)` for every rated pair.
    pub fn counts(&self) -> impl Iterator<Item = (usize, usize, &TransactionCounts)> + '_ {
        self.entries().map(|e| (e.rater, e.ratee, &e.counts))
    }
}
