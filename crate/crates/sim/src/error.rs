use atrust_core::TrustError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("unknown scenario `{0}` (expected malicious, unpredictable or collective)")]
    UnknownScenario(String),
    #[error("unknown algorithm `{0}` (expected absolute, eigentrust or powertrust)")]
    UnknownAlgorithm(String),
    #[error("unknown selection mode `{0}` (expected max or proportional)")]
    UnknownSelectionMode(String),
    #[error("no completed transactions")]
    NoTransactions,
    #[error("load spread needs at least two good peers, got {0}")]
    TooFewGoodPeers(usize),
    #[error(transparent)]
    Trust(#[from] TrustError),
}
