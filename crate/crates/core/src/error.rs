use thiserror::Error;

use crate::scalar::Scalar;
use crate::solver::GlobalTrustVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrustError {
    #[error("no interaction recorded: local trust needs at least one transaction")]
    NoInteraction,
    #[error("invalid weights: need w_g > w_b > 0, got w_g = {w_g}, w_b = {w_b}")]
    InvalidWeights { w_g: f64, w_b: f64 },
    #[error("{what} must be strictly positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("peer {peer}: {what} must be strictly positive and finite, got {value}")]
    NonPositivePeer {
        peer: usize,
        what: &'static str,
        value: f64,
    },
    #[error("set trust of an empty set is undefined")]
    EmptySet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("peer {peer} out of range for a network of {dimension} peers")]
    PeerOutOfRange { peer: usize, dimension: usize },
    #[error("peer {peer} cannot rate itself")]
    SelfRating { peer: usize },
    #[error("local trust {value} of peer {ratee} (rated by {rater}) lies outside [{low}, {high}]")]
    OutOfBounds {
        rater: usize,
        ratee: usize,
        value: f64,
        low: f64,
        high: f64,
    },
    #[error("mixing weight beta must lie in [0, 1], got {0}")]
    InvalidBeta(f64),
    #[error("trust matrix has no entries")]
    EmptyMatrix,
    #[error("non-finite trust (NaN or overflow) produced for peer {peer}")]
    NotANumber { peer: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Failure of an iterative solve.
///
/// Non-convergence carries the last iterate together with its residual trace so that
/// callers can inspect it; it is never returned as if it were a fixed point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError<S: Scalar> {
    #[error(transparent)]
    Invalid(#[from] TrustError),
    #[error(
        "no convergence after {} iterations (last residual {:?})",
        .0.iterations_used,
        .0.residual_trace.last()
    )]
    NotConverged(GlobalTrustVector<S>),
}

impl<S: Scalar> SolveError<S> {
    /// The last iterate of a non-converged solve.
    pub fn last_iterate(&self) -> Option<&GlobalTrustVector<S>> {
        match self {
            SolveError::NotConverged(v) => Some(v),
            SolveError::Invalid(_) => None,
        }
    }
}
