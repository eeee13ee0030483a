//! Absolute Trust: reputation aggregation for peer-to-peer networks without
//! normalization.
//!
//! Peers score each provider they downloaded from ([`local_trust`]); the scores
//! are aggregated into a network-wide absolute trust value per peer by iterating
//! a nonlinear map to its unique positive fixed point ([`solve_absolute_trust`]).
//! Because the result is on the same `[w_b, w_g]` scale as the local scores, a
//! single threshold separates good from malicious peers, which relative
//! rankings such as [`eigentrust`] and [`powertrust`] cannot do.
//!
//! The numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`.
//!
//! ```
//! use atrust_core::{solve_absolute_trust, SolverConfig, TrustMatrix};
//!
//! let m = TrustMatrix::from_triples(2, [(0, 1, 8.0), (1, 0, 6.0)]).unwrap();
//! let cfg = SolverConfig::default().with_exponents(1, 1).with_threshold(1e-12);
//! let t = solve_absolute_trust(&m, &cfg).unwrap();
//! assert!((t.values[0] - 288f64.cbrt()).abs() < 1e-9);
//! ```

pub mod baselines;
pub mod error;
pub mod local;
pub mod matrix;
pub mod scalar;
pub mod solver;

pub use baselines::{eigentrust, powertrust};
pub use error::TrustError;
pub use local::{local_trust, Rating, TransactionCounts};
pub use scalar::Scalar;
pub use solver::{
    absolute_trust_step, bias_evaluation, combined_score, residual, set_trust,
    solve_absolute_trust, solve_from,
};

pub type WeightConfig = local::WeightConfig<f64>;
pub type TrustMatrix = matrix::TrustMatrix<f64>;
pub type SolverConfig = solver::SolverConfig<f64>;
pub type GlobalTrustVector = solver::GlobalTrustVector<f64>;
pub type SolveError = error::SolveError<f64>;
pub type NormalizedTrustMatrix = baselines::NormalizedTrustMatrix<f64>;
pub type BaselineConfig = baselines::BaselineConfig<f64>;
pub type PowerTrustOutcome = baselines::PowerTrustOutcome<f64>;
