//! Sweeps, trial averaging and metrics on top of the simulator.

pub mod convergence;
pub mod metrics;
pub mod sweep;

pub use crate::engine::ExperimentResult;
pub use convergence::{convergence_study, seeded_matrix, ConvergenceRow, Exponents};
pub use metrics::{authentic_percent, load_stddev, summarize, Summary};
pub use sweep::{run_trial, sweep, Scenario, SweepRow, Trial};
