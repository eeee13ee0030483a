use atrust_core::{solve_absolute_trust, SolveError, SolverConfig, TrustMatrix};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::stream_rng;
use crate::error::SimError;

/// Exponent pair of the aggregation; `α = q / p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: u32,
    pub q: u32,
}

impl Exponents {
    pub fn alpha(&self) -> f64 {
        f64::from(self.q) / f64::from(self.p)
    }

    /// `1`, `1/2`, … `1/5`.
    pub fn standard_set() -> Vec<Exponents> {
        (1..=5).map(|p| Exponents { p, q: 1 }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub exponents: Exponents,
    pub alpha: f64,
    /// Residual after each iteration.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl ConvergenceRow {
    /// First iteration (1-based) whose residual is below `level`.
    pub fn iterations_to(&self, level: f64) -> Option<usize> {
        self.residuals.iter().position(|&r| r < level).map(|i| i + 1)
    }
}

/// Fully connected `n`-peer matrix with local trust uniform in `[low, high]`.
pub fn seeded_matrix(n: usize, low: f64, high: f64, seed: u64) -> Result<TrustMatrix, SimError> {
    let mut rng = stream_rng(seed, 0);
    let triples: Vec<_> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, rng.random_range(low..=high)))
        .collect();
    Ok(TrustMatrix::from_triples(n, triples)?)
}

/// Solves the same matrix once per exponent pair and records the residual trace.
pub fn convergence_study(
    exponents: &[Exponents],
    matrix: &TrustMatrix,
    base: &SolverConfig,
) -> Result<Vec<ConvergenceRow>, SimError> {
    exponents
        .iter()
        .map(|&e| {
            if e.p == 0 || e.q == 0 {
                return Err(SimError::InvalidConfig(format!("alpha needs positive p and q, got {}/{}", e.q, e.p)));
            }
            let config = base.with_exponents(e.p, e.q);
            let (trust, converged) = match solve_absolute_trust(matrix, &config) {
                Ok(t) => (t, true),
                Err(SolveError::NotConverged(t)) => (t, false),
                Err(SolveError::Invalid(err)) => return Err(err.into()),
            };
            Ok(ConvergenceRow {
                exponents: e,
                alpha: e.alpha(),
                residuals: trust.residual_trace,
                converged,
            })
        })
        .collect()
}
