//! Periodic global-trust recomputation for each aggregation scheme.

use atrust_core::baselines::{eigentrust, powertrust};
use atrust_core::{solve_from, BaselineConfig, GlobalTrustVector, NormalizedTrustMatrix, SolveError};
use serde::{Deserialize, Serialize};

use crate::config::{Algorithm, SimConfig};
use crate::error::SimError;
use crate::ledger::Ledger;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpdateOutcome {
    pub trust: GlobalTrustVector,
    pub converged: bool,
    /// Rater-trust fetches between holders: one per stored opinion per iteration.
    pub trust_reads: u64,
}

/// Absolute Trust update warm-started from `previous`. An empty ledger leaves
/// everyone at the initial value without iterating.
pub fn update_round(ledger: &Ledger, previous: &GlobalTrustVector, config: &SimConfig) -> Result<UpdateOutcome, SimError> {
    if ledger.is_empty() {
        return Ok(UpdateOutcome {
            trust: GlobalTrustVector::uniform(ledger.peers(), config.solver.initial_value),
            converged: true,
            trust_reads: 0,
        });
    }
    let matrix = ledger.trust_matrix()?;
    let reads = |t: &GlobalTrustVector| (t.iterations_used * matrix.nnz()) as u64;
    match solve_from(&matrix, previous, &config.solver) {
        Ok(trust) => Ok(UpdateOutcome {
            trust_reads: reads(&trust),
            trust,
            converged: true,
        }),
        Err(SolveError::NotConverged(trust)) => Ok(UpdateOutcome {
            trust_reads: reads(&trust),
            trust,
            converged: false,
        }),
        Err(SolveError::Invalid(e)) => Err(e.into()),
    }
}

/// EigenTrust or PowerTrust recomputed from scratch on the normalized ledger.
pub fn baseline_round(ledger: &Ledger, config: &SimConfig, pretrusted: &[usize]) -> Result<UpdateOutcome, SimError> {
    let matrix = NormalizedTrustMatrix::from_counts(ledger.peers(), ledger.counts())?;
    let nnz: usize = (0..ledger.peers()).map(|i| matrix.row(i).len()).sum();
    let params = BaselineConfig {
        pretrusted: pretrusted.to_vec(),
        damping: config.baseline.damping,
        power_nodes: config.power_node_count(),
        epsilon: config.baseline.epsilon,
        max_iterations: config.baseline.max_iterations,
    };
    let result = match config.algorithm {
        Algorithm::EigenTrust => eigentrust(&matrix, &params),
        Algorithm::PowerTrust => powertrust(&matrix, &params).map(|o| o.trust),
        Algorithm::Absolute => unreachable!("baseline_round called for Absolute Trust"),
    };
    let (trust, converged) = match result {
        Ok(t) => (t, true),
        Err(SolveError::NotConverged(t)) => (t, false),
        Err(SolveError::Invalid(e)) => return Err(e.into()),
    };
    Ok(UpdateOutcome {
        trust_reads: (trust.iterations_used * nnz) as u64,
        trust,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use atrust_core::{solve_absolute_trust, Rating};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_ledger(config: &SimConfig, records: usize, rng: &mut ChaCha8Rng) -> Ledger {
        let mut ledger = Ledger::new(config.peers, config.weights);
        for _ in 0..records {
            add_random(&mut ledger, config.peers, rng);
        }
        ledger
    }

    fn add_random(ledger: &mut Ledger, n: usize, rng: &mut ChaCha8Rng) {
        let rater = rng.random_range(0..n);
        let ratee = (rater + rng.random_range(1..n)) % n;
        let rating = if rng.random_bool(0.7) {
            Rating::Satisfactory
        } else {
            Rating::Unsatisfactory
        };
        ledger.record(rater, ratee, rating).unwrap();
    }

    #[test]
    fn empty_ledger_gives_initial_value() {
        let config = SimConfig::default();
        let ledger = Ledger::new(100, config.weights);
        let prev = GlobalTrustVector::uniform(100, 3.0);
        let out = update_round(&ledger, &prev, &config).unwrap();
        assert!(out.trust.values.iter().all(|&v| v == 5.5));
        assert_eq!(out.trust_reads, 0);
    }

    #[test]
    fn unchanged_ledger_reconverges_immediately() {
        let config = SimConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ledger = random_ledger(&config, 2000, &mut rng);
        let start = GlobalTrustVector::uniform(100, 5.5);
        let first = update_round(&ledger, &start, &config).unwrap();
        let second = update_round(&ledger, &first.trust, &config).unwrap();
        assert!(second.converged);
        assert!(second.trust.iterations_used <= 2);
        assert_eq!(second.trust_reads, (second.trust.iterations_used * ledger.len()) as u64);
    }

    #[test]
    fn warm_start_beats_cold_start_after_small_change() {
        let config = SimConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut ledger = random_ledger(&config, 3000, &mut rng);
        let before = update_round(&ledger, &GlobalTrustVector::uniform(100, 5.5), &config).unwrap();
        for _ in 0..20 {
            add_random(&mut ledger, 100, &mut rng);
        }
        let warm = update_round(&ledger, &before.trust, &config).unwrap();
        let cold = solve_absolute_trust(&ledger.trust_matrix().unwrap(), &config.solver).unwrap();
        assert!(
            warm.trust.iterations_used < cold.iterations_used,
            "warm {} vs cold {}",
            warm.trust.iterations_used,
            cold.iterations_used
        );
    }

    #[test]
    fn baselines_produce_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for algorithm in [Algorithm::EigenTrust, Algorithm::PowerTrust] {
            let config = SimConfig {
                algorithm,
                ..SimConfig::default()
            };
            let ledger = random_ledger(&config, 1500, &mut rng);
            let out = baseline_round(&ledger, &config, &[0, 1, 2]).unwrap();
            let total: f64 = out.trust.values.iter().sum();
            assert!((total - 1.0).abs() < 1e-6);
            assert!(out.converged);
        }
    }
}
