//! EigenTrust and PowerTrust aggregation, used as comparison baselines.
//!
//! Both normalize each rater's opinions into a probability row and compute the
//! stationary vector of a damped random walk. They differ only in where the
//! damping mass goes: EigenTrust sends it to a fixed pre-trusted set, PowerTrust
//! to the highest-ranked peers of a first pass with uniform pre-trust.

use serde::{Deserialize, Serialize};

use crate::error::{SolveError, TrustError};
use crate::local::TransactionCounts;
use crate::scalar::Scalar;
use crate::solver::GlobalTrustVector;

/// Row-stochastic local trust. A row without any positive opinion has no entries
/// and redistributes its mass along the pre-trust distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTrustMatrix<S> {
    dimension: usize,
    rows: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> NormalizedTrustMatrix<S> {
    /// Normalizes nonnegative raw opinions `(rater, ratee, score)`; self-ratings and
    /// zero scores are dropped.
    pub fn from_raw<I>(dimension: usize, raw: I) -> Result<Self, TrustError>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); dimension];
        for (rater, ratee, score) in raw {
            for peer in [rater, ratee] {
                if peer >= dimension {
                    return Err(TrustError::PeerOutOfRange { peer, dimension });
                }
            }
            if !(score >= S::zero() && score.is_finite()) {
                return Err(TrustError::NonPositive {
                    what: "raw opinion",
                    value: score.as_f64(),
                });
            }
            if rater != ratee && score > S::zero() {
                rows[rater].push((ratee, score));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            // merge duplicates
            row.dedup_by(|later, kept| {
                if later.0 == kept.0 {
                    kept.1 += later.1;
                    true
                } else {
                    false
                }
            });
            let total = row.iter().fold(S::zero(), |acc, &(_, s)| acc + s);
            for entry in row.iter_mut() {
                entry.1 /= total;
            }
        }
        Ok(Self { dimension, rows })
    }

    /// Normalizes `max(n_g − n_b, 0)` per rated pair.
    pub fn from_counts<'a, I>(dimension: usize, counts: I) -> Result<Self, TrustError>
    where
        I: IntoIterator<Item = (usize, usize, &'a TransactionCounts)>,
    {
        Self::from_raw(
            dimension,
            counts.into_iter().map(|(i, j, c)| {
                (i, j, S::from_count(c.satisfactory.saturating_sub(c.unsatisfactory)))
            }),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Normalized opinions of `rater`; empty when it falls back to pre-trust.
    pub fn row(&self, rater: usize) -> &[(usize, S)] {
        &self.rows[rater]
    }

    pub fn has_opinions(&self, rater: usize) -> bool {
        !self.rows[rater].is_empty()
    }

    /// Relabels peers: peer `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut rows = vec![Vec::new(); self.dimension];
        for (i, row) in self.rows.iter().enumerate() {
            let mut mapped: Vec<_> = row.iter().map(|&(j, s)| (perm[j], s)).collect();
            mapped.sort_by_key(|&(j, _)| j);
            rows[perm[i]] = mapped;
        }
        Self {
            dimension: self.dimension,
            rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig<S> {
    /// Pre-trusted peers (EigenTrust only).
    pub pretrusted: Vec<usize>,
    /// Weight `a` of the pre-trust distribution in each step.
    pub damping: S,
    /// Number of power nodes elected by PowerTrust.
    pub power_nodes: usize,
    /// Stop once `‖Δt‖₁ < epsilon`.
    pub epsilon: S,
    pub max_iterations: usize,
}

impl<S: Scalar> BaselineConfig<S> {
    /// Conventional parameters: damping 0.15, `⌈0.05·N⌉` power nodes, epsilon `1e-6`.
    pub fn for_network(dimension: usize, pretrusted: Vec<usize>) -> Self {
        Self {
            pretrusted,
            damping: S::lit(0.15),
            power_nodes: dimension.div_ceil(20).max(1),
            epsilon: S::lit(1e-6),
            max_iterations: 1000,
        }
    }

    fn validate(&self, dimension: usize) -> Result<(), TrustError> {
        if !(self.damping >= S::zero() && self.damping <= S::one()) {
            return Err(TrustError::InvalidConfig(format!(
                "damping must lie in [0, 1], got {}",
                self.damping
            )));
        }
        if !(self.epsilon > S::zero()) {
            return Err(TrustError::InvalidConfig("epsilon must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(TrustError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if let Some(&peer) = self.pretrusted.iter().find(|&&p| p >= dimension) {
            return Err(TrustError::PeerOutOfRange { peer, dimension });
        }
        Ok(())
    }
}

/// PowerTrust result: the final trust plus the peers elected as power nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTrustOutcome<S> {
    pub trust: GlobalTrustVector<S>,
    pub power_nodes: Vec<usize>,
}

/// Stationary vector of `t ← (1 − a)·Cᵀt + a·p` with `p` uniform over the
/// pre-trusted set.
pub fn eigentrust<S: Scalar>(
    matrix: &NormalizedTrustMatrix<S>,
    config: &BaselineConfig<S>,
) -> Result<GlobalTrustVector<S>, SolveError<S>> {
    config.validate(matrix.dimension())?;
    if config.pretrusted.is_empty() {
        return Err(TrustError::InvalidConfig("EigenTrust needs at least one pre-trusted peer".into()).into());
    }
    let pre = distribution_over(matrix.dimension(), &config.pretrusted);
    damped_walk(matrix, &pre, config)
}

/// Two passes: rank with uniform pre-trust, then rerun with the pre-trust mass on
/// the top `power_nodes` peers (ties to the lower id).
pub fn powertrust<S: Scalar>(
    matrix: &NormalizedTrustMatrix<S>,
    config: &BaselineConfig<S>,
) -> Result<PowerTrustOutcome<S>, SolveError<S>> {
    config.validate(matrix.dimension())?;
    let n = matrix.dimension();
    if config.power_nodes == 0 || config.power_nodes > n {
        return Err(TrustError::InvalidConfig(format!(
            "power node count must lie in [1, {n}], got {}",
            config.power_nodes
        ))
        .into());
    }
    let everyone: Vec<usize> = (0..n).collect();
    let first = damped_walk(matrix, &distribution_over(n, &everyone), config)?;
    let mut power_nodes: Vec<usize> = first.ranking().into_iter().take(config.power_nodes).collect();
    power_nodes.sort_unstable();
    let trust = damped_walk(matrix, &distribution_over(n, &power_nodes), config)?;
    Ok(PowerTrustOutcome { trust, power_nodes })
}

fn distribution_over<S: Scalar>(n: usize, peers: &[usize]) -> Vec<S> {
    let mut p = vec![S::zero(); n];
    let share = S::one() / S::from_usize(peers.len()).unwrap();
    for &i in peers {
        p[i] = share;
    }
    p
}

fn damped_walk<S: Scalar>(
    matrix: &NormalizedTrustMatrix<S>,
    pre: &[S],
    config: &BaselineConfig<S>,
) -> Result<GlobalTrustVector<S>, SolveError<S>> {
    let n = matrix.dimension();
    let a = config.damping;
    let keep = S::one() - a;
    let mut current = pre.to_vec();
    let mut next = vec![S::zero(); n];
    let mut residual_trace = Vec::new();
    for iteration in 1..=config.max_iterations {
        next.iter_mut().zip(pre).for_each(|(x, &p)| *x = a * p);
        let mut fallback = S::zero();
        for (i, &ti) in current.iter().enumerate() {
            let row = matrix.row(i);
            if row.is_empty() {
                fallback += ti;
            } else {
                for &(j, c) in row {
                    next[j] += keep * c * ti;
                }
            }
        }
        if fallback > S::zero() {
            next.iter_mut().zip(pre).for_each(|(x, &p)| *x += keep * fallback * p);
        }
        let delta = next
            .iter()
            .zip(&current)
            .fold(S::zero(), |acc, (&x, &y)| acc + (x - y).abs());
        residual_trace.push(delta);
        std::mem::swap(&mut current, &mut next);
        if delta < config.epsilon {
            return Ok(GlobalTrustVector {
                values: current,
                iterations_used: iteration,
                residual_trace,
            });
        }
    }
    Err(SolveError::NotConverged(GlobalTrustVector {
        values: current,
        iterations_used: config.max_iterations,
        residual_trace,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn symmetric_pair() -> NormalizedTrustMatrix<f64> {
        NormalizedTrustMatrix::from_raw(2, [(0, 1, 1.0), (1, 0, 1.0)]).unwrap()
    }

    #[test]
    fn rows_are_stochastic() {
        let m = NormalizedTrustMatrix::from_raw(3, [(0, 1, 2.0), (0, 2, 6.0), (1, 0, 0.0)]).unwrap();
        let total: f64 = m.row(0).iter().map(|e| e.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(m.row(0), &[(1, 0.25), (2, 0.75)]);
        assert!(!m.has_opinions(1));
        assert!(!m.has_opinions(2));
    }

    #[test]
    fn counts_map_to_net_satisfaction() {
        let good = TransactionCounts::new(5, 0, 2);
        let bad = TransactionCounts::new(1, 0, 4);
        let m = NormalizedTrustMatrix::<f64>::from_counts(3, [(0, 1, &good), (0, 2, &bad)]).unwrap();
        assert_eq!(m.row(0), &[(1, 1.0)]);
    }

    #[test]
    fn symmetric_pair_splits_evenly() {
        let cfg = BaselineConfig {
            damping: 0.5,
            ..BaselineConfig::for_network(2, vec![0, 1])
        };
        let t = eigentrust(&symmetric_pair(), &cfg).unwrap();
        assert_relative_eq!(t.values[0], 0.5, epsilon = 1e-9);
        assert_relative_eq!(t.values[1], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn full_damping_returns_pretrust() {
        let m = NormalizedTrustMatrix::from_raw(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 4.0)]).unwrap();
        let cfg = BaselineConfig {
            damping: 1.0,
            ..BaselineConfig::for_network(3, vec![2])
        };
        let t = eigentrust(&m, &cfg).unwrap();
        assert_eq!(t.values, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn eigentrust_needs_pretrusted_peers() {
        let cfg = BaselineConfig::for_network(2, vec![]);
        assert!(eigentrust(&symmetric_pair(), &cfg).is_err());
        let cfg = BaselineConfig::for_network(2, vec![5]);
        assert!(eigentrust(&symmetric_pair(), &cfg).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let m = NormalizedTrustMatrix::from_raw(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let cfg = BaselineConfig {
            damping: 0.0,
            max_iterations: 50,
            ..BaselineConfig::for_network(3, vec![0])
        };
        // a pure 3-cycle never mixes
        let err = eigentrust(&m, &cfg).unwrap_err();
        assert!(err.last_iterate().is_some());
    }

    #[test]
    fn powertrust_symmetric_ties_go_to_lowest_id() {
        let cfg = BaselineConfig {
            power_nodes: 1,
            ..BaselineConfig::for_network(2, vec![0])
        };
        let out = powertrust(&symmetric_pair(), &cfg).unwrap();
        assert_eq!(out.power_nodes, vec![0]);
        assert_relative_eq!(out.trust.values.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn default_power_node_count() {
        assert_eq!(BaselineConfig::<f64>::for_network(100, vec![]).power_nodes, 5);
        assert_eq!(BaselineConfig::<f64>::for_network(101, vec![]).power_nodes, 6);
        assert_eq!(BaselineConfig::<f64>::for_network(3, vec![]).power_nodes, 1);
    }
}
