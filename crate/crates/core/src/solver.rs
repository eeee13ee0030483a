//! Absolute Trust aggregation.
//!
//! The global trust of peer `i` is the fixed point of
//!
//! ```text
//! t_i = [ A_i^p · B_i^q ]^(1/(p+q))
//! A_i = Σ_j T_ji·t_j / Σ_j t_j        (rater-weighted mean of local trust)
//! B_i = Σ_j t_j²   / Σ_j t_j          (set trust of the raters)
//! ```
//!
//! with sums over the raters `j` of `i`. The map is homogeneous of degree
//! `α/(1+α)` with `α = q/p`, and the iteration contracts by roughly that factor
//! per step. Peers nobody has rated yet hold the configured initial value and do
//! not take part in the residual.

use serde::{Deserialize, Serialize};

use crate::error::{SolveError, TrustError};
use crate::local::WeightConfig;
use crate::matrix::TrustMatrix;
use crate::scalar::{sum, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig<S> {
    /// Exponent of the weighted-mean term.
    pub p: u32,
    /// Exponent of the set-trust term.
    pub q: u32,
    /// Iteration stops once the residual drops below this.
    pub threshold: S,
    pub max_iterations: usize,
    /// Starting trust of every peer, and the value held by unrated peers.
    pub initial_value: S,
}

impl<S: Scalar> SolverConfig<S> {
    /// Default exponents and tolerances with the initial value at the weight midpoint.
    pub fn for_weights(weights: &WeightConfig<S>) -> Self {
        Self {
            initial_value: weights.neutral(),
            ..Self::default()
        }
    }

    pub fn with_exponents(mut self, p: u32, q: u32) -> Self {
        self.p = p;
        self.q = q;
        self
    }

    pub fn with_threshold(mut self, threshold: S) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// `α = q / p`.
    pub fn alpha(&self) -> S {
        S::from_u32(self.q).unwrap() / S::from_u32(self.p).unwrap()
    }

    pub fn validate(&self) -> Result<(), TrustError> {
        if self.p == 0 || self.q == 0 {
            return Err(TrustError::InvalidConfig(format!(
                "exponents p and q must be positive integers, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if !(self.threshold > S::zero() && self.threshold.is_finite()) {
            return Err(TrustError::InvalidConfig(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if self.max_iterations == 0 {
            return Err(TrustError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.initial_value > S::zero() && self.initial_value.is_finite()) {
            return Err(TrustError::InvalidConfig(format!(
                "initial_value must be positive, got {}",
                self.initial_value
            )));
        }
        Ok(())
    }
}

impl<S: Scalar> Default for SolverConfig<S> {
    /// `p = 3`, `q = 1`, threshold `1e-4`, 100 iterations, initial value 5.5.
    fn default() -> Self {
        Self {
            p: 3,
            q: 1,
            threshold: S::lit(1e-4),
            max_iterations: 100,
            initial_value: S::lit(5.5),
        }
    }
}

/// Global trust of every peer plus the history of the solve that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalTrustVector<S> {
    pub values: Vec<S>,
    pub iterations_used: usize,
    pub residual_trace: Vec<S>,
}

impl<S: Scalar> GlobalTrustVector<S> {
    pub fn uniform(dimension: usize, value: S) -> Self {
        Self::from_values(vec![value; dimension])
    }

    /// Wraps raw values with an empty history.
    pub fn from_values(values: Vec<S>) -> Self {
        Self {
            values,
            iterations_used: 0,
            residual_trace: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, peer: usize) -> Option<S> {
        self.values.get(peer).copied()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.values
    }

    /// Peer ids from most to least trusted; ties go to the lower id.
    pub fn ranking(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.values.len()).collect();
        ids.sort_by(|&a, &b| {
            self.values[b]
                .partial_cmp(&self.values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        ids
    }

    fn check_positive(&self) -> Result<(), TrustError> {
        match self.values.iter().position(|&v| !(v > S::zero() && v.is_finite())) {
            None => Ok(()),
            Some(peer) => Err(TrustError::NonPositivePeer {
                peer,
                what: "global trust",
                value: self.values[peer].as_f64(),
            }),
        }
    }
}

/// Biases an evaluation by the evaluator's weight: `[eval^p · w^q]^(1/(p+q))`.
pub fn bias_evaluation<S: Scalar>(eval_in: S, w_e: S, p: u32, q: u32) -> Result<S, TrustError> {
    if p + q == 0 {
        return Err(TrustError::InvalidConfig("p + q must be positive".into()));
    }
    positive(eval_in, "evaluation")?;
    positive(w_e, "evaluator weight")?;
    Ok(weighted_geometric_mean(eval_in, w_e, p, q))
}

/// Equivalent trust of a set of peers, `Σt² / Σt`.
pub fn set_trust<S: Scalar>(members: &[S]) -> Result<S, TrustError> {
    if members.is_empty() {
        return Err(TrustError::EmptySet);
    }
    for &t in members {
        positive(t, "set member trust")?;
    }
    let total = sum(members);
    let squares = members.iter().fold(S::zero(), |acc, &t| acc + t * t);
    Ok(squares / total)
}

/// Mean absolute componentwise difference, `‖a − b‖₁ / N`.
pub fn residual<S: Scalar>(t_new: &[S], t_old: &[S]) -> Result<S, TrustError> {
    if t_new.len() != t_old.len() {
        return Err(TrustError::DimensionMismatch {
            expected: t_old.len(),
            found: t_new.len(),
        });
    }
    if t_new.is_empty() {
        return Ok(S::zero());
    }
    let total = t_new
        .iter()
        .zip(t_old)
        .fold(S::zero(), |acc, (&a, &b)| acc + (a - b).abs());
    Ok(total / S::from_usize(t_new.len()).unwrap())
}

/// Source score when the requester has history with the responder:
/// `β·global + (1 − β)·local`.
pub fn combined_score<S: Scalar>(global: S, local: S, beta: S) -> Result<S, TrustError> {
    if !(beta >= S::zero() && beta <= S::one()) {
        return Err(TrustError::InvalidBeta(beta.as_f64()));
    }
    Ok(beta * global + (S::one() - beta) * local)
}

/// One application of the aggregation map.
///
/// The returned vector extends `t`'s history by one iteration; its residual is
/// measured over rated peers only.
pub fn absolute_trust_step<S: Scalar>(
    matrix: &TrustMatrix<S>,
    t: &GlobalTrustVector<S>,
    config: &SolverConfig<S>,
) -> Result<GlobalTrustVector<S>, TrustError> {
    config.validate()?;
    check_dimension(matrix, t)?;
    t.check_positive()?;
    let mut next = vec![S::zero(); t.len()];
    step_into(matrix, &t.values, config, &mut next)?;
    let mut residual_trace = t.residual_trace.clone();
    residual_trace.push(rated_residual(matrix, &next, &t.values));
    Ok(GlobalTrustVector {
        values: next,
        iterations_used: t.iterations_used + 1,
        residual_trace,
    })
}

/// Solves from the all-`initial_value` vector.
pub fn solve_absolute_trust<S: Scalar>(
    matrix: &TrustMatrix<S>,
    config: &SolverConfig<S>,
) -> Result<GlobalTrustVector<S>, SolveError<S>> {
    let start = GlobalTrustVector::uniform(matrix.dimension(), config.initial_value);
    solve_from(matrix, &start, config)
}

/// Iterates the aggregation map from `initial` until the residual falls below the
/// threshold. Unrated peers are reset to `initial_value` before the first step.
pub fn solve_from<S: Scalar>(
    matrix: &TrustMatrix<S>,
    initial: &GlobalTrustVector<S>,
    config: &SolverConfig<S>,
) -> Result<GlobalTrustVector<S>, SolveError<S>> {
    config.validate()?;
    if matrix.is_empty() {
        return Err(TrustError::EmptyMatrix.into());
    }
    check_dimension(matrix, initial)?;
    initial.check_positive()?;

    let mut current: Vec<S> = initial
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| if matrix.has_raters(i) { v } else { config.initial_value })
        .collect();
    let mut next = vec![S::zero(); current.len()];
    let mut residual_trace = Vec::new();

    for iteration in 1..=config.max_iterations {
        step_into(matrix, &current, config, &mut next)?;
        let r = rated_residual(matrix, &next, &current);
        residual_trace.push(r);
        std::mem::swap(&mut current, &mut next);
        if r < config.threshold {
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

fn step_into<S: Scalar>(
    matrix: &TrustMatrix<S>,
    current: &[S],
    config: &SolverConfig<S>,
    out: &mut [S],
) -> Result<(), TrustError> {
    for (i, slot) in out.iter_mut().enumerate() {
        if !matrix.has_raters(i) {
            *slot = config.initial_value;
            continue;
        }
        let mut weight = S::zero();
        let mut weighted_local = S::zero();
        let mut squares = S::zero();
        for (j, local) in matrix.raters_of(i) {
            let tj = current[j];
            weight += tj;
            weighted_local += local * tj;
            squares += tj * tj;
        }
        let mean_local = weighted_local / weight;
        let rater_set = squares / weight;
        if !(mean_local > S::zero() && rater_set > S::zero()) {
            if mean_local.is_nan() || rater_set.is_nan() {
                return Err(TrustError::NotANumber { peer: i });
            }
            return Err(TrustError::NonPositivePeer {
                peer: i,
                what: "aggregated trust",
                value: mean_local.min(rater_set).as_f64(),
            });
        }
        let value = weighted_geometric_mean(mean_local, rater_set, config.p, config.q);
        if !value.is_finite() {
            return Err(TrustError::NotANumber { peer: i });
        }
        *slot = value;
    }
    Ok(())
}

/// `[a^p · b^q]^(1/(p+q))` through logarithms; both arguments must be positive.
fn weighted_geometric_mean<S: Scalar>(a: S, b: S, p: u32, q: u32) -> S {
    let p = S::from_u32(p).unwrap();
    let q = S::from_u32(q).unwrap();
    ((p * a.ln() + q * b.ln()) / (p + q)).exp()
}

fn rated_residual<S: Scalar>(matrix: &TrustMatrix<S>, new: &[S], old: &[S]) -> S {
    let mut total = S::zero();
    let mut rated = 0usize;
    for i in (0..new.len()).filter(|&i| matrix.has_raters(i)) {
        total += (new[i] - old[i]).abs();
        rated += 1;
    }
    if rated == 0 {
        S::zero()
    } else {
        total / S::from_usize(rated).unwrap()
    }
}

fn check_dimension<S: Scalar>(
    matrix: &TrustMatrix<S>,
    t: &GlobalTrustVector<S>,
) -> Result<(), TrustError> {
    if matrix.dimension() != t.len() {
        return Err(TrustError::DimensionMismatch {
            expected: matrix.dimension(),
            found: t.len(),
        });
    }
    Ok(())
}

fn positive<S: Scalar>(value: S, what: &'static str) -> Result<(), TrustError> {
    if value > S::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(TrustError::NonPositive {
            what,
            value: value.as_f64(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn two_peer() -> TrustMatrix<f64> {
        // peer 0 rates peer 1 as 8, peer 1 rates peer 0 as 6
        TrustMatrix::from_triples(2, [(0, 1, 8.0), (1, 0, 6.0)]).unwrap()
    }

    #[test]
    fn bias_examples() {
        assert_relative_eq!(bias_evaluation(4.0, 9.0, 1, 1).unwrap(), 6.0, epsilon = 1e-12);
        assert_relative_eq!(bias_evaluation(3.7, 3.7, 5, 2).unwrap(), 3.7, epsilon = 1e-12);
        assert_relative_eq!(
            bias_evaluation(8.0, 2.0, 3, 1).unwrap(),
            2f64.powf(2.5),
            epsilon = 1e-12
        );
        assert!(bias_evaluation(0.0, 2.0, 1, 1).is_err());
        assert!(bias_evaluation(2.0, -1.0, 1, 1).is_err());
    }

    #[test]
    fn set_trust_examples() {
        assert_eq!(set_trust(&[4.2]).unwrap(), 4.2);
        assert_eq!(set_trust(&[1.0, 3.0]).unwrap(), 2.5);
        assert_relative_eq!(set_trust(&[5.5, 5.5, 10.0]).unwrap(), 160.5 / 21.0, epsilon = 1e-12);
        assert_eq!(set_trust::<f64>(&[]), Err(TrustError::EmptySet));
        assert!(set_trust(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn residual_examples() {
        assert_eq!(residual(&[2.0, 4.0], &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(residual(&[1.5, 2.5], &[1.5, 2.5]).unwrap(), 0.0);
        assert_eq!(
            residual(&[1.0], &[1.0, 2.0]),
            Err(TrustError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn combined_score_examples() {
        assert_eq!(combined_score(8.0, 4.0, 1.0).unwrap(), 8.0);
        assert_eq!(combined_score(8.0, 4.0, 0.0).unwrap(), 4.0);
        assert_eq!(combined_score(8.0, 4.0, 0.5).unwrap(), 6.0);
        assert!(matches!(combined_score(8.0, 4.0, 1.5), Err(TrustError::InvalidBeta(_))));
        assert!(combined_score(8.0, 4.0, f64::NAN).is_err());
    }

    #[test]
    fn single_rater_step() {
        let cfg = SolverConfig::default().with_exponents(1, 1);
        let t = GlobalTrustVector::uniform(2, 1.0);
        let next = absolute_trust_step(&two_peer(), &t, &cfg).unwrap();
        assert_relative_eq!(next.values[0], 6f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(next.values[1], 8f64.sqrt(), epsilon = 1e-12);
        assert_eq!(next.iterations_used, 1);
        assert_eq!(next.residual_trace.len(), 1);
    }

    #[test]
    fn uniform_matrix_is_a_fixed_point() {
        let triples = (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j, 7.0)));
        let m = TrustMatrix::from_triples(4, triples).unwrap();
        let cfg = SolverConfig::default();
        let t = GlobalTrustVector::uniform(4, 7.0);
        let next = absolute_trust_step(&m, &t, &cfg).unwrap();
        for v in &next.values {
            assert_relative_eq!(*v, 7.0, epsilon = 1e-12);
        }
        let solved = solve_absolute_trust(&m, &cfg).unwrap();
        for v in &solved.values {
            assert_relative_eq!(*v, 7.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn two_peer_closed_form() {
        let cfg = SolverConfig::default().with_exponents(1, 1).with_threshold(1e-13);
        let solved = solve_absolute_trust(&two_peer(), &cfg).unwrap();
        let t1 = 288f64.cbrt();
        let t2 = (8.0 * t1).sqrt();
        assert_relative_eq!(solved.values[0], t1, epsilon = 1e-10);
        assert_relative_eq!(solved.values[1], t2, epsilon = 1e-10);
        assert_relative_eq!(t1, 6.60385, epsilon = 1e-5);
        assert_relative_eq!(t2, 7.26848, epsilon = 1e-5);
    }

    #[test]
    fn unrated_peers_hold_initial_value() {
        // peer 2 never rated
        let m = TrustMatrix::from_triples(3, [(0, 1, 8.0), (1, 0, 6.0), (2, 0, 9.0)]).unwrap();
        let cfg = SolverConfig::default();
        let start = GlobalTrustVector::from_values(vec![2.0, 3.0, 9.0]);
        let solved = solve_from(&m, &start, &cfg).unwrap();
        assert_eq!(solved.values[2], cfg.initial_value);
    }

    #[test]
    fn non_convergence_is_explicit() {
        let cfg = SolverConfig::default().with_threshold(1e-300).with_max_iterations(3);
        let err = solve_absolute_trust(&two_peer(), &cfg).unwrap_err();
        let last = err.last_iterate().expect("carries last iterate");
        assert_eq!(last.iterations_used, 3);
        assert_eq!(last.residual_trace.len(), 3);
    }

    #[test]
    fn precondition_errors() {
        let cfg = SolverConfig::default();
        let m = two_peer();
        let wrong = GlobalTrustVector::uniform(3, 1.0);
        assert!(matches!(
            absolute_trust_step(&m, &wrong, &cfg),
            Err(TrustError::DimensionMismatch { .. })
        ));
        let bad = GlobalTrustVector::from_values(vec![1.0, -1.0]);
        assert!(matches!(
            absolute_trust_step(&m, &bad, &cfg),
            Err(TrustError::NonPositivePeer { peer: 1, .. })
        ));
        let nan = GlobalTrustVector::from_values(vec![f64::NAN, 1.0]);
        assert!(absolute_trust_step(&m, &nan, &cfg).is_err());
        assert!(matches!(
            solve_absolute_trust(&TrustMatrix::<f64>::new(2), &cfg),
            Err(SolveError::Invalid(TrustError::EmptyMatrix))
        ));
        let zero_p = SolverConfig { p: 0, ..cfg };
        assert!(solve_absolute_trust(&m, &zero_p).is_err());
    }

    #[test]
    fn overflow_to_nan_names_the_peer() {
        let m = TrustMatrix::from_triples(2, [(0, 1, 8.0), (1, 0, 6.0)]).unwrap();
        let cfg = SolverConfig::default();
        // inf·0 style breakdown: rater trust so large its square overflows
        let t = GlobalTrustVector::from_values(vec![1.0, f64::MAX]);
        let err = absolute_trust_step(&m, &t, &cfg).unwrap_err();
        assert!(matches!(err, TrustError::NotANumber { peer: 0 }), "{err:?}");
    }

    #[test]
    fn ranking_breaks_ties_by_lowest_id() {
        let t = GlobalTrustVector::from_values(vec![2.0, 5.0, 2.0, 5.0]);
        assert_eq!(t.ranking(), vec![1, 3, 0, 2]);
    }

    #[test]
    fn alpha_is_q_over_p() {
        let cfg = SolverConfig::<f64>::default();
        assert_relative_eq!(cfg.alpha(), 1.0 / 3.0);
    }
}
