use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::TrustError;
use crate::local::WeightConfig;
use crate::scalar::Scalar;

/// Sparse local-trust matrix: entry `(rater, ratee)` is the local trust the rater
/// assigns the ratee. An absent entry means the two never interacted.
///
/// Entries are grouped by ratee because every aggregation step reads a peer's
/// raters, i.e. one row of the transpose.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustMatrix<S> {
    dimension: usize,
    by_ratee: Vec<BTreeMap<usize, S>>,
}

impl<S: Scalar> TrustMatrix<S> {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            by_ratee: vec![BTreeMap::new(); dimension],
        }
    }

    pub fn from_triples<I>(dimension: usize, triples: I) -> Result<Self, TrustError>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        let mut m = Self::new(dimension);
        for (rater, ratee, score) in triples {
            m.insert(rater, ratee, score)?;
        }
        Ok(m)
    }

    /// Builds from a dense row-major table where `rows[rater][ratee]`; zeros are
    /// treated as "no interaction" and the diagonal is ignored.
    pub fn from_dense(rows: &[Vec<S>]) -> Result<Self, TrustError> {
        let n = rows.len();
        let mut m = Self::new(n);
        for (rater, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TrustError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (ratee, &score) in row.iter().enumerate() {
                if rater != ratee && score != S::zero() {
                    m.insert(rater, ratee, score)?;
                }
            }
        }
        Ok(m)
    }

    /// Inserts or replaces an entry, returning the previous score.
    pub fn insert(&mut self, rater: usize, ratee: usize, score: S) -> Result<Option<S>, TrustError> {
        self.check_peer(rater)?;
        self.check_peer(ratee)?;
        if rater == ratee {
            return Err(TrustError::SelfRating { peer: rater });
        }
        if !(score > S::zero() && score.is_finite()) {
            return Err(TrustError::NonPositive {
                what: "local trust",
                value: score.as_f64(),
            });
        }
        Ok(self.by_ratee[ratee].insert(rater, score))
    }

    pub fn get(&self, rater: usize, ratee: usize) -> Option<S> {
        self.by_ratee.get(ratee)?.get(&rater).copied()
    }

    /// `C_ij` of the incidence matrix: whether `j` has rated `i`.
    pub fn incidence(&self, i: usize, j: usize) -> bool {
        self.get(j, i).is_some()
    }

    /// Raters of `ratee` with their scores, in rater order.
    pub fn raters_of(&self, ratee: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        self.by_ratee[ratee].iter().map(|(&j, &s)| (j, s))
    }

    pub fn rater_count(&self, ratee: usize) -> usize {
        self.by_ratee[ratee].len()
    }

    pub fn has_raters(&self, ratee: usize) -> bool {
        !self.by_ratee[ratee].is_empty()
    }

    /// All entries as `(rater, ratee, score)`, ordered by ratee then rater.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        self.by_ratee
            .iter()
            .enumerate()
            .flat_map(|(i, raters)| raters.iter().map(move |(&j, &s)| (j, i, s)))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.by_ratee.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.nnz() == 0
    }

    /// Checks that every entry lies in `[w_b, w_g]`.
    pub fn check_bounds(&self, weights: &WeightConfig<S>) -> Result<(), TrustError> {
        match self.entries().find(|&(_, _, s)| !weights.contains(s)) {
            None => Ok(()),
            Some((rater, ratee, s)) => Err(TrustError::OutOfBounds {
                rater,
                ratee,
                value: s.as_f64(),
                low: weights.bad().as_f64(),
                high: weights.good().as_f64(),
            }),
        }
    }

    /// Returns a copy with every score multiplied by `factor`.
    pub fn scaled(&self, factor: S) -> Self {
        let by_ratee = self
            .by_ratee
            .iter()
            .map(|raters| raters.iter().map(|(&j, &s)| (j, s * factor)).collect())
            .collect();
        Self {
            dimension: self.dimension,
            by_ratee,
        }
    }

    fn check_peer(&self, peer: usize) -> Result<(), TrustError> {
        if peer >= self.dimension {
            return Err(TrustError::PeerOutOfRange {
                peer,
                dimension: self.dimension,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_follows_transpose() {
        let m = TrustMatrix::from_triples(3, [(0, 1, 8.0), (2, 1, 3.0)]).unwrap();
        assert!(m.incidence(1, 0));
        assert!(m.incidence(1, 2));
        assert!(!m.incidence(0, 1));
        assert_eq!(m.raters_of(1).collect::<Vec<_>>(), vec![(0, 8.0), (2, 3.0)]);
        assert_eq!(m.nnz(), 2);
        assert!(!m.has_raters(0));
    }

    #[test]
    fn rejects_invalid_entries() {
        let mut m = TrustMatrix::<f64>::new(2);
        assert_eq!(m.insert(1, 1, 4.0), Err(TrustError::SelfRating { peer: 1 }));
        assert!(matches!(m.insert(0, 2, 4.0), Err(TrustError::PeerOutOfRange { .. })));
        assert!(matches!(m.insert(0, 1, 0.0), Err(TrustError::NonPositive { .. })));
        assert!(matches!(m.insert(0, 1, f64::NAN), Err(TrustError::NonPositive { .. })));
        assert_eq!(m.insert(0, 1, 4.0), Ok(None));
        assert_eq!(m.insert(0, 1, 5.0), Ok(Some(4.0)));
    }

    #[test]
    fn bounds_check_names_the_entry() {
        let m = TrustMatrix::from_triples(2, [(0, 1, 0.5)]).unwrap();
        let err = m.check_bounds(&WeightConfig::default()).unwrap_err();
        assert!(matches!(err, TrustError::OutOfBounds { rater: 0, ratee: 1, .. }));
        assert!(m.scaled(10.0).check_bounds(&WeightConfig::default()).is_ok());
    }

    #[test]
    fn dense_round_trip() {
        let rows = vec![vec![0.0, 2.0], vec![3.0, 9.0]];
        let m = TrustMatrix::from_dense(&rows).unwrap();
        assert_eq!(m.get(0, 1), Some(2.0));
        assert_eq!(m.get(1, 0), Some(3.0));
        assert_eq!(m.get(1, 1), None);
        let entries: Vec<_> = m.entries().collect();
        assert_eq!(entries, vec![(1, 0, 3.0), (0, 1, 2.0)]);
    }
}
