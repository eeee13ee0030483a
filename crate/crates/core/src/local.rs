//! Local trust: the score a downloader assigns a provider from its own history.
//!
//! Each downloaded file is classified as satisfactory, neutral or unsatisfactory.
//! With weights `w_g > w_b` and the neutral weight fixed at their midpoint, the
//! weighted mean of the per-file weights simplifies to
//!
//! ```text
//! T = ½ [ (x − y + 1)·w_g + (y − x + 1)·w_b ]
//! ```
//!
//! where `x` and `y` are the satisfactory and unsatisfactory fractions. The
//! result always lies in `[w_b, w_g]`.

use serde::{Deserialize, Serialize};

use crate::error::TrustError;
use crate::scalar::Scalar;

/// Per-file weights. The neutral weight is derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig<S> {
    w_g: S,
    w_b: S,
}

impl<S: Scalar> WeightConfig<S> {
    pub fn new(w_g: S, w_b: S) -> Result<Self, TrustError> {
        let valid = w_b > S::zero() && w_g > w_b && w_g.is_finite();
        if !valid {
            return Err(TrustError::InvalidWeights {
                w_g: w_g.as_f64(),
                w_b: w_b.as_f64(),
            });
        }
        Ok(Self { w_g, w_b })
    }

    /// Weight for a satisfactory file.
    pub fn good(&self) -> S {
        self.w_g
    }

    /// Weight for an unsatisfactory file.
    pub fn bad(&self) -> S {
        self.w_b
    }

    /// Weight for a neutral file, `(w_g + w_b) / 2`.
    pub fn neutral(&self) -> S {
        (self.w_g + self.w_b) / S::lit(2.0)
    }

    pub fn contains(&self, value: S) -> bool {
        value >= self.w_b && value <= self.w_g
    }
}

impl<S: Scalar> Default for WeightConfig<S> {
    /// `w_g = 10`, `w_b = 1`.
    fn default() -> Self {
        Self {
            w_g: S::lit(10.0),
            w_b: S::lit(1.0),
        }
    }
}

/// Quality classification of one downloaded file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rating {
    Satisfactory,
    Neutral,
    Unsatisfactory,
}

/// Tallies of one rater's downloads from one provider.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TransactionCounts {
    pub satisfactory: u64,
    pub neutral: u64,
    pub unsatisfactory: u64,
}

impl TransactionCounts {
    pub fn new(satisfactory: u64, neutral: u64, unsatisfactory: u64) -> Self {
        Self {
            satisfactory,
            neutral,
            unsatisfactory,
        }
    }

    /// Counts for `total` downloads of which `satisfactory` were good and
    /// `unsatisfactory` bad; the remainder is neutral.
    pub fn from_totals(total: u64, satisfactory: u64, unsatisfactory: u64) -> Option<Self> {
        let neutral = total.checked_sub(satisfactory)?.checked_sub(unsatisfactory)?;
        Some(Self::new(satisfactory, neutral, unsatisfactory))
    }

    pub fn total(&self) -> u64 {
        self.satisfactory + self.neutral + self.unsatisfactory
    }

    pub fn record(&mut self, rating: Rating) {
        match rating {
            Rating::Satisfactory => self.satisfactory += 1,
            Rating::Neutral => self.neutral += 1,
            Rating::Unsatisfactory => self.unsatisfactory += 1,
        }
    }

    /// `(x, y)`: fractions of satisfactory and unsatisfactory files, if any were downloaded.
    pub fn fractions<S: Scalar>(&self) -> Option<(S, S)> {
        let total = self.total();
        if total == 0 {
            return None;
        }
        let n = S::from_count(total);
        Some((
            S::from_count(self.satisfactory) / n,
            S::from_count(self.unsatisfactory) / n,
        ))
    }
}

/// Local trust of a provider given the rater's download history with it.
pub fn local_trust<S: Scalar>(
    counts: &TransactionCounts,
    weights: &WeightConfig<S>,
) -> Result<S, TrustError> {
    let (x, y) = counts.fractions::<S>().ok_or(TrustError::NoInteraction)?;
    let one = S::one();
    let score = ((x - y + one) * weights.good() + (y - x + one) * weights.bad()) / S::lit(2.0);
    // Rounding can push an all-good or all-bad history an ulp past the bound.
    Ok(score.max(weights.bad()).min(weights.good()))
}
