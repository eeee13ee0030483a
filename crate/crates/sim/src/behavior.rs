//! What happens in one transaction: the file the source serves and the feedback
//! the requester files.

use atrust_core::{Rating, TrustError};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ledger::{Ledger, LedgerEntry, MessageTally};
use crate::peer::Behavior;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Authenticity {
    Authentic,
    Inauthentic,
}

/// Whether a peer follows its profile in one interaction: `true` with probability
/// `fidelity`, otherwise it does the opposite.
pub fn follows_profile<R: Rng + ?Sized>(fidelity: f64, rng: &mut R) -> bool {
    fidelity >= 1.0 || rng.random_bool(fidelity.clamp(0.0, 1.0))
}

/// Whether the source's profile calls for an authentic file towards this requester.
/// Collectives serve their own members honestly.
fn intends_authentic(source: &Behavior, requester: &Behavior, cycle: usize) -> bool {
    let same_group = matches!((source.group(), requester.group()), (Some(a), Some(b)) if a == b);
    same_group || !source.is_malicious_at(cycle)
}

/// File served by `source` to `requester` at `cycle`.
pub fn transact<R: Rng + ?Sized>(
    source: &Behavior,
    requester: &Behavior,
    cycle: usize,
    fidelity: f64,
    rng: &mut R,
) -> Authenticity {
    let honest = intends_authentic(source, requester, cycle) == follows_profile(fidelity, rng);
    if honest {
        Authenticity::Authentic
    } else {
        Authenticity::Inauthentic
    }
}

/// Rating a rater files. An honest-acting rater reports what it got; a
/// malicious-acting one praises its allies and condemns everyone else.
pub fn rating_for(
    rater: &Behavior,
    source: &Behavior,
    authenticity: Authenticity,
    rater_follows_profile: bool,
    cycle: usize,
) -> Rating {
    let acts_malicious = rater.is_malicious_at(cycle) == rater_follows_profile;
    let positive = if acts_malicious {
        rater.is_allied_with(source, cycle)
    } else {
        authenticity == Authenticity::Authentic
    };
    if positive {
        Rating::Satisfactory
    } else {
        Rating::Unsatisfactory
    }
}

/// Records the rater's feedback in the ledger and counts the messages it costs.
#[allow(clippy::too_many_arguments)]
pub fn give_feedback(
    rater_id: usize,
    rater: &Behavior,
    source_id: usize,
    source: &Behavior,
    authenticity: Authenticity,
    rater_follows_profile: bool,
    cycle: usize,
    ledger: &mut Ledger,
    tally: &mut MessageTally,
) -> Result<LedgerEntry, TrustError> {
    let rating = rating_for(rater, source, authenticity, rater_follows_profile, cycle);
    let entry = *ledger.record(rater_id, source_id, rating)?;
    tally.feedback_messages += 1;
    tally.hypothetical_normalized_feedback += ledger.source_count(rater_id) as u64;
    Ok(entry)
}
