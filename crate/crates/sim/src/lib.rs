//! Seeded peer-to-peer file-sharing simulator for comparing reputation schemes.
//!
//! A run places Zipf-replicated files on an overlay, lets random peers query for
//! files they lack, picks a source by global trust, records the resulting
//! feedback and recomputes global trust every few query cycles. Everything is a
//! deterministic function of the configuration, seed included.
//!
//! ```
//! use atrust_sim::{run, SimConfig};
//!
//! let config = SimConfig { num_transactions: 400, ..SimConfig::default() };
//! let result = run(&config).unwrap();
//! assert!(result.completed() <= 400);
//! ```

pub mod behavior;
pub mod config;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod holders;
pub mod ledger;
pub mod overlay;
pub mod peer;
pub mod placement;
pub mod selection;
pub mod trust;

pub use behavior::{give_feedback, transact, Authenticity};
pub use config::{Algorithm, BaselineParams, Population, SelectionMode, SimConfig, Topology};
pub use engine::{run, run_on, run_with_ledger, select_for_requester, ExperimentResult, Network, RNG_ALGORITHM};
pub use error::SimError;
pub use holders::trust_holders_of;
pub use ledger::{Ledger, LedgerEntry, MessageTally};
pub use overlay::Overlay;
pub use peer::{Behavior, PeerProfile};
pub use placement::{place_files, Placement};
pub use selection::{select_source, Responder, SelectionRule};
pub use trust::{baseline_round, update_round, UpdateOutcome};
