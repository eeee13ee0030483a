use atrust_core::GlobalTrustVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::behavior::{follows_profile, give_feedback, transact, Authenticity};
use crate::config::{Algorithm, SimConfig};
use crate::error::SimError;
use crate::ledger::{Ledger, MessageTally};
use crate::overlay::Overlay;
use crate::peer::{assign_behaviors, Behavior, PeerProfile};
use crate::placement::{place_files, Placement};
use crate::selection::{select_source, Responder, SelectionRule};
use crate::trust::{baseline_round, update_round, UpdateOutcome};

/// Name of the generator behind every random stream.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64 + per-subsystem set_stream";

const STREAM_BEHAVIOR: u64 = 1;
const STREAM_PLACEMENT: u64 = 2;
const STREAM_OVERLAY: u64 = 3;
const STREAM_TRAFFIC: u64 = 4;

/// Seeded generator for one subsystem of a run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Everything that stays fixed during a run: profiles, file placement, overlay.
#[derive(Debug, Clone)]
pub struct Network {
    pub peers: Vec<PeerProfile>,
    pub placement: Placement,
    pub overlay: Overlay,
}

impl Network {
    /// Builds the network for `config.seed`. Independent of the algorithm, so runs
    /// that differ only in the algorithm face the same network.
    pub fn build(config: &SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let behaviors = assign_behaviors(config, &mut stream_rng(config.seed, STREAM_BEHAVIOR));
        let placement = place_files(config, &mut stream_rng(config.seed, STREAM_PLACEMENT));
        let overlay = Overlay::build(config.topology, config.peers, &mut stream_rng(config.seed, STREAM_OVERLAY));
        let peers = behaviors
            .into_iter()
            .enumerate()
            .map(|(id, behavior)| PeerProfile {
                id,
                behavior,
                owned_files: placement.files_of(id).clone(),
            })
            .collect();
        Ok(Self { peers, placement, overlay })
    }

    pub fn good_peers(&self) -> Vec<usize> {
        self.peers.iter().filter(|p| p.behavior.is_good()).map(|p| p.id).collect()
    }
}

/// Outcome of one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub authentic_count: u64,
    pub inauthentic_count: u64,
    /// Queries that ended without a download.
    pub rejected_queries: u64,
    /// Times each peer served as source.
    pub per_peer_load: Vec<u64>,
    /// Residual trace of every update round that iterated.
    pub residual_traces: Vec<Vec<f64>>,
    pub message_tally: MessageTally,
    pub nonconverged_updates: usize,
    pub good_peers: Vec<usize>,
    /// Stored opinions per active rater, averaged over completed transactions.
    pub mean_source_set: f64,
    pub final_trust: Vec<f64>,
    pub config: SimConfig,
}

impl ExperimentResult {
    pub fn completed(&self) -> u64 {
        self.authentic_count + self.inauthentic_count
    }
}

struct TrustState<'a> {
    config: &'a SimConfig,
    pretrusted: Vec<usize>,
    current: GlobalTrustVector,
}

impl<'a> TrustState<'a> {
    fn new(config: &'a SimConfig, network: &Network) -> Result<Self, SimError> {
        let good = network.good_peers();
        let pretrusted: Vec<usize> = good.iter().copied().take(config.baseline.pretrusted_count).collect();
        if config.algorithm == Algorithm::EigenTrust && pretrusted.is_empty() {
            return Err(SimError::TooFewGoodPeers(good.len()));
        }
        Ok(Self {
            config,
            pretrusted,
            current: GlobalTrustVector::uniform(config.peers, config.solver.initial_value),
        })
    }

    fn refresh(&mut self, ledger: &Ledger) -> Result<UpdateOutcome, SimError> {
        let outcome = match self.config.algorithm {
            Algorithm::Absolute => update_round(ledger, &self.current, self.config)?,
            _ => baseline_round(ledger, self.config, &self.pretrusted)?,
        };
        self.current = outcome.trust.clone();
        Ok(outcome)
    }

    fn global(&self, peer: usize) -> f64 {
        self.current.values[peer]
    }
}

/// Runs one simulation with the seed in `config`.
pub fn run(config: &SimConfig) -> Result<ExperimentResult, SimError> {
    let network = Network::build(config)?;
    run_on(&network, config)
}

/// Runs the query workload of `config` on a prebuilt network.
pub fn run_on(network: &Network, config: &SimConfig) -> Result<ExperimentResult, SimError> {
    run_with_ledger(network, config).map(|(result, _)| result)
}

/// Like [`run_on`], also handing back the final ledger.
pub fn run_with_ledger(network: &Network, config: &SimConfig) -> Result<(ExperimentResult, Ledger), SimError> {
    config.validate()?;
    let n = config.peers;
    let mut rng = stream_rng(config.seed, STREAM_TRAFFIC);
    let rule = SelectionRule::for_config(config);
    let mut ledger = Ledger::new(n, config.weights);
    let mut tally = MessageTally::default();
    let mut trust = TrustState::new(config, network)?;
    let mut residual_traces = Vec::new();
    let mut nonconverged_updates = 0;
    let mut load = vec![0u64; n];
    let (mut authentic, mut inauthentic, mut rejected) = (0u64, 0u64, 0u64);
    let mut source_set_sum = 0.0;

    let ttls: Vec<u32> = std::iter::successors(Some(config.ttl_initial), |&t| {
        (t < config.ttl_upper).then(|| (t + config.ttl_step.max(1)).min(config.ttl_upper))
    })
    .collect();

    for cycle in 0..config.num_transactions {
        if cycle % config.update_period == 0 {
            let outcome = trust.refresh(&ledger)?;
            tally.trust_read_messages += outcome.trust_reads;
            if !outcome.converged {
                nonconverged_updates += 1;
            }
            if !outcome.trust.residual_trace.is_empty() {
                residual_traces.push(outcome.trust.residual_trace);
            }
        }

        let requester = rng.random_range(0..n);
        let wanted = network.placement.num_files() - network.peers[requester].owned_files.len();
        if wanted == 0 {
            rejected += 1;
            continue;
        }
        let file = loop {
            let f = rng.random_range(0..network.placement.num_files());
            if !network.peers[requester].owns(f) {
                break f;
            }
        };
        let profile = &network.peers[requester].behavior;
        let requester_faithful = follows_profile(config.behavior_fidelity, &mut rng);

        let mut chosen = None;
        for &ttl in &ttls {
            let responders: Vec<Responder> = network
                .overlay
                .issue_query(requester, file, ttl, &network.placement)
                .into_iter()
                .map(|peer| {
                    let r = Responder::new(peer, trust.global(peer));
                    match ledger.local_trust(requester, peer) {
                        Some(local) => r.with_local(local),
                        None => r,
                    }
                })
                .collect();
            chosen = select_for_requester(profile, requester_faithful, &responders, network, &rule, &mut rng);
            if chosen.is_some() {
                break;
            }
        }
        let Some(source) = chosen else {
            rejected += 1;
            continue;
        };

        let source_profile = &network.peers[source].behavior;
        let authenticity = transact(source_profile, profile, cycle, config.behavior_fidelity, &mut rng);
        match authenticity {
            Authenticity::Authentic => authentic += 1,
            Authenticity::Inauthentic => inauthentic += 1,
        }
        load[source] += 1;
        give_feedback(
            requester,
            profile,
            source,
            source_profile,
            authenticity,
            requester_faithful,
            cycle,
            &mut ledger,
            &mut tally,
        )?;
        source_set_sum += ledger.len() as f64 / ledger.active_raters() as f64;
    }

    let completed = authentic + inauthentic;
    let result = ExperimentResult {
        authentic_count: authentic,
        inauthentic_count: inauthentic,
        rejected_queries: rejected,
        per_peer_load: load,
        residual_traces,
        message_tally: tally,
        nonconverged_updates,
        good_peers: network.good_peers(),
        mean_source_set: if completed > 0 { source_set_sum / completed as f64 } else { 0.0 },
        final_trust: trust.current.values,
        config: config.clone(),
    };
    Ok((result, ledger))
}

/// A faithful collective member takes a group mate whenever one responds, trust
/// notwithstanding; everyone else applies the selection rule.
pub fn select_for_requester<R: Rng + ?Sized>(
    requester: &Behavior,
    faithful: bool,
    responders: &[Responder],
    network: &Network,
    rule: &SelectionRule,
    rng: &mut R,
) -> Option<usize> {
    if let (Some(group), true) = (requester.group(), faithful) {
        let mates: Vec<Responder> = responders
            .iter()
            .copied()
            .filter(|r| network.peers[r.peer].behavior.group() == Some(group))
            .collect();
        if !mates.is_empty() {
            return select_source(&mates, &rule.without_threshold(), rng);
        }
    }
    select_source(responders, rule, rng)
}
