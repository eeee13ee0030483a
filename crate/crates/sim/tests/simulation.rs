use atrust_sim::experiments::{authentic_percent, load_stddev};
use atrust_sim::engine::stream_rng;
use atrust_sim::{
    run, run_with_ledger, select_for_requester, Algorithm, Behavior, Network, Responder, SelectionRule, SimConfig,
};

fn short(algorithm: Algorithm, seed: u64) -> SimConfig {
    let mut config = SimConfig {
        algorithm,
        seed,
        num_transactions: 2000,
        ..SimConfig::default()
    };
    config.population.malicious_fraction = 0.2;
    config
}

#[test]
fn identical_config_gives_identical_result() {
    for algorithm in Algorithm::ALL {
        let a = run(&short(algorithm, 5)).unwrap();
        let b = run(&short(algorithm, 5)).unwrap();
        assert_eq!(a, b);
        let c = run(&short(algorithm, 6)).unwrap();
        assert_ne!(a.per_peer_load, c.per_peer_load);
    }
}

#[test]
fn tallies_are_consistent() {
    for algorithm in Algorithm::ALL {
        let config = short(algorithm, 11);
        let r = run(&config).unwrap();
        assert!(r.completed() + r.rejected_queries == config.num_transactions as u64);
        assert_eq!(r.per_peer_load.iter().sum::<u64>(), r.completed());
        assert_eq!(r.message_tally.feedback_messages, r.completed());
        assert!(r.message_tally.hypothetical_normalized_feedback >= r.message_tally.feedback_messages);
        let pct = authentic_percent(&r).unwrap();
        assert!(pct <= 100.0 * config.behavior_fidelity + 1.0, "{pct}");
        assert!(load_stddev(&r, &r.good_peers).unwrap() >= 0.0);
    }
}

#[test]
fn final_ledger_is_consistent() {
    let config = short(Algorithm::Absolute, 3);
    let network = Network::build(&config).unwrap();
    let (result, ledger) = run_with_ledger(&network, &config).unwrap();
    let weights = config.weights;
    for e in ledger.entries() {
        assert_eq!(e.local_trust, atrust_core::local_trust(&e.counts, &weights).unwrap());
        assert_ne!(e.rater, e.ratee);
    }
    let downloads: u64 = ledger.entries().map(|e| e.counts.total()).sum();
    assert_eq!(downloads, result.completed());
}

#[test]
fn feedback_ratio_tracks_source_set_size() {
    let config = SimConfig::default();
    let r = run(&config).unwrap();
    let ratio = r.message_tally.feedback_ratio().unwrap();
    let rel = (ratio - r.mean_source_set).abs() / r.mean_source_set;
    assert!(rel < 0.05, "ratio {ratio} vs mean source set {}", r.mean_source_set);
    assert!(r.message_tally.saving() > 0);
}

#[test]
fn faithful_collectives_stay_in_their_group() {
    let mut config = SimConfig {
        behavior_fidelity: 1.0,
        ..SimConfig::default()
    };
    config.population.collective_groups = 3;
    let network = Network::build(&config).unwrap();
    let rule = SelectionRule::for_config(&config);
    let mut rng = stream_rng(1, 9);
    let members: Vec<(usize, usize)> = network
        .peers
        .iter()
        .filter_map(|p| p.behavior.group().map(|g| (p.id, g)))
        .collect();
    assert_eq!(members.len(), 15);
    for &(member, group) in &members {
        for trial in 0..50u64 {
            // Everyone answers; outsiders look far more trustworthy than the mates.
            let responders: Vec<Responder> = (0..config.peers)
                .filter(|&p| p != member && !(p as u64 + trial).is_multiple_of(3))
                .map(|p| {
                    let mate = network.peers[p].behavior.group() == Some(group);
                    Responder::new(p, if mate { 2.0 } else { 9.0 })
                })
                .collect();
            let has_mate = responders
                .iter()
                .any(|r| network.peers[r.peer].behavior.group() == Some(group));
            let behavior = network.peers[member].behavior;
            let picked = select_for_requester(&behavior, true, &responders, &network, &rule, &mut rng).unwrap();
            if has_mate {
                assert_eq!(network.peers[picked].behavior.group(), Some(group));
            }
        }
    }
    let outsider = Behavior::Good;
    let responders = [Responder::new(members[0].0, 2.0), Responder::new(99, 9.0)];
    let picked = select_for_requester(&outsider, true, &responders, &network, &rule, &mut rng);
    assert_eq!(picked, Some(99));
}

#[test]
fn warm_start_saves_iterations_over_a_run() {
    let r = run(&SimConfig::default()).unwrap();
    let first = r.residual_traces.first().unwrap().len();
    let late: Vec<usize> = r.residual_traces.iter().rev().take(10).map(Vec::len).collect();
    let mean_late = late.iter().sum::<usize>() as f64 / late.len() as f64;
    assert!(mean_late < first as f64, "first {first}, late {late:?}");
    assert_eq!(r.nonconverged_updates, 0);
}
