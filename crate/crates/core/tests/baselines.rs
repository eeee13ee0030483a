use atrust_core::baselines::{eigentrust, powertrust};
use atrust_core::{BaselineConfig, NormalizedTrustMatrix};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_raw(n: usize, seed: u64) -> Vec<(usize, usize, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(0.5) {
                raw.push((i, j, rng.random_range(0.0..10.0)));
            }
        }
    }
    raw
}

/// Dense power iteration written directly from the damped update.
fn dense_oracle(rows: &[Vec<f64>], pre: &[f64], a: f64) -> Vec<f64> {
    let n = pre.len();
    let mut t = pre.to_vec();
    for _ in 0..20_000 {
        let mut next: Vec<f64> = pre.iter().map(|p| a * p).collect();
        for i in 0..n {
            let total: f64 = rows[i].iter().sum();
            for j in 0..n {
                let c = if total > 0.0 { rows[i][j] / total } else { pre[j] };
                next[j] += (1.0 - a) * c * t[i];
            }
        }
        t = next;
    }
    t
}

#[test]
fn chain_matches_dense_power_iteration() {
    // 0 -> 1 -> 2, and 2 has no opinions
    let rows = vec![vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 2.0], vec![0.0, 0.0, 0.0]];
    let raw = [(0, 1, 3.0), (1, 2, 2.0)];
    let m = NormalizedTrustMatrix::from_raw(3, raw).unwrap();
    let cfg = BaselineConfig {
        epsilon: 1e-13,
        ..BaselineConfig::for_network(3, vec![0])
    };
    let t = eigentrust(&m, &cfg).unwrap();
    let want = dense_oracle(&rows, &[1.0, 0.0, 0.0], cfg.damping);
    for (a, b) in t.values.iter().zip(&want) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn power_nodes_are_the_top_phase_one_peers() {
    let raw = random_raw(5, 3);
    let m = NormalizedTrustMatrix::from_raw(5, raw).unwrap();
    let cfg = BaselineConfig {
        power_nodes: 2,
        ..BaselineConfig::for_network(5, vec![0])
    };
    let uniform = BaselineConfig {
        pretrusted: (0..5).collect(),
        ..cfg.clone()
    };
    let phase_one = eigentrust(&m, &uniform).unwrap();
    let mut order: Vec<(usize, f64)> = phase_one.values.iter().cloned().enumerate().collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut top: Vec<usize> = order[..2].iter().map(|e| e.0).collect();
    top.sort();
    assert_eq!(powertrust(&m, &cfg).unwrap().power_nodes, top);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn outputs_are_probability_vectors(seed in any::<u64>(), n in 2usize..20) {
        let m = NormalizedTrustMatrix::from_raw(n, random_raw(n, seed)).unwrap();
        let cfg = BaselineConfig::for_network(n, vec![0, n - 1]);
        let e = eigentrust(&m, &cfg).unwrap();
        let p = powertrust(&m, &cfg).unwrap().trust;
        for v in [e, p] {
            prop_assert!(v.values.iter().all(|&x| x >= 0.0));
            prop_assert!((v.values.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn eigentrust_is_label_invariant(seed in any::<u64>(), n in 2usize..15) {
        let m = NormalizedTrustMatrix::from_raw(n, random_raw(n, seed)).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)));
        let pre = vec![0];
        let cfg = BaselineConfig { epsilon: 1e-12, ..BaselineConfig::for_network(n, pre.clone()) };
        let permuted_cfg = BaselineConfig { pretrusted: vec![perm[0]], ..cfg.clone() };
        let t = eigentrust(&m, &cfg).unwrap();
        let tp = eigentrust(&m.permuted(&perm), &permuted_cfg).unwrap();
        for i in 0..n {
            prop_assert!((t.values[i] - tp.values[perm[i]]).abs() < 1e-9);
        }
    }

    #[test]
    fn powertrust_with_every_peer_elected_is_uniform_eigentrust(seed in any::<u64>(), n in 2usize..15) {
        let m = NormalizedTrustMatrix::from_raw(n, random_raw(n, seed)).unwrap();
        let everyone: Vec<usize> = (0..n).collect();
        let cfg = BaselineConfig { power_nodes: n, ..BaselineConfig::for_network(n, everyone) };
        let p = powertrust(&m, &cfg).unwrap();
        let e = eigentrust(&m, &cfg).unwrap();
        for (a, b) in p.trust.values.iter().zip(&e.values) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
