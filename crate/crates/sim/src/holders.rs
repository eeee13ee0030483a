//! Hash-based assignment of the peers that store and update each peer's global trust.

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// `replication` distinct holders of `peer`'s trust, never `peer` itself.
///
/// Every peer id is hashed onto a ring and a peer's trust is held by the next
/// `replication` peers clockwise from its position, as in a DHT successor list.
/// The result depends only on the arguments.
pub fn trust_holders_of(peer: usize, peers: usize, replication: usize) -> Vec<usize> {
    assert!(peer < peers, "peer {peer} out of range for {peers} peers");
    assert!(replication < peers, "cannot pick {replication} holders among {} other peers", peers - 1);
    let ring = ring_order(peers);
    let at = ring.iter().position(|&p| p == peer).expect("every peer sits on the ring");
    (1..=replication).map(|k| ring[(at + k) % peers]).collect()
}

/// Peer ids sorted by ring position.
fn ring_order(peers: usize) -> Vec<usize> {
    let mut ring: Vec<usize> = (0..peers).collect();
    ring.sort_by_key(|&p| (splitmix64(p as u64), p));
    ring
}

/// Number of peers each peer holds trust for.
pub fn holder_load(peers: usize, replication: usize) -> Vec<usize> {
    let mut load = vec![0; peers];
    for peer in 0..peers {
        for h in trust_holders_of(peer, peers, replication) {
            load[h] += 1;
        }
    }
    load
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_holder_is_someone_else() {
        for peer in 0..50 {
            let h = trust_holders_of(peer, 50, 1);
            assert_eq!(h.len(), 1);
            assert_ne!(h[0], peer);
        }
    }

    #[test]
    fn stable_and_distinct() {
        let a = trust_holders_of(17, 100, 3);
        assert_eq!(a, trust_holders_of(17, 100, 3));
        assert_eq!(a.len(), 3);
        assert!(a[0] != a[1] && a[1] != a[2] && a[0] != a[2]);
    }

    #[test]
    fn load_balanced_within_three_times_mean() {
        let load = holder_load(100, 2);
        let mean = load.iter().sum::<usize>() as f64 / 100.0;
        assert_eq!(mean, 2.0);
        assert!(load.iter().all(|&l| (l as f64) <= 3.0 * mean));
    }
}
