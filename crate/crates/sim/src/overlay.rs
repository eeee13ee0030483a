use std::collections::VecDeque;

use rand::Rng;

use crate::config::Topology;
use crate::placement::Placement;

const UNREACHABLE: u32 = u32::MAX;

/// Undirected overlay graph with all-pairs hop distances cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlay {
    adjacency: Vec<Vec<usize>>,
    hops: Vec<Vec<u32>>,
}

impl Overlay {
    pub fn build<R: Rng + ?Sized>(topology: Topology, peers: usize, rng: &mut R) -> Self {
        let adjacency = match topology {
            Topology::Ring => ring(peers),
            Topology::Complete => (0..peers)
                .map(|i| (0..peers).filter(|&j| j != i).collect())
                .collect(),
            Topology::RandomRegular { degree } => random_regular(peers, degree, rng),
        };
        Self::from_adjacency(adjacency)
    }

    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let hops = (0..adjacency.len()).map(|s| bfs(&adjacency, s)).collect();
        Self { adjacency, hops }
    }

    pub fn neighbors(&self, peer: usize) -> &[usize] {
        &self.adjacency[peer]
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Hop distance, or `None` when disconnected.
    pub fn distance(&self, from: usize, to: usize) -> Option<u32> {
        let d = self.hops[from][to];
        (d != UNREACHABLE).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        self.hops.first().is_none_or(|row| row.iter().all(|&d| d != UNREACHABLE))
    }

    /// Owners of `file` reached by a flood of `ttl` hops from `requester`,
    /// excluding the requester, in increasing id order.
    pub fn issue_query(&self, requester: usize, file: usize, ttl: u32, placement: &Placement) -> Vec<usize> {
        let row = &self.hops[requester];
        placement
            .owners_of(file)
            .iter()
            .copied()
            .filter(|&p| p != requester && row[p] <= ttl)
            .collect()
    }
}

fn ring(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| match n {
            0 | 1 => Vec::new(),
            2 => vec![1 - i],
            _ => vec![(i + n - 1) % n, (i + 1) % n],
        })
        .collect()
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adjacency.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Connected simple `degree`-regular graph by stub pairing with restarts.
///
/// Stubs are paired one at a time, each time picking uniformly among pairs that
/// keep the graph simple; a dead end or a disconnected result triggers a restart.
fn random_regular<R: Rng + ?Sized>(n: usize, degree: usize, rng: &mut R) -> Vec<Vec<usize>> {
    assert!(degree < n && (n * degree).is_multiple_of(2), "no {degree}-regular graph on {n} vertices");
    loop {
        if let Some(adjacency) = try_pairing(n, degree, rng) {
            if bfs(&adjacency, 0).iter().all(|&d| d != UNREACHABLE) {
                return adjacency;
            }
        }
    }
}

fn try_pairing<R: Rng + ?Sized>(n: usize, degree: usize, rng: &mut R) -> Option<Vec<Vec<usize>>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    let mut adjacency = vec![Vec::with_capacity(degree); n];
    while !stubs.is_empty() {
        let mut paired = false;
        for _ in 0..100 {
            let a = rng.random_range(0..stubs.len());
            let b = rng.random_range(0..stubs.len());
            let (u, v) = (stubs[a], stubs[b]);
            if a == b || u == v || adjacency[u].contains(&v) {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            paired = true;
            break;
        }
        if !paired {
            return None;
        }
    }
    Some(adjacency)
}
