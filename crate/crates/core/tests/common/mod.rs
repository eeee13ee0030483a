#![allow(dead_code)]

use atrust_core::TrustMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every ordered pair present with probability `density`, scores uniform in
/// `[low, high]`. A directed ring is always included so the graph is irreducible.
pub fn random_matrix(n: usize, density: f64, low: f64, high: f64, seed: u64) -> TrustMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = TrustMatrix::new(n);
    for rater in 0..n {
        for ratee in 0..n {
            if rater == ratee {
                continue;
            }
            let ring = ratee == (rater + 1) % n;
            if ring || rng.random_bool(density) {
                m.insert(rater, ratee, rng.random_range(low..=high)).unwrap();
            }
        }
    }
    m
}

/// Dense reference implementation of the aggregation map, written directly from
/// the component formula with `powf`.
pub fn dense_step(rows: &[Vec<f64>], t: &[f64], p: f64, q: f64, hold: f64) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let raters: Vec<usize> = (0..n).filter(|&j| rows[j][i] > 0.0).collect();
            if raters.is_empty() {
                return hold;
            }
            let w: f64 = raters.iter().map(|&j| t[j]).sum();
            let a: f64 = raters.iter().map(|&j| rows[j][i] * t[j]).sum::<f64>() / w;
            let b: f64 = raters.iter().map(|&j| t[j] * t[j]).sum::<f64>() / w;
            (a.powf(p) * b.powf(q)).powf(1.0 / (p + q))
        })
        .collect()
}

pub fn dense_fixed_point(rows: &[Vec<f64>], p: f64, q: f64, init: f64, steps: usize) -> Vec<f64> {
    let mut t = vec![init; rows.len()];
    for _ in 0..steps {
        t = dense_step(rows, &t, p, q, init);
    }
    t
}

pub fn to_dense(m: &TrustMatrix) -> Vec<Vec<f64>> {
    let n = m.dimension();
    let mut rows = vec![vec![0.0; n]; n];
    for (rater, ratee, s) in m.entries() {
        rows[rater][ratee] = s;
    }
    rows
}
