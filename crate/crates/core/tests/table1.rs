//! Five-peer ranking fixture: A has only two raters, but both rate it well.

mod common;

use atrust_core::{solve_absolute_trust, SolverConfig, TrustMatrix, WeightConfig};
use common::dense_fixed_point;

const NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// Row = peer being rated, column = rater, on a 0..1 scale.
const RECEIVED: [[f64; 5]; 5] = [
    [0.0, 0.6, 0.6, 0.0, 0.0],
    [0.3, 0.0, 0.3, 0.4, 0.4],
    [0.4, 0.4, 0.0, 0.2, 0.2],
    [0.5, 0.1, 0.1, 0.0, 0.5],
    [0.7, 0.7, 0.8, 0.0, 0.0],
];

/// Fixed point for p = 3, q = 1 after scaling by 10, from a 2000-step dense
/// iteration run independently of this crate.
const EXPECTED: [f64; 5] = [
    5.293874287295464,
    3.863645860019477,
    3.375755928473164,
    3.8070329861853924,
    6.3885502494464115,
];

fn rater_rows() -> Vec<Vec<f64>> {
    (0..5).map(|rater| (0..5).map(|ratee| 10.0 * RECEIVED[ratee][rater]).collect()).collect()
}

fn matrix() -> TrustMatrix {
    TrustMatrix::from_dense(&rater_rows()).unwrap()
}

#[test]
fn scaled_entries_fit_the_weight_range() {
    matrix().check_bounds(&WeightConfig::default()).unwrap();
}

#[test]
fn dense_oracle_matches_frozen_values() {
    let t = dense_fixed_point(&rater_rows(), 3.0, 1.0, 5.5, 500);
    for (got, want) in t.iter().zip(EXPECTED) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}

#[test]
fn solver_matches_oracle() {
    let cfg = SolverConfig::default().with_threshold(1e-13).with_max_iterations(500);
    let t = solve_absolute_trust(&matrix(), &cfg).unwrap();
    for (i, (got, want)) in t.values.iter().zip(EXPECTED).enumerate() {
        assert!((got - want).abs() < 1e-9, "{}: {got} vs {want}", NAMES[i]);
    }
}

#[test]
fn a_is_not_ranked_below_b_c_and_d() {
    let t = solve_absolute_trust(&matrix(), &SolverConfig::default()).unwrap();
    let ranking: Vec<&str> = t.ranking().into_iter().map(|i| NAMES[i]).collect();
    assert_eq!(ranking, ["E", "A", "B", "D", "C"]);
    let a = t.values[0];
    assert!(t.values[1..4].iter().any(|&other| a > other));
}
