//! Property tests for the algebraic invariants of the channel model and the
//! k-cardinality solver.

use proptest::prelude::*;
use relay_core::assignment::{solve_kcard, KCardInstance};
use relay_core::channel::{capacity, path_gain, two_hop_capacity};
use relay_core::oracle::brute_force_kcard;

proptest! {
    #[test]
    fn capacity_is_monotone_in_sinr_and_linear_in_bandwidth(
        b in 1e3..1e9f64,
        s1 in 0.0..1e6f64,
        s2 in 0.0..1e6f64,
        scale in 0.1..100.0f64,
    ) {
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(capacity(b, lo).unwrap() <= capacity(b, hi).unwrap());
        let c = capacity(b, s1).unwrap();
        let scaled = capacity(b * scale, s1).unwrap();
        prop_assert!((scaled - scale * c).abs() <= 1e-9 * (1.0 + scaled.abs()));
    }

    #[test]
    fn two_hop_capacity_equals_the_minimum(a in 0.0..1e9f64, b in 0.0..1e9f64) {
        let c = two_hop_capacity(a, b);
        prop_assert_eq!(c, a.min(b));
        prop_assert!(c <= a && c <= b);
    }

    #[test]
    fn path_gain_is_continuous_at_the_crossover(
        freq in 0.5e9..6.0e9f64,
        ht in 0.5..5.0f64,
        hr in 0.5..50.0f64,
    ) {
        let lambda = relay_core::channel::SPEED_OF_LIGHT_M_S / freq;
        let d_cross = 4.0 * std::f64::consts::PI * ht * hr / lambda;
        let above = path_gain(d_cross, freq, ht, hr, 0.0).unwrap().gain;
        let below = path_gain(d_cross * (1.0 - 1e-12), freq, ht, hr, 0.0).unwrap().gain;
        prop_assert!((above - below).abs() / above < 1e-9);
    }

    #[test]
    fn kcard_solver_matches_brute_force(
        rows in proptest::collection::vec(
            proptest::collection::vec(0.0..100.0f64, 1..=5), 1..=5),
        k_pick in 0usize..=5,
    ) {
        let m = rows.iter().map(Vec::len).min().unwrap();
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r[..m].to_vec()).collect();
        let k = k_pick.min(rows.len()).min(m);
        let inst = KCardInstance::new(rows, k);
        let fast = solve_kcard(&inst);
        let brute = brute_force_kcard(&inst);
        prop_assert!((fast.total_weight - brute).abs() <= 1e-9 * (1.0 + brute));
        prop_assert_eq!(fast.edges.len(), k);
    }
}
