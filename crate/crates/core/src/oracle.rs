//! Exhaustive reference solvers and verification helpers.
//!
//! Everything here is exponential and exists to certify the fast paths:
//! a brute-force optimizer for the full relay-selection problem, a
//! brute-force k-cardinality optimizer, a blocking-pair scanner, and a
//! stable-matching enumerator. Instance sizes are capped hard.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algorithms::{Matching, Outcome};
use crate::assignment::KCardInstance;
use crate::topology::CapacityTables;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    /// The exhaustive search space would be too large; refuse instead of
    /// running for hours.
    InstanceTooLarge,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::InstanceTooLarge => write!(f, "instance too large for brute force"),
        }
    }
}

impl core::error::Error for OracleError {}

/// The acceptor side of a potential blocking pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptorRef {
    Relay(usize),
    Bs,
}

/// Exhaustive optimum of the relay-selection problem under the joint BS
/// budget: every matched source (direct or relayed) consumes one BS slot,
/// each relay serves at most one source, zero-capacity options are never
/// taken. Refuses instances beyond `N_s ≤ 6`, `N_r ≤ 5`, `Q_BS ≤ 4`.
pub fn brute_force_relay_selection(
    tables: &CapacityTables,
    bs_quota: usize,
) -> Result<Matching, OracleError> {
    let n_s = tables.n_sources();
    let n_r = tables.n_relays();
    if n_s > 6 || n_r > 5 || bs_quota > 4 {
        return Err(OracleError::InstanceTooLarge);
    }
    let mut outcomes = vec![Outcome::Unmatched; n_s];
    let mut used = vec![false; n_r];
    let mut best_value = f64::NEG_INFINITY;
    let mut best = outcomes.clone();
    search(
        tables,
        bs_quota,
        0,
        0,
        0.0,
        &mut used,
        &mut outcomes,
        &mut best_value,
        &mut best,
    );
    Ok(Matching::from_outcomes(best, tables))
}

#[allow(clippy::too_many_arguments)]
fn search(
    tables: &CapacityTables,
    bs_quota: usize,
    i: usize,
    slots: usize,
    acc: f64,
    used: &mut [bool],
    outcomes: &mut [Outcome],
    best_value: &mut f64,
    best: &mut [Outcome],
) {
    if i == outcomes.len() {
        if acc > *best_value {
            *best_value = acc;
            best.copy_from_slice(outcomes);
        }
        return;
    }
    outcomes[i] = Outcome::Unmatched;
    search(
        tables,
        bs_quota,
        i + 1,
        slots,
        acc,
        used,
        outcomes,
        best_value,
        best,
    );
    if slots < bs_quota {
        if tables.source_bs[i] > 0.0 {
            outcomes[i] = Outcome::Direct;
            search(
                tables,
                bs_quota,
                i + 1,
                slots + 1,
                acc + tables.source_bs[i],
                used,
                outcomes,
                best_value,
                best,
            );
        }
        for j in 0..used.len() {
            let v = tables.relay_path(i, j);
            if !used[j] && v > 0.0 {
                used[j] = true;
                outcomes[i] = Outcome::Relay(j);
                search(
                    tables,
                    bs_quota,
                    i + 1,
                    slots + 1,
                    acc + v,
                    used,
                    outcomes,
                    best_value,
                    best,
                );
                used[j] = false;
            }
        }
    }
    outcomes[i] = Outcome::Unmatched;
}

/// Maximum total weight over all matchings with exactly `k` edges, by
/// enumeration. Intended for `n, m ≤ 6`.
pub fn brute_force_kcard(instance: &KCardInstance) -> f64 {
    let (n, m) = (instance.n(), instance.m());
    assert!(n <= 6 && m <= 6, "brute_force_kcard is for tiny instances");
    fn rec(
        instance: &KCardInstance,
        row: usize,
        edges: usize,
        acc: f64,
        used: &mut [bool],
        best: &mut f64,
    ) {
        let (n, k) = (instance.n(), instance.k());
        if edges == k {
            *best = best.max(acc);
            // Taking more edges is forbidden; remaining rows stay bare.
            return;
        }
        if row == n || edges + (n - row) < k {
            return;
        }
        rec(instance, row + 1, edges, acc, used, best);
        for j in 0..instance.m() {
            if !used[j] {
                used[j] = true;
                rec(
                    instance,
                    row + 1,
                    edges + 1,
                    acc + instance.weight(row, j),
                    used,
                    best,
                );
                used[j] = false;
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut used = vec![false; m];
    rec(instance, 0, 0, 0.0, &mut used, &mut best);
    if best == f64::NEG_INFINITY {
        0.0
    } else {
        best
    }
}

/// Scans a matching for blocking pairs.
///
/// A pair `(source i, acceptor a)` blocks when `i` would realize strictly
/// more capacity via `a` than it does now, and `a` consents: the BS consents
/// with a spare slot or a strictly weaker held applicant; an *active* relay
/// (one holding a BS slot) consents when its served source's path is
/// strictly weaker. A relay without a BS slot cannot realize any path by
/// accepting a source on its own, so it never forms a blocking pair.
/// An empty result certifies stability; the scanner is total and may well
/// report pairs for optimal (non-stable) matchings.
pub fn find_blocking_pairs(
    matching: &Matching,
    tables: &CapacityTables,
    bs_quota: usize,
) -> Vec<(usize, AcceptorRef)> {
    let n_s = tables.n_sources();
    let n_r = tables.n_relays();
    debug_assert_eq!(matching.outcomes.len(), n_s);

    // Which source each active relay serves.
    let mut serving = vec![None; n_r];
    for (i, o) in matching.outcomes.iter().enumerate() {
        if let Outcome::Relay(j) = *o {
            serving[j] = Some(i);
        }
    }
    // Current worth of every BS holding (directs and active relays alike).
    let mut holding_values = Vec::new();
    for (i, o) in matching.outcomes.iter().enumerate() {
        match *o {
            Outcome::Direct => holding_values.push(tables.source_bs[i]),
            Outcome::Relay(_) => holding_values.push(matching.capacities[i]),
            Outcome::Unmatched => {}
        }
    }
    let spare_slot = holding_values.len() < bs_quota;
    let bs_min = holding_values.iter().copied().fold(f64::INFINITY, f64::min);

    let mut pairs = Vec::new();
    for i in 0..n_s {
        let realized = matching.capacities[i];
        let direct = tables.source_bs[i];
        if direct > realized && (spare_slot || direct > bs_min) {
            pairs.push((i, AcceptorRef::Bs));
        }
        for (j, entry) in serving.iter().enumerate() {
            let v = tables.relay_path(i, j);
            if v <= realized {
                continue;
            }
            if let Some(served) = *entry {
                if served != i && v > matching.capacities[served] {
                    pairs.push((i, AcceptorRef::Relay(j)));
                }
            }
        }
    }
    pairs
}

/// All feasible matchings (joint BS budget, distinct relays, positive
/// capacities only) with no blocking pair. Capped at `N_s, N_r ≤ 5`.
pub fn enumerate_stable_matchings(
    tables: &CapacityTables,
    bs_quota: usize,
) -> Result<Vec<Matching>, OracleError> {
    let n_s = tables.n_sources();
    let n_r = tables.n_relays();
    if n_s > 5 || n_r > 5 {
        return Err(OracleError::InstanceTooLarge);
    }
    let mut all = Vec::new();
    let mut outcomes = vec![Outcome::Unmatched; n_s];
    let mut used = vec![false; n_r];
    enumerate(tables, bs_quota, 0, 0, &mut used, &mut outcomes, &mut all);
    Ok(all
        .into_iter()
        .filter(|m| find_blocking_pairs(m, tables, bs_quota).is_empty())
        .collect())
}

fn enumerate(
    tables: &CapacityTables,
    bs_quota: usize,
    i: usize,
    slots: usize,
    used: &mut [bool],
    outcomes: &mut [Outcome],
    all: &mut Vec<Matching>,
) {
    if i == outcomes.len() {
        all.push(Matching::from_outcomes(outcomes.to_vec(), tables));
        return;
    }
    outcomes[i] = Outcome::Unmatched;
    enumerate(tables, bs_quota, i + 1, slots, used, outcomes, all);
    if slots < bs_quota {
        if tables.source_bs[i] > 0.0 {
            outcomes[i] = Outcome::Direct;
            enumerate(tables, bs_quota, i + 1, slots + 1, used, outcomes, all);
        }
        for j in 0..used.len() {
            if !used[j] && tables.relay_path(i, j) > 0.0 {
                used[j] = true;
                outcomes[i] = Outcome::Relay(j);
                enumerate(tables, bs_quota, i + 1, slots + 1, used, outcomes, all);
                used[j] = false;
            }
        }
    }
    outcomes[i] = Outcome::Unmatched;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{orsa, QuotaMode};

    #[test]
    fn brute_force_takes_the_better_relay_path() {
        let tables = CapacityTables {
            source_relay: vec![vec![90.0]],
            source_bs: vec![10.0],
            relay_bs: vec![80.0],
        };
        let m = brute_force_relay_selection(&tables, 1).unwrap();
        assert_eq!(m.outcomes, vec![Outcome::Relay(0)]);
        assert_eq!(m.objective(), 80.0);
    }

    #[test]
    fn zero_quota_matches_nothing() {
        let tables = CapacityTables {
            source_relay: vec![vec![9.0], vec![8.0]],
            source_bs: vec![7.0, 6.0],
            relay_bs: vec![5.0],
        };
        let m = brute_force_relay_selection(&tables, 0).unwrap();
        assert_eq!(m.unmatched_count(), 2);
        assert_eq!(m.objective(), 0.0);
    }

    #[test]
    fn brute_force_dominates_hand_picked_candidates() {
        let tables = CapacityTables {
            source_relay: vec![vec![50.0, 20.0], vec![30.0, 40.0]],
            source_bs: vec![10.0, 60.0],
            relay_bs: vec![45.0, 35.0],
        };
        let best = brute_force_relay_selection(&tables, 2).unwrap().objective();
        // all-direct and one obvious mixed candidate
        assert!(best >= 10.0 + 60.0);
        assert!(best >= 45.0 + 60.0); // s0 via relay 0 (min(50,45)), s1 direct
    }

    #[test]
    fn oversized_instances_are_refused() {
        let tables = CapacityTables {
            source_relay: vec![vec![1.0; 5]; 7],
            source_bs: vec![1.0; 7],
            relay_bs: vec![1.0; 5],
        };
        assert_eq!(
            brute_force_relay_selection(&tables, 2),
            Err(OracleError::InstanceTooLarge)
        );
    }

    #[test]
    fn kcard_oracle_basics() {
        assert_eq!(
            brute_force_kcard(&KCardInstance::new(vec![vec![7.0]], 0)),
            0.0
        );
        assert_eq!(
            brute_force_kcard(&KCardInstance::new(vec![vec![7.0]], 1)),
            7.0
        );
        assert_eq!(
            brute_force_kcard(&KCardInstance::new(vec![vec![5.0, 2.0], vec![3.0, 4.0]], 2)),
            9.0
        );
    }

    #[test]
    fn scanner_reports_unmatched_source_with_free_slot() {
        let tables = CapacityTables {
            source_relay: vec![vec![]],
            source_bs: vec![5.0],
            relay_bs: vec![],
        };
        let m = Matching {
            outcomes: vec![Outcome::Unmatched],
            capacities: vec![0.0],
            bs_slots_used: 0,
        };
        assert_eq!(
            find_blocking_pairs(&m, &tables, 1),
            vec![(0, AcceptorRef::Bs)]
        );
    }

    #[test]
    fn scanner_flags_optimal_but_unstable_assignments() {
        // The sum-optimal assignment sends source 0 to its worse relay so
        // source 1 can keep the strong one; source 0 and relay 0 then prefer
        // each other.
        let tables = CapacityTables {
            source_relay: vec![vec![100.0, 50.0], vec![90.0, 10.0]],
            source_bs: vec![0.0, 0.0],
            relay_bs: vec![200.0, 200.0],
        };
        let opt = orsa(&tables, 2, QuotaMode::Strict);
        assert_eq!(opt.objective(), 140.0);
        assert_eq!(
            find_blocking_pairs(&opt, &tables, 2),
            vec![(0, AcceptorRef::Relay(0))]
        );
    }

    #[test]
    fn stable_enumeration_contains_no_blocking_pairs_and_refuses_big_inputs() {
        let tables = CapacityTables {
            source_relay: vec![vec![50.0, 20.0], vec![30.0, 40.0]],
            source_bs: vec![10.0, 60.0],
            relay_bs: vec![45.0, 35.0],
        };
        let stable = enumerate_stable_matchings(&tables, 2).unwrap();
        assert!(!stable.is_empty());
        for m in &stable {
            assert!(find_blocking_pairs(m, &tables, 2).is_empty());
        }

        let big = CapacityTables {
            source_relay: vec![vec![1.0; 6]; 6],
            source_bs: vec![1.0; 6],
            relay_bs: vec![1.0; 6],
        };
        assert_eq!(
            enumerate_stable_matchings(&big, 2),
            Err(OracleError::InstanceTooLarge)
        );
    }
}
