//! The four relay-selection algorithms over a common [`Matching`] result.
//!
//! - [`orsa`]: centralized optimum. Builds the `N_s × (N_r + Q_BS)` weight
//!   matrix (two-hop path weights toward relays, direct-link weights toward
//!   each BS channel column) and solves it as a k-cardinality assignment.
//! - [`mrsa`]: distributed deferred acceptance. Sources propose down their
//!   preference lists; relays hold one source and compete for a BS channel
//!   themselves; the BS holds up to its quota. Yields a stable matching.
//! - [`wrsa`]: direct-only baseline, first come first served.
//! - [`rrsa`]: one random attempt per source, no retry.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::assignment::{solve_kcard, KCardInstance};
use crate::topology::CapacityTables;

/// Where a source's uplink ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Outcome {
    /// Two-hop path through relay index `j`.
    Relay(usize),
    /// Direct LTE link to the base station.
    Direct,
    Unmatched,
}

/// Per-source outcomes with realized path capacities. Zero-capacity
/// assignments are normalized to [`Outcome::Unmatched`]; `bs_slots_used`
/// counts one slot per direct source and one per active relay.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matching {
    pub outcomes: Vec<Outcome>,
    pub capacities: Vec<f64>,
    pub bs_slots_used: usize,
}

impl Matching {
    pub(crate) fn from_outcomes(mut outcomes: Vec<Outcome>, tables: &CapacityTables) -> Self {
        let mut capacities = vec![0.0; outcomes.len()];
        let mut slots = 0;
        for (i, outcome) in outcomes.iter_mut().enumerate() {
            let c = match *outcome {
                Outcome::Relay(j) => tables.relay_path(i, j),
                Outcome::Direct => tables.source_bs[i],
                Outcome::Unmatched => 0.0,
            };
            if c > 0.0 {
                capacities[i] = c;
                slots += 1;
            } else {
                *outcome = Outcome::Unmatched;
            }
        }
        Self {
            outcomes,
            capacities,
            bs_slots_used: slots,
        }
    }

    /// The value the selection problem maximizes: total realized capacity.
    pub fn objective(&self) -> f64 {
        self.capacities.iter().sum()
    }

    pub fn unmatched_count(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| **o == Outcome::Unmatched)
            .count()
    }

    pub fn matched_count(&self) -> usize {
        self.outcomes.len() - self.unmatched_count()
    }
}

/// BS budget accounting for ORSA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum QuotaMode {
    /// Every selected path — direct or relayed — consumes one BS channel:
    /// at most `Q_BS` edges are selected (k = min(N_s, Q_BS)).
    #[default]
    Strict,
    /// Only direct links are budgeted (by the `Q_BS` channel columns);
    /// relayed paths ride for free (k = min(N_s, N_r + Q_BS)). With this
    /// mode `bs_slots_used` may exceed the quota.
    Relaxed,
}

/// Centralized optimal relay selection.
///
/// Column `j < N_r` carries `min(c[i][j], c″[j])`, columns `N_r..N_r+Q_BS`
/// carry the direct capacity `c′[i]`. The k-cardinality solve bounds the
/// number of selected edges by the BS budget (see [`QuotaMode`]); in strict
/// mode the result is the exact optimum of the joint-budget selection
/// problem for non-negative capacities.
pub fn orsa(tables: &CapacityTables, bs_quota: usize, mode: QuotaMode) -> Matching {
    let n_s = tables.n_sources();
    let n_r = tables.n_relays();
    let n_cols = n_r + bs_quota;
    let weights: Vec<Vec<f64>> = (0..n_s)
        .map(|i| {
            (0..n_cols)
                .map(|j| {
                    if j < n_r {
                        tables.relay_path(i, j)
                    } else {
                        tables.source_bs[i]
                    }
                })
                .collect()
        })
        .collect();
    let k = match mode {
        QuotaMode::Strict => n_s.min(bs_quota),
        QuotaMode::Relaxed => n_s.min(n_cols),
    };
    let solution = solve_kcard(&KCardInstance::new(weights, k));
    let mut outcomes = vec![Outcome::Unmatched; n_s];
    for &(i, j) in &solution.edges {
        outcomes[i] = if j < n_r {
            Outcome::Relay(j)
        } else {
            Outcome::Direct
        };
    }
    Matching::from_outcomes(outcomes, tables)
}

/// Direct-only baseline: each source in arrival `order` takes a BS channel
/// if one is free and its direct link exists; relays are never used.
pub fn wrsa(tables: &CapacityTables, bs_quota: usize, order: &[usize]) -> Matching {
    debug_assert_eq!(order.len(), tables.n_sources());
    let mut outcomes = vec![Outcome::Unmatched; tables.n_sources()];
    let mut slots = 0;
    for &i in order {
        if slots < bs_quota && tables.source_bs[i] > 0.0 {
            outcomes[i] = Outcome::Direct;
            slots += 1;
        }
    }
    Matching::from_outcomes(outcomes, tables)
}

/// Random baseline: each source flips a fair coin between one direct attempt
/// and one attempt on a uniformly random relay, and never retries.
pub fn rrsa<R: RngCore>(tables: &CapacityTables, bs_quota: usize, rng: &mut R) -> Matching {
    let n_s = tables.n_sources();
    let n_r = tables.n_relays();
    let mut outcomes = vec![Outcome::Unmatched; n_s];
    let mut claimed = vec![false; n_r];
    let mut slots = 0;
    for (i, outcome) in outcomes.iter_mut().enumerate() {
        if rng.random_bool(0.5) {
            if slots < bs_quota && tables.source_bs[i] > 0.0 {
                *outcome = Outcome::Direct;
                slots += 1;
            }
        } else if n_r > 0 {
            let j = rng.random_range(0..n_r);
            if !claimed[j]
                && tables.source_relay[i][j] > 0.0
                && tables.relay_bs[j] > 0.0
                && slots < bs_quota
            {
                *outcome = Outcome::Relay(j);
                claimed[j] = true;
                slots += 1;
            }
        }
    }
    Matching::from_outcomes(outcomes, tables)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Candidate {
    Relay(usize),
    Bs,
}

/// Next-hop preference entries, popped lazily in descending path-capacity
/// order (ties prefer the lower node id; the BS is the highest node). Only
/// positive-capacity candidates are ever enqueued. Keys are IEEE bit
/// patterns, which order like the floats for positive capacities.
struct PreferenceQueue {
    heap: alloc::collections::BinaryHeap<(u64, core::cmp::Reverse<usize>)>,
}

impl PreferenceQueue {
    fn build(tables: &CapacityTables, source: usize) -> Self {
        let n_r = tables.n_relays();
        let mut entries = Vec::with_capacity(n_r + 1);
        for j in 0..n_r {
            let v = tables.relay_path(source, j);
            if v > 0.0 {
                entries.push((v.to_bits(), core::cmp::Reverse(j)));
            }
        }
        let direct = tables.source_bs[source];
        if direct > 0.0 {
            entries.push((direct.to_bits(), core::cmp::Reverse(usize::MAX)));
        }
        Self {
            heap: alloc::collections::BinaryHeap::from(entries),
        }
    }

    /// Takes the best remaining candidate off the list.
    fn pop(&mut self) -> Option<(Candidate, f64)> {
        self.heap.pop().map(|(bits, core::cmp::Reverse(id))| {
            let candidate = if id == usize::MAX {
                Candidate::Bs
            } else {
                Candidate::Relay(id)
            };
            (candidate, f64::from_bits(bits))
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Proposer {
    Source(usize),
    Relay(usize),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum HeldBy {
    Relay(usize),
    Bs,
}

/// Base-station holdings keyed by (current value, machine id) so the bump
/// candidate — weakest value, highest id among ties — is `first()`. Values
/// are positive finite capacities, so their IEEE bit patterns order like the
/// floats. Relay entries are re-keyed when the relay upgrades its source.
#[derive(Default)]
struct BsHoldings {
    set: alloc::collections::BTreeSet<(u64, core::cmp::Reverse<usize>)>,
}

impl BsHoldings {
    fn len(&self) -> usize {
        self.set.len()
    }

    fn insert(&mut self, value: f64, machine_id: usize) {
        self.set
            .insert((value.to_bits(), core::cmp::Reverse(machine_id)));
    }

    fn remove(&mut self, value: f64, machine_id: usize) {
        let present = self
            .set
            .remove(&(value.to_bits(), core::cmp::Reverse(machine_id)));
        debug_assert!(present, "BS holding out of sync");
    }

    /// Weakest current holding, as (value, machine id).
    fn min(&self) -> Option<(f64, usize)> {
        self.set
            .first()
            .map(|&(bits, core::cmp::Reverse(id))| (f64::from_bits(bits), id))
    }
}

struct SourceState {
    /// Remaining candidates; popping is proposing, so a rejected or lost
    /// acceptor is implicitly deleted from the source's preference list.
    prefs: PreferenceQueue,
    held_by: Option<HeldBy>,
}

struct RelayState {
    /// Whether the BS is still on this relay's next-hop list.
    bs_candidate: bool,
    holding: Option<usize>,
    bs_held: bool,
    dead: bool,
    queued: bool,
}

/// Distributed matching-based relay selection (deferred acceptance).
pub fn mrsa(tables: &CapacityTables, bs_quota: usize) -> Matching {
    mrsa_impl(tables, bs_quota).0
}

/// Event-loop implementation; also returns the total proposal count, which
/// is bounded by `N_s·(N_r+1) + N_r`.
pub(crate) fn mrsa_impl(tables: &CapacityTables, bs_quota: usize) -> (Matching, usize) {
    let n_s = tables.n_sources();
    let n_r = tables.n_relays();

    let mut sources: Vec<SourceState> = (0..n_s)
        .map(|i| SourceState {
            prefs: PreferenceQueue::build(tables, i),
            held_by: None,
        })
        .collect();

    let mut relays: Vec<RelayState> = (0..n_r)
        .map(|j| RelayState {
            bs_candidate: tables.relay_bs[j] > 0.0,
            holding: None,
            bs_held: false,
            dead: false,
            queued: false,
        })
        .collect();

    let mut bs = BsHoldings::default();
    let mut queue: VecDeque<Proposer> = (0..n_s).map(Proposer::Source).collect();
    let mut proposals = 0usize;

    while let Some(proposer) = queue.pop_front() {
        match proposer {
            // A source keeps proposing until held or (list exhausted)
            // unmatched.
            Proposer::Source(i) => {
                while let Some((cand, v)) = sources[i].prefs.pop() {
                    proposals += 1;
                    match cand {
                        Candidate::Relay(j) => {
                            if relays[j].dead {
                                continue;
                            }
                            match relays[j].holding {
                                None => {
                                    relays[j].holding = Some(i);
                                    sources[i].held_by = Some(HeldBy::Relay(j));
                                    if !relays[j].bs_held && !relays[j].queued {
                                        relays[j].queued = true;
                                        queue.push_back(Proposer::Relay(j));
                                    }
                                    break;
                                }
                                Some(current) => {
                                    // Bump only on a strictly better offer; a
                                    // held BS slot silently re-keys to the
                                    // better source's path.
                                    let current_v = tables.relay_path(current, j);
                                    if v > current_v {
                                        if relays[j].bs_held {
                                            bs.remove(current_v, n_s + j);
                                            bs.insert(v, n_s + j);
                                        }
                                        sources[current].held_by = None;
                                        queue.push_back(Proposer::Source(current));
                                        relays[j].holding = Some(i);
                                        sources[i].held_by = Some(HeldBy::Relay(j));
                                        break;
                                    }
                                }
                            }
                        }
                        Candidate::Bs => {
                            if bs_propose(
                                v,
                                i,
                                bs_quota,
                                &mut bs,
                                n_s,
                                &mut sources,
                                &mut relays,
                                &mut queue,
                            ) {
                                sources[i].held_by = Some(HeldBy::Bs);
                                break;
                            }
                        }
                    }
                }
            }
            Proposer::Relay(j) => {
                relays[j].queued = false;
                proposals += 1;
                let served = relays[j].holding.expect("queued relay holds a source");
                let v = tables.relay_path(served, j);
                let accepted = relays[j].bs_candidate
                    && bs_propose(
                        v,
                        n_s + j,
                        bs_quota,
                        &mut bs,
                        n_s,
                        &mut sources,
                        &mut relays,
                        &mut queue,
                    );
                if accepted {
                    relays[j].bs_held = true;
                } else {
                    // BS was the relay's only candidate: reject everything.
                    relays[j].bs_candidate = false;
                    kill_relay(j, &mut relays, &mut sources, &mut queue);
                }
            }
        }
    }

    debug_assert!(proposals <= n_s * (n_r + 1) + n_r);

    let outcomes = sources
        .iter()
        .map(|s| match s.held_by {
            Some(HeldBy::Relay(j)) => {
                debug_assert!(relays[j].bs_held);
                Outcome::Relay(j)
            }
            Some(HeldBy::Bs) => Outcome::Direct,
            None => Outcome::Unmatched,
        })
        .collect();
    (Matching::from_outcomes(outcomes, tables), proposals)
}

/// Offers `value` to the BS for machine `machine_id`. With spare quota the
/// offer is held; at quota the weakest holding is bumped iff strictly worse.
#[allow(clippy::too_many_arguments)]
fn bs_propose(
    value: f64,
    machine_id: usize,
    bs_quota: usize,
    bs: &mut BsHoldings,
    n_s: usize,
    sources: &mut [SourceState],
    relays: &mut [RelayState],
    queue: &mut VecDeque<Proposer>,
) -> bool {
    if bs.len() < bs_quota {
        bs.insert(value, machine_id);
        return true;
    }
    match bs.min() {
        Some((min_v, min_id)) if value > min_v => {
            bs.remove(min_v, min_id);
            if min_id < n_s {
                sources[min_id].held_by = None;
                queue.push_back(Proposer::Source(min_id));
            } else {
                let j = min_id - n_s;
                relays[j].bs_held = false;
                kill_relay(j, relays, sources, queue);
            }
            bs.insert(value, machine_id);
            true
        }
        _ => false,
    }
}

/// A relay that lost (or never had) its BS channel rejects its held source
/// and takes no further proposals.
fn kill_relay(
    j: usize,
    relays: &mut [RelayState],
    sources: &mut [SourceState],
    queue: &mut VecDeque<Proposer>,
) {
    relays[j].dead = true;
    if let Some(s) = relays[j].holding.take() {
        sources[s].held_by = None;
        queue.push_back(Proposer::Source(s));
    }
}
