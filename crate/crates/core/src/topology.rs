//! Random network instances and the per-run capacity tables.
//!
//! A network is a square cell with one base station and `N` machines at
//! uniform random positions; the first `n_sources` machine ids are the
//! sources, the rest are relays (roles are positional, not spatial). Link
//! gains are drawn once per unordered node pair per instance, so both
//! directions of a link share the same shadowing.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{
    self, apply_fading, capacity, path_gain, sinr_lte, sinr_wifi, GainTable, RadioParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn distance_to(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        libm::sqrt(dx * dx + dy * dy)
    }
}

/// Instance-level knobs: machine counts, cell side, base station position.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TopologyConfig {
    pub n_sources: usize,
    pub n_relays: usize,
    pub side_m: f64,
    /// Defaults to the cell center.
    pub bs_pos: Option<Position>,
}

impl TopologyConfig {
    pub fn new(n_sources: usize, n_relays: usize) -> Self {
        Self {
            n_sources,
            n_relays,
            side_m: 590.0,
            bs_pos: None,
        }
    }
}

/// A materialized network instance: machine positions, role split, base
/// station, and the symmetric per-pair gain table (machine↔machine gains at
/// the WiFi carrier, machine↔BS gains at the LTE carrier; the BS is node
/// `n_machines`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Network {
    pub side_m: f64,
    pub machines: Vec<Position>,
    /// Machines `0..n_sources` are sources, the rest relays.
    pub n_sources: usize,
    pub bs: Position,
    pub gains: GainTable,
}

impl Network {
    pub fn n_machines(&self) -> usize {
        self.machines.len()
    }

    pub fn n_relays(&self) -> usize {
        self.machines.len() - self.n_sources
    }

    /// Node id of the base station in the gain table.
    pub fn bs_node_id(&self) -> usize {
        self.machines.len()
    }

    /// Machine id of relay index `j`.
    pub fn relay_machine_id(&self, j: usize) -> usize {
        self.n_sources + j
    }

    pub fn source_ids(&self) -> impl Iterator<Item = usize> {
        0..self.n_sources
    }

    /// Builds a network from explicit machine positions, drawing shadowing
    /// from `shadow_seed`. Used for fixtures and instance replay.
    pub fn from_positions(
        machines: Vec<Position>,
        n_sources: usize,
        bs: Position,
        side_m: f64,
        params: &RadioParams,
        shadow_seed: u64,
    ) -> Self {
        assert!(n_sources <= machines.len());
        let mut rng = ChaCha8Rng::seed_from_u64(shadow_seed);
        let gains = compute_gains(&machines, &bs, params, &mut rng);
        Self {
            side_m,
            machines,
            n_sources,
            bs,
            gains,
        }
    }
}

/// Uniform i.i.d. machine placement, positional role assignment, one
/// shadowing draw per unordered pair. Deterministic for a fixed seed.
pub fn generate(config: &TopologyConfig, params: &RadioParams, seed: u64) -> Network {
    let n = config.n_sources + config.n_relays;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut machines = Vec::with_capacity(n);
    for _ in 0..n {
        let x = rng.random_range(0.0..config.side_m);
        let y = rng.random_range(0.0..config.side_m);
        machines.push(Position { x, y });
    }
    let bs = config.bs_pos.unwrap_or(Position {
        x: config.side_m / 2.0,
        y: config.side_m / 2.0,
    });
    let gains = compute_gains(&machines, &bs, params, &mut rng);
    Network {
        side_m: config.side_m,
        machines,
        n_sources: config.n_sources,
        bs,
        gains,
    }
}

/// Shadowed gains for all pairs. Draw order is fixed by machine ids alone
/// (pairs in lexicographic order, then machine↔BS links), so role splits do
/// not perturb the draws.
fn compute_gains(
    machines: &[Position],
    bs: &Position,
    params: &RadioParams,
    rng: &mut ChaCha8Rng,
) -> GainTable {
    let n = machines.len();
    let mut gains = GainTable::new(n + 1);
    for a in 0..n {
        for b in (a + 1)..n {
            let shadow = channel::normal_db(rng, params.shadow_mean_db, params.shadow_std_db);
            let g = path_gain(
                machines[a].distance_to(&machines[b]),
                params.wifi_carrier_hz,
                params.machine_antenna_m,
                params.machine_antenna_m,
                shadow,
            )
            .expect("machine positions must be distinct");
            gains.set(a, b, g.gain);
        }
    }
    for (a, machine) in machines.iter().enumerate() {
        let shadow = channel::normal_db(rng, params.shadow_mean_db, params.shadow_std_db);
        let g = path_gain(
            machine.distance_to(bs),
            params.lte_carrier_hz,
            params.machine_antenna_m,
            params.bs_antenna_m,
            shadow,
        )
        .expect("no machine may sit exactly on the base station");
        gains.set(a, n, g.gain);
    }
    gains
}

/// Per-run capacity tables consumed by every selection algorithm.
///
/// `source_relay[i][j]` is the WiFi capacity of source `i` toward relay `j`
/// under full active-source interference; `source_bs[i]` the direct LTE
/// capacity (after fading); `relay_bs[j]` the relay-side LTE capacity.
/// Entries are zero exactly when the link's received power is below the
/// reception threshold.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapacityTables {
    pub source_relay: Vec<Vec<f64>>,
    pub source_bs: Vec<f64>,
    pub relay_bs: Vec<f64>,
}

impl CapacityTables {
    pub fn n_sources(&self) -> usize {
        self.source_bs.len()
    }

    pub fn n_relays(&self) -> usize {
        self.relay_bs.len()
    }

    /// Capacity of the two-hop path source `i` → relay `j` → BS.
    pub fn relay_path(&self, i: usize, j: usize) -> f64 {
        channel::two_hop_capacity(self.source_relay[i][j], self.relay_bs[j])
    }
}

/// Materializes the capacity tables for one run. `seed` drives only the
/// fading coins; gains (and their shadowing) live in the network itself.
pub fn build_capacity_tables(net: &Network, params: &RadioParams, seed: u64) -> CapacityTables {
    let n_s = net.n_sources;
    let n_r = net.n_relays();
    let bs = net.bs_node_id();
    let sources: Vec<usize> = (0..n_s).collect();
    let thr = params.rx_threshold_w();
    let b_wifi = params.wifi_channel_bandwidth_hz();
    let b_lte = params.lte_channel_bandwidth_hz();

    let mut source_relay = vec![vec![0.0; n_r]; n_s];
    for (i, row) in source_relay.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let r = net.relay_machine_id(j);
            if params.p_wifi_machine_w * net.gains.gain(i, r) < thr {
                continue;
            }
            let sinr = sinr_wifi(i, r, &sources, &net.gains, params);
            *cell = capacity(b_wifi, sinr).expect("wifi sinr is non-negative");
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut source_bs = vec![0.0; n_s];
    for (i, cell) in source_bs.iter_mut().enumerate() {
        let c = if params.p_lte_machine_w * net.gains.gain(i, bs) < thr {
            0.0
        } else {
            let sinr = sinr_lte(i, bs, &net.gains, params);
            capacity(b_lte, sinr).expect("lte sinr is non-negative")
        };
        // Coin drawn for every source so the stream does not depend on
        // threshold outcomes.
        let faded = rng.random::<f64>() < params.fading_probability;
        *cell = apply_fading(c, params.fading_factor, faded);
    }

    let mut relay_bs = vec![0.0; n_r];
    for (j, cell) in relay_bs.iter_mut().enumerate() {
        let r = net.relay_machine_id(j);
        if params.p_lte_machine_w * net.gains.gain(r, bs) < thr {
            continue;
        }
        let sinr = sinr_lte(r, bs, &net.gains, params);
        *cell = capacity(b_lte, sinr).expect("lte sinr is non-negative");
    }

    CapacityTables {
        source_relay,
        source_bs,
        relay_bs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_shadow_params() -> RadioParams {
        RadioParams {
            shadow_std_db: 0.0,
            ..RadioParams::default()
        }
    }

    #[test]
    fn empty_network_has_only_the_bs() {
        let net = generate(&TopologyConfig::new(0, 0), &RadioParams::default(), 1);
        assert_eq!(net.n_machines(), 0);
        assert_eq!(net.bs_node_id(), 0);
        assert_eq!(net.bs, Position { x: 295.0, y: 295.0 });
    }

    #[test]
    fn same_seed_means_same_network() {
        let cfg = TopologyConfig::new(10, 10);
        let p = RadioParams::default();
        assert_eq!(generate(&cfg, &p, 99), generate(&cfg, &p, 99));
        assert_ne!(generate(&cfg, &p, 99), generate(&cfg, &p, 100));
    }

    #[test]
    fn invariants_hold_over_many_seeds() {
        let cfg = TopologyConfig::new(50, 50);
        let p = RadioParams::default();
        for seed in 0..1000 {
            let net = generate(&cfg, &p, seed);
            assert_eq!(net.n_machines(), 100);
            assert_eq!(net.n_sources, 50);
            assert_eq!(net.n_relays(), 50);
            for m in &net.machines {
                assert!(m.x >= 0.0 && m.x < 590.0);
                assert!(m.y >= 0.0 && m.y < 590.0);
            }
        }
    }

    #[test]
    fn gains_are_symmetric_and_positive() {
        let net = generate(&TopologyConfig::new(5, 5), &RadioParams::default(), 42);
        for a in 0..=10 {
            for b in 0..=10 {
                assert_eq!(net.gains.gain(a, b), net.gains.gain(b, a));
                if a != b {
                    assert!(net.gains.gain(a, b) > 0.0);
                }
            }
        }
    }

    #[test]
    fn below_threshold_relay_gets_zero_bs_capacity_and_dead_paths() {
        // One source near the BS, one relay 500 m out. With the threshold
        // raised to -90 dB the relay's LTE link falls below it while the
        // source's stays above.
        let machines = vec![
            Position { x: 300.0, y: 295.0 },
            Position { x: 295.0, y: 795.0 },
        ];
        let bs = Position { x: 295.0, y: 295.0 };
        let mut p = no_shadow_params();
        p.rx_power_threshold_db = -90.0;
        let net = Network::from_positions(machines, 1, bs, 900.0, &p, 0);
        let tables = build_capacity_tables(&net, &p, 0);
        assert_eq!(tables.relay_bs[0], 0.0);
        assert_eq!(tables.relay_path(0, 0), 0.0);
        assert!(tables.source_bs[0] > 0.0);
    }

    #[test]
    fn three_node_fixture_matches_direct_formula() {
        // Source at 100 m from the relay, relay 100 m from the BS, no
        // shadowing, no interference (single source).
        let machines = vec![
            Position { x: 195.0, y: 295.0 },
            Position { x: 295.0, y: 295.0 },
        ];
        let bs = Position { x: 295.0, y: 395.0 };
        let p = no_shadow_params();
        let net = Network::from_positions(machines, 1, bs, 590.0, &p, 0);
        let tables = build_capacity_tables(&net, &p, 0);

        let g_sr = path_gain(100.0, p.wifi_carrier_hz, 1.5, 1.5, 0.0)
            .unwrap()
            .gain;
        let expect_sr = p.wifi_channel_bandwidth_hz()
            * libm::log2(1.0 + p.p_wifi_machine_w * g_sr / p.noise_power_w);
        assert!((tables.source_relay[0][0] - expect_sr).abs() / expect_sr < 1e-12);
        assert!(tables.source_relay[0][0] > 0.0);

        let g_rb = path_gain(100.0, p.lte_carrier_hz, 1.5, 30.0, 0.0)
            .unwrap()
            .gain;
        let expect_rb = p.lte_channel_bandwidth_hz()
            * libm::log2(1.0 + p.p_lte_machine_w * g_rb / p.noise_power_w);
        assert!((tables.relay_bs[0] - expect_rb).abs() / expect_rb < 1e-12);
    }

    #[test]
    fn unit_fading_factor_changes_nothing() {
        let cfg = TopologyConfig::new(8, 8);
        let mut p = RadioParams {
            fading_factor: 1.0,
            fading_probability: 1.0,
            ..RadioParams::default()
        };
        let net = generate(&cfg, &p, 5);
        let with = build_capacity_tables(&net, &p, 17);
        p.fading_probability = 0.0;
        let without = build_capacity_tables(&net, &p, 17);
        assert_eq!(with, without);
    }

    #[test]
    fn rebuilding_tables_is_bit_identical() {
        let cfg = TopologyConfig::new(12, 8);
        let p = RadioParams::default();
        let net = generate(&cfg, &p, 7);
        assert_eq!(
            build_capacity_tables(&net, &p, 3),
            build_capacity_tables(&net, &p, 3)
        );
    }

    #[test]
    fn more_sources_never_raise_wifi_capacities() {
        // Same positions and shadowing, role split moved by one: every
        // common source-relay pair sees at least as much interference.
        let p = RadioParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let machines: Vec<Position> = (0..12)
            .map(|_| Position {
                x: rng.random_range(0.0..590.0),
                y: rng.random_range(0.0..590.0),
            })
            .collect();
        let bs = Position { x: 295.0, y: 295.0 };
        let small = Network::from_positions(machines.clone(), 4, bs, 590.0, &p, 11);
        let large = Network::from_positions(machines, 5, bs, 590.0, &p, 11);
        assert_eq!(small.gains, large.gains);
        let t_small = build_capacity_tables(&small, &p, 0);
        let t_large = build_capacity_tables(&large, &p, 0);
        for i in 0..4 {
            for r in 5..12 {
                let c_small = t_small.source_relay[i][r - 4];
                let c_large = t_large.source_relay[i][r - 5];
                assert!(c_large <= c_small);
            }
        }
    }
}
