//! Monte-Carlo driver: paired runs, per-point aggregation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use relay_core::topology::{build_capacity_tables, generate, CapacityTables, TopologyConfig};
use relay_core::{mrsa, orsa, rrsa, wrsa, Matching, QuotaMode};

use crate::config::{Algorithm, ScenarioConfig};
use crate::SimError;

/// Aggregated metrics of one (algorithm, curve, sweep point) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scenario: u8,
    pub algorithm: Algorithm,
    pub n_s: usize,
    pub n_r: usize,
    pub channels: u32,
    pub alpha: f64,
    pub mean_capacity: f64,
    pub std_capacity: f64,
    pub mean_unmatched: f64,
    pub run_count: usize,
}

/// One run's contribution: capacity averaged over the point's sources —
/// unmatched sources count as zero (0 when the point has no sources) — and
/// the unmatched count.
#[derive(Debug, Clone, Copy)]
struct RunStat {
    run_mean: f64,
    unmatched: usize,
}

fn run_stat(matching: &Matching) -> RunStat {
    let n_s = matching.outcomes.len();
    RunStat {
        run_mean: if n_s == 0 {
            0.0
        } else {
            matching.objective() / n_s as f64
        },
        unmatched: matching.unmatched_count(),
    }
}

const FADING_TAG: u64 = 0x66_61_64_65; // stream tags for per-run sub-seeds
const WRSA_TAG: u64 = 0x77_72_73_61;
const RRSA_TAG: u64 = 0x72_72_73_61;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sub_seed(base: u64, tag: u64) -> u64 {
    splitmix64(base ^ splitmix64(tag))
}

/// Everything derived from one Monte-Carlo instance. The network seed is
/// `seed + run`, independent of the curve, so curves that differ only in
/// channel count or fading factor see identical placements, shadowing and
/// fading coins.
pub struct RunInstance {
    pub tables: CapacityTables,
    pub net_seed: u64,
}

pub fn build_run_instance(
    config: &ScenarioConfig,
    n_s: usize,
    n_r: usize,
    channels: u32,
    alpha: f64,
    run: usize,
) -> RunInstance {
    let net_seed = config.seed + run as u64;
    let mut radio = config.radio.clone();
    radio.lte_channel_count = channels;
    radio.fading_factor = alpha;
    let topo = TopologyConfig {
        n_sources: n_s,
        n_relays: n_r,
        side_m: config.side_m,
        bs_pos: None,
    };
    let net = generate(&topo, &radio, net_seed);
    let tables = build_capacity_tables(&net, &radio, sub_seed(net_seed, FADING_TAG));
    RunInstance { tables, net_seed }
}

/// Runs one algorithm on a prebuilt instance (paired comparison: every
/// algorithm sees the same tables).
pub fn run_algorithm(
    algorithm: Algorithm,
    instance: &RunInstance,
    bs_quota: usize,
    strict_quota: bool,
) -> Matching {
    match algorithm {
        Algorithm::Orsa => {
            let mode = if strict_quota {
                QuotaMode::Strict
            } else {
                QuotaMode::Relaxed
            };
            orsa(&instance.tables, bs_quota, mode)
        }
        Algorithm::Mrsa => mrsa(&instance.tables, bs_quota),
        Algorithm::Wrsa => {
            let mut order: Vec<usize> = (0..instance.tables.n_sources()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(sub_seed(
                instance.net_seed,
                WRSA_TAG,
            )));
            wrsa(&instance.tables, bs_quota, &order)
        }
        Algorithm::Rrsa => rrsa(
            &instance.tables,
            bs_quota,
            &mut ChaCha8Rng::seed_from_u64(sub_seed(instance.net_seed, RRSA_TAG)),
        ),
    }
}

/// Runs the configured sweep. Rows come out grouped by algorithm (in config
/// order), then curve (relay count, channels, fading factor ascending as
/// configured), then sweep value ascending — the CSV row order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<MetricsRow>, SimError> {
    config.validate()?;
    let points = config.sweep_points();

    // curve axes: relay-count variants × channels × alphas
    let mut cells: Vec<(usize, Vec<RunStat>)> = Vec::new(); // (n_s, per-run stats)
    let mut cell_index: Vec<Vec<usize>> = Vec::new(); // [curve][point] -> cells idx

    let mut curve_keys = Vec::new();
    {
        // Relay curves are positional: Complement means one curve whose n_r
        // varies with n_s.
        let relay_variants = match &config.relay_rule {
            crate::config::RelayRule::Complement { .. } => 1,
            crate::config::RelayRule::Fixed(v) => v.len(),
        };
        for rv in 0..relay_variants {
            for &ch in &config.channels {
                for &alpha in &config.alphas {
                    curve_keys.push((rv, ch, alpha));
                }
            }
        }
    }

    for &(rv, ch, alpha) in &curve_keys {
        let mut per_point = Vec::new();
        for &n_s in &points {
            let n_r = config.relay_counts(n_s)[rv];
            let stats: Vec<Vec<RunStat>> = (0..config.runs)
                .into_par_iter()
                .map(|run| {
                    let instance = build_run_instance(config, n_s, n_r, ch, alpha, run);
                    config
                        .algorithms
                        .iter()
                        .map(|&algo| {
                            run_stat(&run_algorithm(
                                algo,
                                &instance,
                                ch as usize,
                                config.strict_quota,
                            ))
                        })
                        .collect()
                })
                .collect();
            per_point.push(cells.len());
            for (a_idx, _) in config.algorithms.iter().enumerate() {
                let algo_stats: Vec<RunStat> = stats.iter().map(|s| s[a_idx]).collect();
                cells.push((n_s, algo_stats));
            }
        }
        cell_index.push(per_point);
    }

    // Emit rows: algorithm, then curve, then sweep value.
    let mut rows = Vec::new();
    for (a_idx, &algo) in config.algorithms.iter().enumerate() {
        for (curve, per_point) in cell_index.iter().enumerate() {
            let (rv, ch, alpha) = curve_keys[curve];
            for (p_idx, &cell_base) in per_point.iter().enumerate() {
                let (n_s, ref stats) = cells[cell_base + a_idx];
                debug_assert_eq!(n_s, points[p_idx]);
                let n_r = config.relay_counts(n_s)[rv];
                let n = stats.len() as f64;
                let mean_capacity = stats.iter().map(|s| s.run_mean).sum::<f64>() / n;
                let var = stats
                    .iter()
                    .map(|s| (s.run_mean - mean_capacity).powi(2))
                    .sum::<f64>()
                    / n;
                let mean_unmatched = stats.iter().map(|s| s.unmatched as f64).sum::<f64>() / n;
                rows.push(MetricsRow {
                    scenario: config.scenario_id,
                    algorithm: algo,
                    n_s,
                    n_r,
                    channels: ch,
                    alpha,
                    mean_capacity,
                    std_capacity: var.sqrt(),
                    mean_unmatched,
                    run_count: stats.len(),
                });
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RelayRule;

    fn tiny(scenario: u8) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::preset(scenario).unwrap();
        cfg.runs = 2;
        cfg.ns_max = 20;
        cfg.ns_step = 10;
        cfg
    }

    #[test]
    fn empty_sweep_point_produces_zero_metrics() {
        let mut cfg = tiny(1);
        cfg.runs = 1;
        cfg.ns_max = 0;
        let rows = run_scenario(&cfg).unwrap();
        assert_eq!(rows.len(), 4); // one N_s = 0 row per algorithm
        for row in rows {
            assert_eq!(row.mean_capacity, 0.0);
            assert_eq!(row.mean_unmatched, 0.0);
            assert_eq!(row.run_count, 1);
        }
    }

    #[test]
    fn scenario_three_yields_three_relay_curves() {
        let rows = run_scenario(&tiny(3)).unwrap();
        // 2 algorithms × 3 curves × 3 sweep points
        assert_eq!(rows.len(), 2 * 3 * 3);
        let mut relay_counts: Vec<usize> = rows.iter().map(|r| r.n_r).collect();
        relay_counts.sort_unstable();
        relay_counts.dedup();
        assert_eq!(relay_counts, vec![25, 50, 75]);
    }

    #[test]
    fn rows_are_grouped_by_algorithm_then_curve_then_sweep() {
        let rows = run_scenario(&tiny(1)).unwrap();
        assert_eq!(rows.len(), 4 * 3);
        let algos: Vec<Algorithm> = rows.iter().map(|r| r.algorithm).collect();
        assert_eq!(algos[0..3], [Algorithm::Orsa; 3]);
        assert_eq!(algos[3..6], [Algorithm::Mrsa; 3]);
        let ns: Vec<usize> = rows[0..3].iter().map(|r| r.n_s).collect();
        assert_eq!(ns, vec![0, 10, 20]);
        // complement rule
        assert_eq!(rows[1].n_r, 90);
    }

    #[test]
    fn reruns_are_deterministic() {
        let cfg = tiny(2);
        assert_eq!(run_scenario(&cfg).unwrap(), run_scenario(&cfg).unwrap());
    }

    #[test]
    fn curves_share_instances_across_channel_counts() {
        // Same run index must see the same network and fading coins no
        // matter the channel/alpha curve.
        let cfg = tiny(4);
        let a = build_run_instance(&cfg, 10, 100, 25, 1e-4, 3);
        let b = build_run_instance(&cfg, 10, 100, 50, 1e-4, 3);
        // Different per-channel bandwidth scales LTE capacities but zeros
        // and WiFi links agree.
        assert_eq!(a.tables.source_relay, b.tables.source_relay);
        let ratio = 50.0 / 25.0; // bandwidth per channel halves
        for (x, y) in a.tables.relay_bs.iter().zip(&b.tables.relay_bs) {
            assert!((x - ratio * y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn fixed_relay_rule_reports_its_counts() {
        let cfg = ScenarioConfig {
            relay_rule: RelayRule::Fixed(vec![5, 10]),
            ..ScenarioConfig::preset(3).unwrap()
        };
        assert_eq!(cfg.relay_counts(42), vec![5, 10]);
    }
}
