//! Link gains, SINR and Shannon capacities for the two static RF interfaces.
//!
//! Machine↔machine links ride a shared WiFi channel and see interference from
//! every active source (worst-case convention: all sources interfere all the
//! time). Machine↔base-station links each get a dedicated LTE channel, so
//! their SINR has no interference term. Path gain follows free space below
//! the crossover distance `4π·h_t·h_r/λ` and the two-ray ground model above
//! it, with log-normal shadowing applied per link.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Radio-layer parameters. Defaults match the simulation setup: 20 MHz total
/// per technology, one shared WiFi channel, 100 LTE channels, 0.1 W / 0.2 W
/// machine transmit powers, −121 dB reception threshold, 4 dB shadowing.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadioParams {
    pub wifi_total_bandwidth_hz: f64,
    pub wifi_channel_count: u32,
    pub lte_total_bandwidth_hz: f64,
    /// Number of LTE channels; doubles as the base station quota.
    pub lte_channel_count: u32,
    pub p_wifi_machine_w: f64,
    /// WiFi transmit power of the base station. Unused on the uplink-only
    /// model; kept so the parameter table round-trips through configs.
    pub p_wifi_bs_w: f64,
    pub p_lte_machine_w: f64,
    /// LTE transmit power of the base station. Unused on the uplink.
    pub p_lte_bs_w: f64,
    pub noise_power_w: f64,
    /// A link exists iff tx-power × gain reaches this received-power level.
    pub rx_power_threshold_db: f64,
    pub shadow_mean_db: f64,
    pub shadow_std_db: f64,
    /// Multiplicative attenuation applied to faded source↔BS links.
    pub fading_factor: f64,
    /// Probability that a source↔BS link is faded in a given run.
    pub fading_probability: f64,
    pub wifi_carrier_hz: f64,
    pub lte_carrier_hz: f64,
    pub machine_antenna_m: f64,
    pub bs_antenna_m: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            wifi_total_bandwidth_hz: 20e6,
            wifi_channel_count: 1,
            lte_total_bandwidth_hz: 20e6,
            lte_channel_count: 100,
            p_wifi_machine_w: 0.1,
            p_wifi_bs_w: 0.1,
            p_lte_machine_w: 0.2,
            p_lte_bs_w: 10.0,
            noise_power_w: 1e-13,
            rx_power_threshold_db: -121.0,
            shadow_mean_db: 0.0,
            shadow_std_db: 4.0,
            fading_factor: 1e-4,
            fading_probability: 0.005,
            wifi_carrier_hz: 2.4e9,
            lte_carrier_hz: 2.0e9,
            machine_antenna_m: 1.5,
            bs_antenna_m: 30.0,
        }
    }
}

impl RadioParams {
    /// Bandwidth of one LTE channel: the total split evenly over the channels.
    pub fn lte_channel_bandwidth_hz(&self) -> f64 {
        self.lte_total_bandwidth_hz / self.lte_channel_count as f64
    }

    /// Bandwidth of one WiFi channel.
    pub fn wifi_channel_bandwidth_hz(&self) -> f64 {
        self.wifi_total_bandwidth_hz / self.wifi_channel_count as f64
    }

    /// Reception threshold converted from dB to watts.
    pub fn rx_threshold_w(&self) -> f64 {
        libm::pow(10.0, self.rx_power_threshold_db / 10.0)
    }

    pub fn validate(&self) -> Result<(), ChannelError> {
        let positive = [
            self.wifi_total_bandwidth_hz,
            self.lte_total_bandwidth_hz,
            self.p_wifi_machine_w,
            self.p_wifi_bs_w,
            self.p_lte_machine_w,
            self.p_lte_bs_w,
            self.noise_power_w,
            self.wifi_carrier_hz,
            self.lte_carrier_hz,
            self.machine_antenna_m,
            self.bs_antenna_m,
        ];
        if positive.iter().any(|&v| v.is_nan() || v <= 0.0)
            || self.wifi_channel_count == 0
            || self.lte_channel_count == 0
        {
            return Err(ChannelError::InvalidParams(
                "powers, bandwidths, channel counts, carriers and antenna heights must be positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.fading_probability) {
            return Err(ChannelError::InvalidParams(
                "fading probability must lie in [0, 1]",
            ));
        }
        if !(self.fading_factor > 0.0 && self.fading_factor <= 1.0) {
            return Err(ChannelError::InvalidParams(
                "fading factor must lie in (0, 1]",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelError {
    NonPositiveDistance,
    NegativeSinr,
    InvalidParams(&'static str),
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::NonPositiveDistance => write!(f, "link distance must be positive"),
            ChannelError::NegativeSinr => write!(f, "SINR must be non-negative"),
            ChannelError::InvalidParams(msg) => write!(f, "invalid radio parameters: {msg}"),
        }
    }
}

impl core::error::Error for ChannelError {}

/// Linear power gain of one link together with the distance it was computed
/// for. One shadowing draw is shared by both directions of a node pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkGain {
    pub gain: f64,
    pub distance_m: f64,
}

/// Path gain with free-space/two-ray switching and multiplicative shadowing.
///
/// Below `d_cross = 4π·h_t·h_r/λ` the free-space gain `(λ/4πd)²` applies;
/// from `d_cross` on, the two-ray gain `(h_t·h_r)²/d⁴`. The two branches
/// coincide at the crossover by construction. `shadow_db` (typically a
/// N(0, 4²) draw) enters as the factor `10^(shadow_db/10)`.
pub fn path_gain(
    distance_m: f64,
    freq_hz: f64,
    tx_height_m: f64,
    rx_height_m: f64,
    shadow_db: f64,
) -> Result<LinkGain, ChannelError> {
    if distance_m.is_nan() || distance_m <= 0.0 {
        return Err(ChannelError::NonPositiveDistance);
    }
    let lambda = SPEED_OF_LIGHT_M_S / freq_hz;
    let d_cross = 4.0 * core::f64::consts::PI * tx_height_m * rx_height_m / lambda;
    let base = if distance_m < d_cross {
        let a = lambda / (4.0 * core::f64::consts::PI * distance_m);
        a * a
    } else {
        let hh = tx_height_m * rx_height_m;
        (hh * hh) / (distance_m * distance_m * distance_m * distance_m)
    };
    let gain = base * libm::pow(10.0, shadow_db / 10.0);
    Ok(LinkGain { gain, distance_m })
}

/// Symmetric per-pair link gains for every node of a network instance.
/// Nodes are indexed `0..n_nodes`; by convention the base station is the
/// last index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GainTable {
    n_nodes: usize,
    values: Vec<f64>,
}

impl GainTable {
    pub fn new(n_nodes: usize) -> Self {
        Self {
            n_nodes,
            values: vec![0.0; n_nodes * n_nodes],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn gain(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.n_nodes + b]
    }

    /// Sets both directions of the pair; channel reciprocity holds because
    /// the shadowing draw is made once per unordered pair.
    pub fn set(&mut self, a: usize, b: usize, gain: f64) {
        self.values[a * self.n_nodes + b] = gain;
        self.values[b * self.n_nodes + a] = gain;
    }
}

/// WiFi SINR at `rx` for transmitter `tx` under the worst-case convention:
/// every active source other than `tx` contributes interference, whether or
/// not it is actually scheduled.
pub fn sinr_wifi(
    tx: usize,
    rx: usize,
    active_sources: &[usize],
    gains: &GainTable,
    params: &RadioParams,
) -> f64 {
    debug_assert!(active_sources.contains(&tx));
    debug_assert_ne!(tx, rx);
    let p = params.p_wifi_machine_w;
    let mut interference = 0.0;
    for &k in active_sources {
        if k != tx {
            interference += p * gains.gain(k, rx);
        }
    }
    p * gains.gain(tx, rx) / (params.noise_power_w + interference)
}

/// LTE SINR of a machine↔base-station link. Each such link has a dedicated
/// channel, so the denominator is the noise power alone.
pub fn sinr_lte(tx: usize, rx: usize, gains: &GainTable, params: &RadioParams) -> f64 {
    params.p_lte_machine_w * gains.gain(tx, rx) / params.noise_power_w
}

/// Shannon capacity `B·log₂(1 + SINR)` in bit/s.
pub fn capacity(bandwidth_hz: f64, sinr: f64) -> Result<f64, ChannelError> {
    debug_assert!(bandwidth_hz > 0.0);
    if sinr < 0.0 {
        return Err(ChannelError::NegativeSinr);
    }
    Ok(bandwidth_hz * libm::log2(1.0 + sinr))
}

/// Decode-and-forward two-hop capacity: the weaker hop bounds the path.
pub fn two_hop_capacity(c_source_relay: f64, c_relay_bs: f64) -> f64 {
    c_source_relay.min(c_relay_bs)
}

/// Applies the fading factor to a direct source↔BS capacity when the coin
/// landed on "faded". Relayed hops are never faded.
pub fn apply_fading(c_source_bs: f64, alpha: f64, faded: bool) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    if faded {
        alpha * c_source_bs
    } else {
        c_source_bs
    }
}

/// One N(mean, std²) draw in dB via Box–Muller.
pub(crate) fn normal_db<R: RngCore>(rng: &mut R, mean: f64, std: f64) -> f64 {
    let u1 = 1.0 - rand::Rng::random::<f64>(rng); // (0, 1], keeps ln finite
    let u2 = rand::Rng::random::<f64>(rng);
    let z = libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2);
    mean + std * z
}
