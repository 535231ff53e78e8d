//! Relay selection for uplink machine-to-machine networks.
//!
//! A cell holds one base station and a set of machines split into *sources*
//! (machines with uplink data) and *relays* (idle machines willing to forward
//! with decode-and-forward). Machine↔machine hops use WiFi, machine↔base
//! station hops use LTE, so both hops of a relayed path can transmit at the
//! same time. The crate provides:
//!
//! - [`channel`]: link gains (free-space / two-ray with log-normal shadowing),
//!   SINR and Shannon capacities for both interface types;
//! - [`topology`]: seeded random network instances and the per-run capacity
//!   tables every selection algorithm consumes;
//! - [`assignment`]: a maximum-weight Hungarian solver plus the padding
//!   transformation that reduces the k-cardinality assignment problem to a
//!   standard assignment problem;
//! - [`algorithms`]: the four relay-selection algorithms (ORSA, MRSA, WRSA,
//!   RRSA) producing a common [`algorithms::Matching`];
//! - [`oracle`] (feature `oracle`): exhaustive reference solvers and the
//!   blocking-pair scanner used to verify the fast paths.
//!
//! The crate is `no_std`-compatible (requires `alloc`); all float math goes
//! through `libm` so results are identical with or without `std`. Every
//! random quantity is driven by explicit seeds.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algorithms;
pub mod assignment;
pub mod channel;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod topology;

pub use algorithms::{mrsa, orsa, rrsa, wrsa, Matching, Outcome, QuotaMode};
pub use assignment::{hungarian, pad, solve_kcard, KCardInstance, KCardSolution, PaddedInstance};
pub use channel::{ChannelError, LinkGain, RadioParams};
pub use topology::{CapacityTables, Network, TopologyConfig};
