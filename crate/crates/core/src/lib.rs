//! Ant-based routing for mobile wireless sensor networks.
//!
//! This crate holds everything that does not need an operating system: the
//! pheromone routing table, the ADHOP ant state machine and its energy-aware
//! heuristics, an AODVjr baseline, the per-node energy model and a
//! deterministic discrete-event engine that ties them together.
//!
//! It is `no_std` (with `alloc`). File formats, sweeps and the command line
//! live in the companion `adhop-sim` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ant;
pub mod aodvjr;
pub mod config;
pub mod energy;
pub mod engine;
pub mod heuristics;
pub mod metrics;
pub mod pheromone;
pub mod routing;
pub mod time;

mod dedupe;

pub use config::{ConfigError, ProtocolKind, ScenarioConfig};
pub use engine::{run, RunOutput, Simulation};
pub use metrics::MetricsReport;
pub use time::SimTime;

use core::fmt;

/// Network address of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Address(pub u32);

impl Address {
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}", self.0)
    }
}

impl From<u32> for Address {
    fn from(v: u32) -> Self {
        Address(v)
    }
}
