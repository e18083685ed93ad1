//! Run results and the derived metrics: delivery ratio, routing overhead and
//! energy spread.

use alloc::vec::Vec;

use crate::config::ProtocolKind;
use crate::routing::{DropReason, PacketKind};
use crate::time::SimTime;

/// Number of drop reasons tracked in [`MetricsReport::drops`].
pub const DROP_REASONS: usize = 8;

pub fn drop_index(r: DropReason) -> usize {
    r as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Role {
    Source,
    Sink,
    #[default]
    Router,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeReport {
    pub role: Role,
    /// Energy taken from the battery over the run (J).
    pub consumed_j: f64,
    pub remaining_j: f64,
    pub death: Option<SimTime>,
    pub frames_sent: u64,
    pub frames_received: u64,
    pub radio_tx_time: SimTime,
    pub radio_rx_time: SimTime,
    /// Σ E_tot over accounting iterations, before clamping to the charge left.
    pub e_tot_sum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub seed: u64,
    pub protocol: ProtocolKind,
    pub routers: usize,
    pub node_count: usize,
    pub duration: SimTime,
    pub battery_j: f64,
    pub generated: u64,
    /// Messages a dead source could not send. Included in `generated`.
    pub generation_failures: u64,
    pub delivered: u64,
    /// Transmissions per packet kind, retries included.
    pub frames_by_kind: [u64; 6],
    pub bytes_by_kind: [u64; 6],
    pub ack_frames: u64,
    /// Payload-less frames plus every payload copy beyond the one counted as
    /// useful.
    pub control_bytes: u64,
    /// Non-payload bytes of payload-carrying frames.
    pub data_header_bytes: u64,
    /// One payload per delivered message.
    pub useful_bytes: u64,
    /// Payload copies of messages that never arrived.
    pub undelivered_payload_bytes: u64,
    pub total_bytes: u64,
    /// Sum over transmitted frames of their airtime, acknowledgements
    /// included.
    pub tx_airtime: SimTime,
    pub drops: [u64; DROP_REASONS],
    pub mean_neighbors: f64,
    pub nodes: Vec<NodeReport>,
}

impl MetricsReport {
    pub fn empty(seed: u64, protocol: ProtocolKind) -> Self {
        Self {
            seed,
            protocol,
            routers: 0,
            node_count: 0,
            duration: SimTime::ZERO,
            battery_j: 0.0,
            generated: 0,
            generation_failures: 0,
            delivered: 0,
            frames_by_kind: [0; 6],
            bytes_by_kind: [0; 6],
            ack_frames: 0,
            control_bytes: 0,
            data_header_bytes: 0,
            useful_bytes: 0,
            undelivered_payload_bytes: 0,
            total_bytes: 0,
            tx_airtime: SimTime::ZERO,
            drops: [0; DROP_REASONS],
            mean_neighbors: 0.0,
            nodes: Vec::new(),
        }
    }

    pub fn delivery_ratio(&self) -> f64 {
        delivery_ratio(self.generated, self.delivered)
    }

    pub fn routing_overhead(&self) -> f64 {
        routing_overhead(self.total_bytes - self.useful_bytes, self.useful_bytes)
    }

    /// Population mean and standard deviation of per-node consumption.
    pub fn energy_stats(&self) -> (f64, f64) {
        let v: Vec<f64> = self.nodes.iter().map(|n| n.consumed_j).collect();
        energy_stats(&v)
    }

    pub fn dead_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.death.is_some()).count()
    }

    pub fn frames(&self, kind: PacketKind) -> u64 {
        self.frames_by_kind[kind.idx()]
    }

    pub fn total_frames(&self) -> u64 {
        self.frames_by_kind.iter().sum()
    }

    pub fn drops_for(&self, r: DropReason) -> u64 {
        self.drops[drop_index(r)]
    }
}

/// `delivered / generated`, 0 when nothing was generated.
pub fn delivery_ratio(generated: u64, delivered: u64) -> f64 {
    if generated == 0 {
        0.0
    } else {
        delivered as f64 / generated as f64
    }
}

/// Fraction of transmitted bytes that were not useful payload.
pub fn routing_overhead(control_bytes: u64, useful_bytes: u64) -> f64 {
    let total = control_bytes + useful_bytes;
    if total == 0 {
        0.0
    } else {
        control_bytes as f64 / total as f64
    }
}

pub fn energy_stats(consumed: &[f64]) -> (f64, f64) {
    if consumed.is_empty() {
        return (0.0, 0.0);
    }
    let n = consumed.len() as f64;
    let mean = consumed.iter().sum::<f64>() / n;
    let var = consumed
        .iter()
        .map(|c| (c - mean) * (c - mean))
        .sum::<f64>()
        / n;
    (mean, libm::sqrt(var))
}
