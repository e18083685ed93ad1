//! Scenario configuration with defaults for every knob.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::ant::AdhopConfig;
use crate::aodvjr::AodvConfig;
use crate::energy::{battery_energy_joules, Mode, PowerProfile};
use crate::heuristics::HeuristicKind;
use crate::routing::StackLayout;
use crate::time::SimTime;
use crate::Address;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProtocolKind {
    Adhop,
    EaAdhopB,
    EaAdhopL,
    Aodvjr,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] = [
        ProtocolKind::Adhop,
        ProtocolKind::EaAdhopB,
        ProtocolKind::EaAdhopL,
        ProtocolKind::Aodvjr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Adhop => "adhop",
            ProtocolKind::EaAdhopB => "ea-adhop-b",
            ProtocolKind::EaAdhopL => "ea-adhop-l",
            ProtocolKind::Aodvjr => "aodvjr",
        }
    }

    pub fn heuristic(self) -> HeuristicKind {
        match self {
            ProtocolKind::EaAdhopB => HeuristicKind::Battery,
            ProtocolKind::EaAdhopL => HeuristicKind::Lifetime,
            ProtocolKind::Adhop | ProtocolKind::Aodvjr => HeuristicKind::None,
        }
    }

    pub fn is_ant_based(self) -> bool {
        !matches!(self, ProtocolKind::Aodvjr)
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adhop" => Ok(ProtocolKind::Adhop),
            "ea-adhop-b" | "eaadhop-b" | "battery" => Ok(ProtocolKind::EaAdhopB),
            "ea-adhop-l" | "eaadhop-l" | "lifetime" => Ok(ProtocolKind::EaAdhopL),
            "aodvjr" | "aodv" => Ok(ProtocolKind::Aodvjr),
            _ => Err(ConfigError::UnknownProtocol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown protocol")]
    UnknownProtocol,
    #[error("invalid value for `{0}`")]
    Invalid(&'static str),
}

/// Where nodes start.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Placement {
    /// Uniform over the area, drawn from the seed.
    #[default]
    Random,
    /// Fixed coordinates in metres, one per node.
    Explicit(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityParams {
    pub v_max: f64,
    /// Mean of the exponential time between direction changes.
    pub mean_interval: f64,
    /// Standard deviation of the heading change, degrees.
    pub turn_stddev_deg: f64,
    /// Position update step.
    pub step: SimTime,
}

impl Default for MobilityParams {
    fn default() -> Self {
        Self {
            v_max: 5.0,
            mean_interval: 3.0,
            turn_stddev_deg: 30.0,
            step: SimTime::from_millis(250),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub tx_power_mw: f64,
    pub sensitivity_dbm: f64,
    pub frequency_hz: f64,
    /// Overrides the range derived from the three values above.
    pub range_override_m: Option<f64>,
    /// Independent loss probability per frame and receiver.
    pub loss_probability: f64,
    pub bitrate_bps: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            tx_power_mw: 1.0,
            sensitivity_dbm: -85.0,
            frequency_hz: 2.4e9,
            range_override_m: None,
            loss_probability: 0.0,
            bitrate_bps: 250_000.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacParams {
    /// Retransmissions after the first unicast attempt.
    pub retries: u8,
    /// Time from end of data frame to end of the acknowledgement window.
    pub ack_window: SimTime,
    /// Address filtering: when false only the addressed node pays for a
    /// unicast reception.
    pub overhearing: bool,
    /// Frames a node may hold waiting for its radio.
    pub queue_capacity: usize,
}

impl Default for MacParams {
    fn default() -> Self {
        // 192 µs turnaround + 11-byte ACK (352 µs)
        Self {
            retries: 3,
            ack_window: SimTime::from_micros(544),
            overhearing: false,
            queue_capacity: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    pub profile: PowerProfile,
    /// Battery capacity in joules.
    pub battery_j: f64,
    pub accounting_period: SimTime,
    pub cpu_idle: Mode,
    pub radio_idle: Mode,
    /// CPU active time per packet sent or received.
    pub cpu_burst: SimTime,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            profile: PowerProfile::default(),
            battery_j: battery_energy_joules(3.0, 3.0),
            accounting_period: SimTime::from_secs(1),
            cpu_idle: Mode::CpuSleep,
            radio_idle: Mode::RadioSleep,
            cpu_burst: SimTime::from_millis(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub protocol: ProtocolKind,
    pub duration: SimTime,
    pub area_m: f64,
    /// Pure routers, in addition to sources and sinks.
    pub routers: usize,
    pub sources: usize,
    pub sinks: usize,
    pub placement: Placement,
    /// Explicit (source, sink) pairs. Empty pairs source `i` with sink
    /// `i % sinks`.
    pub flows: Vec<(Address, Address)>,
    pub mobility: MobilityParams,
    pub channel: ChannelParams,
    pub mac: MacParams,
    pub app_interval: SimTime,
    pub app_payload: u16,
    pub layout: StackLayout,
    pub adhop: AdhopConfig,
    pub aodv: AodvConfig,
    pub evaporation_period: SimTime,
    /// `None` uses the scenario duration.
    pub target_lifetime: Option<SimTime>,
    pub energy: EnergyParams,
    pub neighbor_sample_period: SimTime,
    pub trace: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            protocol: ProtocolKind::Adhop,
            duration: SimTime::from_secs(300),
            area_m: 1200.0,
            routers: 100,
            sources: 20,
            sinks: 20,
            placement: Placement::Random,
            flows: Vec::new(),
            mobility: MobilityParams::default(),
            channel: ChannelParams::default(),
            mac: MacParams::default(),
            app_interval: SimTime::from_secs(4),
            app_payload: 32,
            layout: StackLayout::default(),
            adhop: AdhopConfig::default(),
            aodv: AodvConfig::default(),
            evaporation_period: SimTime::from_secs(1),
            target_lifetime: None,
            energy: EnergyParams::default(),
            neighbor_sample_period: SimTime::from_secs(10),
            trace: false,
        }
    }
}

impl ScenarioConfig {
    pub fn node_count(&self) -> usize {
        match &self.placement {
            Placement::Explicit(p) => p.len(),
            Placement::Random => self.sources + self.sinks + self.routers,
        }
    }

    /// Source/sink pairs actually used.
    pub fn effective_flows(&self) -> Vec<(Address, Address)> {
        if !self.flows.is_empty() || matches!(self.placement, Placement::Explicit(_)) {
            return self.flows.clone();
        }
        if self.sinks == 0 {
            return Vec::new();
        }
        (0..self.sources)
            .map(|i| {
                (
                    Address(i as u32),
                    Address((self.sources + i % self.sinks) as u32),
                )
            })
            .collect()
    }

    pub fn target_lifetime(&self) -> SimTime {
        self.target_lifetime.unwrap_or(self.duration)
    }

    /// ADHOP settings with the protocol's evaporation relief applied: plain
    /// ADHOP runs without it.
    pub fn adhop_for_protocol(&self) -> AdhopConfig {
        let mut cfg = self.adhop;
        if self.protocol == ProtocolKind::Adhop {
            cfg.pheromone.kappa = 0.0;
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        if !finite_pos(self.area_m) {
            return Err(ConfigError::Invalid("area_m"));
        }
        if !(self.mobility.v_max >= 0.0 && self.mobility.v_max.is_finite()) {
            return Err(ConfigError::Invalid("v_max"));
        }
        if !finite_pos(self.mobility.mean_interval) || self.mobility.step == SimTime::ZERO {
            return Err(ConfigError::Invalid("mobility"));
        }
        if !finite_pos(self.channel.tx_power_mw) || !finite_pos(self.channel.frequency_hz) {
            return Err(ConfigError::Invalid("channel"));
        }
        if !finite_pos(self.channel.bitrate_bps) {
            return Err(ConfigError::Invalid("bitrate_bps"));
        }
        if let Some(r) = self.channel.range_override_m {
            if !finite_pos(r) {
                return Err(ConfigError::Invalid("range_m"));
            }
        }
        if !(0.0..=1.0).contains(&self.channel.loss_probability) {
            return Err(ConfigError::Invalid("loss_probability"));
        }
        if self.mac.queue_capacity == 0 {
            return Err(ConfigError::Invalid("queue_capacity"));
        }
        if self.app_interval == SimTime::ZERO {
            return Err(ConfigError::Invalid("app_interval_s"));
        }
        if self.app_payload > self.layout.max_payload() {
            return Err(ConfigError::Invalid("app_payload"));
        }
        let p = &self.adhop.pheromone;
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(p.phi_base) || !unit(p.rho_base) || !(0.0..1.0).contains(&p.kappa) {
            return Err(ConfigError::Invalid("pheromone coefficients"));
        }
        if !(p.tau_0 > 0.0 && p.tau_min >= 0.0 && p.tau_max >= p.tau_0 && p.tau_init >= 0.0)
            || p.buckets == 0
        {
            return Err(ConfigError::Invalid("pheromone levels"));
        }
        if self.evaporation_period == SimTime::ZERO
            || self.energy.accounting_period == SimTime::ZERO
        {
            return Err(ConfigError::Invalid("periods"));
        }
        if self.target_lifetime() == SimTime::ZERO && self.protocol == ProtocolKind::EaAdhopL {
            return Err(ConfigError::Invalid("target_lifetime_s"));
        }
        if !(self.energy.battery_j >= 0.0) || !self.energy.profile.is_valid() {
            return Err(ConfigError::Invalid("energy"));
        }
        if self.energy.cpu_idle.device() != crate::energy::Device::Cpu
            || self.energy.radio_idle.device() != crate::energy::Device::Radio
        {
            return Err(ConfigError::Invalid("idle modes"));
        }
        let n = self.node_count();
        if n > u32::MAX as usize {
            return Err(ConfigError::Invalid("node_count"));
        }
        for &(s, d) in &self.effective_flows() {
            if s.index() >= n || d.index() >= n || s == d {
                return Err(ConfigError::Invalid("flows"));
            }
        }
        if matches!(self.placement, Placement::Random) && self.sources > 0 && self.sinks == 0 {
            return Err(ConfigError::Invalid("sinks"));
        }
        Ok(())
    }
}
