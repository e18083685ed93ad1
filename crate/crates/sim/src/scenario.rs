//! Scenario and power-profile files.
//!
//! Every [`ScenarioConfig`] knob has a key; see [`apply_key`] for the list.
//! A `power_profile = <path>` line pulls in a profile file whose keys are
//! the same as the power keys accepted here.

use std::path::Path;

use adhop_core::config::Placement;
use adhop_core::energy::{battery_energy_joules, EnergyEvent, Mode};
use adhop_core::{Address, ProtocolKind, ScenarioConfig, SimTime};

use crate::kv::{parse_bool, parse_f64, parse_list, parse_u64, KvError, KvFile};

fn secs(v: &str) -> Result<SimTime, String> {
    let s = parse_f64(v)?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err("expected a nonnegative number of seconds".into());
    }
    Ok(SimTime::from_secs_f64(s))
}

fn usize_of(v: &str) -> Result<usize, String> {
    parse_u64(v).map(|n| n as usize)
}

fn u8_of(v: &str) -> Result<u8, String> {
    v.parse::<u8>().map_err(|e| e.to_string())
}

fn u16_of(v: &str) -> Result<u16, String> {
    v.parse::<u16>().map_err(|e| e.to_string())
}

fn mode_of(v: &str) -> Result<Mode, String> {
    match v.to_ascii_lowercase().as_str() {
        "active" => Ok(Mode::CpuActive),
        "sleep" => Ok(Mode::CpuSleep),
        "hibernate" => Ok(Mode::CpuHibernate),
        _ => Err(format!("expected active, sleep or hibernate, got `{v}`")),
    }
}

fn radio_mode_of(v: &str) -> Result<Mode, String> {
    match v.to_ascii_lowercase().as_str() {
        "rx" | "listen" => Ok(Mode::RadioRx),
        "sleep" => Ok(Mode::RadioSleep),
        _ => Err(format!("expected rx or sleep, got `{v}`")),
    }
}

fn pairs(v: &str) -> Result<Vec<(f64, f64)>, String> {
    v.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or("expected `x,y; x,y; ...`")?;
            Ok((parse_f64(x.trim())?, parse_f64(y.trim())?))
        })
        .collect()
}

fn flows(v: &str) -> Result<Vec<(Address, Address)>, String> {
    parse_list(v)
        .iter()
        .map(|f| {
            let (s, d) = f.split_once("->").ok_or("expected `src->dst, ...`")?;
            Ok((Address(parse_u64(s)? as u32), Address(parse_u64(d)? as u32)))
        })
        .collect()
}

/// Power-profile keys. Returns `Ok(false)` for keys it does not know.
pub fn apply_power_key(cfg: &mut ScenarioConfig, key: &str, v: &str) -> Result<bool, String> {
    let e = &mut cfg.energy;
    let current = |m: Mode, p: &mut adhop_core::energy::PowerProfile| -> Result<(), String> {
        p.set_current_ma(m, parse_f64(v)?);
        Ok(())
    };
    match key {
        "voltage" | "battery_voltage" => e.profile.voltage = parse_f64(v)?,
        "cpu_active_ma" => current(Mode::CpuActive, &mut e.profile)?,
        "cpu_sleep_ma" => current(Mode::CpuSleep, &mut e.profile)?,
        "cpu_hibernate_ma" => current(Mode::CpuHibernate, &mut e.profile)?,
        "radio_tx_ma" => current(Mode::RadioTx, &mut e.profile)?,
        "radio_rx_ma" => current(Mode::RadioRx, &mut e.profile)?,
        "radio_sleep_ma" => current(Mode::RadioSleep, &mut e.profile)?,
        "frame_tx_mj" => e
            .profile
            .set_event_cost_mj(EnergyEvent::FrameTx, parse_f64(v)?),
        "frame_rx_mj" => e
            .profile
            .set_event_cost_mj(EnergyEvent::FrameRx, parse_f64(v)?),
        "accounting_period_s" => e.accounting_period = secs(v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Sets one scenario knob. Returns `Ok(false)` for keys it does not know.
pub fn apply_key(cfg: &mut ScenarioConfig, key: &str, v: &str) -> Result<bool, String> {
    if apply_power_key(cfg, key, v)? {
        return Ok(true);
    }
    match key {
        "seed" => cfg.seed = parse_u64(v)?,
        "protocol" => cfg.protocol = v.parse().map_err(|_| format!("unknown protocol `{v}`"))?,
        "heuristic" => {
            cfg.protocol = match v.to_ascii_lowercase().as_str() {
                "none" => ProtocolKind::Adhop,
                "battery" => ProtocolKind::EaAdhopB,
                "lifetime" => ProtocolKind::EaAdhopL,
                _ => return Err(format!("expected none, battery or lifetime, got `{v}`")),
            }
        }
        "duration_s" => cfg.duration = secs(v)?,
        "area_m" => cfg.area_m = parse_f64(v)?,
        "node_count" | "routers" | "nodes" => cfg.routers = usize_of(v)?,
        "sources" => cfg.sources = usize_of(v)?,
        "sinks" => cfg.sinks = usize_of(v)?,
        "positions" => cfg.placement = Placement::Explicit(pairs(v)?),
        "flows" => cfg.flows = flows(v)?,
        "v_max" => cfg.mobility.v_max = parse_f64(v)?,
        "mobility_interval_s" => cfg.mobility.mean_interval = parse_f64(v)?,
        "mobility_turn_deg" => cfg.mobility.turn_stddev_deg = parse_f64(v)?,
        "mobility_step_s" => cfg.mobility.step = secs(v)?,
        "tx_power_mw" => cfg.channel.tx_power_mw = parse_f64(v)?,
        "sensitivity_dbm" => cfg.channel.sensitivity_dbm = parse_f64(v)?,
        "frequency_hz" => cfg.channel.frequency_hz = parse_f64(v)?,
        "range_m" => cfg.channel.range_override_m = Some(parse_f64(v)?),
        "loss_probability" => cfg.channel.loss_probability = parse_f64(v)?,
        "bitrate_bps" => cfg.channel.bitrate_bps = parse_f64(v)?,
        "mac_retries" => cfg.mac.retries = u8_of(v)?,
        "ack_window_us" => cfg.mac.ack_window = SimTime::from_micros(parse_u64(v)?),
        "overhearing" => cfg.mac.overhearing = parse_bool(v)?,
        "queue_capacity" => cfg.mac.queue_capacity = usize_of(v)?,
        "app_interval_s" => cfg.app_interval = secs(v)?,
        "app_payload" => cfg.app_payload = u16_of(v)?,
        "mac_header" => cfg.layout.mac = u16_of(v)?,
        "ip_header" => cfg.layout.ip = u16_of(v)?,
        "udp_header" => cfg.layout.udp = u16_of(v)?,
        "aodv_control_bytes" => cfg.layout.aodv_control = u16_of(v)?,
        "max_frame" => cfg.layout.max_frame = u16_of(v)?,
        "tau_init" => cfg.adhop.pheromone.tau_init = parse_f64(v)?,
        "tau_0" => cfg.adhop.pheromone.tau_0 = parse_f64(v)?,
        "tau_min" => cfg.adhop.pheromone.tau_min = parse_f64(v)?,
        "tau_max" => cfg.adhop.pheromone.tau_max = parse_f64(v)?,
        "phi_base" => cfg.adhop.pheromone.phi_base = parse_f64(v)?,
        "rho_base" => cfg.adhop.pheromone.rho_base = parse_f64(v)?,
        "kappa" => cfg.adhop.pheromone.kappa = parse_f64(v)?,
        "buckets" => cfg.adhop.pheromone.buckets = usize_of(v)?,
        "ttl" => {
            cfg.adhop.ttl = u8_of(v)?;
            cfg.aodv.ttl = cfg.adhop.ttl;
        }
        "dedupe_capacity" => {
            cfg.adhop.dedupe_capacity = usize_of(v)?;
            cfg.aodv.dedupe_capacity = cfg.adhop.dedupe_capacity;
        }
        "dedupe_age_s" => {
            cfg.adhop.dedupe_age = secs(v)?;
            cfg.aodv.dedupe_age = cfg.adhop.dedupe_age;
        }
        "pending_expiry_s" => cfg.adhop.pending_expiry = secs(v)?,
        "evaporation_period_s" => cfg.evaporation_period = secs(v)?,
        "route_timeout_s" => cfg.aodv.route_timeout = secs(v)?,
        "rreq_retries" => cfg.aodv.rreq_retries = u8_of(v)?,
        "rreq_spacing_s" => cfg.aodv.rreq_spacing = secs(v)?,
        "aodv_buffer" => cfg.aodv.buffer_capacity = usize_of(v)?,
        "target_lifetime_s" => cfg.target_lifetime = Some(secs(v)?),
        "battery_j" => cfg.energy.battery_j = parse_f64(v)?,
        "battery_mah" => {
            cfg.energy.battery_j = battery_energy_joules(parse_f64(v)?, cfg.energy.profile.voltage)
        }
        "cpu_idle" => cfg.energy.cpu_idle = mode_of(v)?,
        "radio_idle" => cfg.energy.radio_idle = radio_mode_of(v)?,
        "cpu_burst_ms" => cfg.energy.cpu_burst = SimTime::from_secs_f64(parse_f64(v)? / 1e3),
        "neighbor_sample_s" => cfg.neighbor_sample_period = secs(v)?,
        "trace" => cfg.trace = parse_bool(v)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Applies every entry of `file` to `cfg`. Keys for which `extra` returns
/// `Ok(true)` are consumed by the caller instead.
pub fn apply_file(
    cfg: &mut ScenarioConfig,
    file: &KvFile,
    mut extra: impl FnMut(&str, &str) -> Result<bool, String>,
) -> Result<(), KvError> {
    for e in &file.entries {
        if e.key == "power_profile" {
            let profile = KvFile::load(&file.resolve(&e.value))?;
            for p in &profile.entries {
                match apply_power_key(cfg, &p.key, &p.value) {
                    Ok(true) => {}
                    Ok(false) => return Err(profile.unknown(p)),
                    Err(msg) => return Err(profile.value_error(p, msg)),
                }
            }
            continue;
        }
        let handled = extra(&e.key, &e.value).map_err(|m| file.value_error(e, m))?;
        if handled {
            continue;
        }
        match apply_key(cfg, &e.key, &e.value) {
            Ok(true) => {}
            Ok(false) => return Err(file.unknown(e)),
            Err(msg) => return Err(file.value_error(e, msg)),
        }
    }
    Ok(())
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, KvError> {
    let file = KvFile::load(path)?;
    let mut cfg = ScenarioConfig::default();
    apply_file(&mut cfg, &file, |_, _| Ok(false))?;
    Ok(cfg)
}
