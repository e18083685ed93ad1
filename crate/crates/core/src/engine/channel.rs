//! Disk propagation model and 802.15.4 airtime.

use crate::config::ChannelParams;
use crate::time::SimTime;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * libm::log10(mw)
}

/// Distance at which free-space loss uses up the link budget:
/// `(λ/4π)·10^((P_tx − S)/20)`.
pub fn communication_range(tx_mw: f64, sensitivity_dbm: f64, freq_hz: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / freq_hz;
    let budget_db = mw_to_dbm(tx_mw) - sensitivity_dbm;
    lambda / (4.0 * core::f64::consts::PI) * libm::pow(10.0, budget_db / 20.0)
}

pub fn range_of(p: &ChannelParams) -> f64 {
    p.range_override_m
        .unwrap_or_else(|| communication_range(p.tx_power_mw, p.sensitivity_dbm, p.frequency_hz))
}

/// Time on air for `bytes` at `bitrate_bps`, rounded up to whole microseconds.
pub fn airtime(bytes: u16, bitrate_bps: f64) -> SimTime {
    let us = libm::ceil(bytes as f64 * 8.0 * 1e6 / bitrate_bps - 1e-9);
    SimTime::from_micros(us as u64)
}

pub fn distance_sq(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}
