//! Per-node energy accounting.
//!
//! Devices are charged by time spent in each operating mode and by counted
//! events with a fixed worst-case cost. At every accounting tick the energy
//! of the iteration is summed over devices and removed from the battery.

use crate::time::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Device {
    Cpu,
    Radio,
}

impl Device {
    pub const ALL: [Device; 2] = [Device::Cpu, Device::Radio];

    fn idx(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    CpuActive,
    CpuSleep,
    CpuHibernate,
    RadioTx,
    RadioRx,
    RadioSleep,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::CpuActive,
        Mode::CpuSleep,
        Mode::CpuHibernate,
        Mode::RadioTx,
        Mode::RadioRx,
        Mode::RadioSleep,
    ];

    pub fn device(self) -> Device {
        match self {
            Mode::CpuActive | Mode::CpuSleep | Mode::CpuHibernate => Device::Cpu,
            Mode::RadioTx | Mode::RadioRx | Mode::RadioSleep => Device::Radio,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EnergyEvent {
    FrameTx,
    FrameRx,
}

impl EnergyEvent {
    pub const ALL: [EnergyEvent; 2] = [EnergyEvent::FrameTx, EnergyEvent::FrameRx];

    fn idx(self) -> usize {
        self as usize
    }
}

/// Current drain per mode (A), supply voltage and per-event costs (J).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerProfile {
    pub voltage: f64,
    currents: [f64; 6],
    event_costs: [f64; 2],
}

impl Default for PowerProfile {
    /// EPOSMote drain figures at 3 V, no event surcharges.
    fn default() -> Self {
        let mut p = PowerProfile {
            voltage: 3.0,
            currents: [0.0; 6],
            event_costs: [0.0; 2],
        };
        p.set_current_ma(Mode::CpuActive, 3.3);
        p.set_current_ma(Mode::CpuSleep, 0.060);
        p.set_current_ma(Mode::CpuHibernate, 0.0009);
        p.set_current_ma(Mode::RadioTx, 28.3);
        p.set_current_ma(Mode::RadioRx, 21.3);
        p.set_current_ma(Mode::RadioSleep, 0.0001);
        p
    }
}

impl PowerProfile {
    /// Current in amperes.
    pub fn current(&self, mode: Mode) -> f64 {
        self.currents[mode.idx()]
    }

    pub fn set_current_ma(&mut self, mode: Mode, ma: f64) {
        self.currents[mode.idx()] = ma * 1e-3;
    }

    /// Power in watts.
    pub fn power(&self, mode: Mode) -> f64 {
        self.current(mode) * self.voltage
    }

    /// Cost in joules.
    pub fn event_cost(&self, e: EnergyEvent) -> f64 {
        self.event_costs[e.idx()]
    }

    pub fn set_event_cost_mj(&mut self, e: EnergyEvent, mj: f64) {
        self.event_costs[e.idx()] = mj * 1e-3;
    }

    pub fn is_valid(&self) -> bool {
        self.voltage > 0.0
            && self
                .currents
                .iter()
                .chain(&self.event_costs)
                .all(|v| v.is_finite() && *v >= 0.0)
    }
}

/// Joules stored in a battery of `capacity_mah` at `voltage`.
pub fn battery_energy_joules(capacity_mah: f64, voltage: f64) -> f64 {
    capacity_mah * 3600.0 / 1000.0 * voltage
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Battery {
    pub capacity: f64,
    pub remaining: f64,
    pub voltage: f64,
}

impl Battery {
    pub fn new(capacity: f64, voltage: f64) -> Self {
        Self {
            capacity,
            remaining: capacity,
            voltage,
        }
    }

    /// Removes up to `joules`; returns what was actually taken.
    pub fn drain(&mut self, joules: f64) -> f64 {
        let taken = joules.min(self.remaining).max(0.0);
        self.remaining -= taken;
        if self.remaining < 0.0 {
            self.remaining = 0.0;
        }
        taken
    }

    pub fn is_empty(&self) -> bool {
        self.remaining <= 0.0
    }

    pub fn consumed(&self) -> f64 {
        self.capacity - self.remaining
    }

    pub fn fraction(&self) -> f64 {
        if self.capacity > 0.0 {
            self.remaining / self.capacity
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TickOutcome {
    /// Energy of the iteration summed over devices.
    pub e_tot: f64,
    /// What the battery could actually supply.
    pub deducted: f64,
    pub depleted: bool,
}

#[derive(Debug, Clone, Copy)]
struct DeviceState {
    mode: Mode,
    since: SimTime,
    e_tm_iter: f64,
    e_tm_total: f64,
    e_ev_total: f64,
}

#[derive(Debug, Clone)]
pub struct EnergyAccount {
    profile: PowerProfile,
    devices: [DeviceState; 2],
    counters: [[u64; 2]; 2],
    time_in_mode: [u64; 6],
    iteration: u64,
    e_tot_sum: f64,
}

impl EnergyAccount {
    pub fn new(profile: PowerProfile, cpu_mode: Mode, radio_mode: Mode, now: SimTime) -> Self {
        debug_assert_eq!(cpu_mode.device(), Device::Cpu);
        debug_assert_eq!(radio_mode.device(), Device::Radio);
        let d = |mode| DeviceState {
            mode,
            since: now,
            e_tm_iter: 0.0,
            e_tm_total: 0.0,
            e_ev_total: 0.0,
        };
        Self {
            profile,
            devices: [d(cpu_mode), d(radio_mode)],
            counters: [[0; 2]; 2],
            time_in_mode: [0; 6],
            iteration: 0,
            e_tot_sum: 0.0,
        }
    }

    pub fn profile(&self) -> &PowerProfile {
        &self.profile
    }

    pub fn mode(&self, device: Device) -> Mode {
        self.devices[device.idx()].mode
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    /// Charges the time spent in the current mode up to `now` and switches
    /// to `new_mode`. Returns the charged energy.
    pub fn mode_change(&mut self, device: Device, new_mode: Mode, now: SimTime) -> f64 {
        debug_assert_eq!(new_mode.device(), device);
        let profile = self.profile;
        let st = &mut self.devices[device.idx()];
        debug_assert!(now >= st.since, "mode change in the past");
        let dt = now.saturating_sub(st.since);
        let delta = dt.as_secs_f64() * profile.power(st.mode);
        self.time_in_mode[st.mode.idx()] += dt.as_micros();
        st.e_tm_iter += delta;
        st.e_tm_total += delta;
        st.mode = new_mode;
        st.since = now;
        delta
    }

    pub fn record_event(&mut self, device: Device, event: EnergyEvent) {
        self.counters[device.idx()][event.idx()] += 1;
    }

    /// Closes iteration `i`: sums time-in-mode and event energy over all
    /// devices up to `now` and takes it from the battery.
    pub fn accounting_tick(&mut self, battery: &mut Battery, now: SimTime) -> TickOutcome {
        let mut e_tot = 0.0;
        for dev in Device::ALL {
            let mode = self.mode(dev);
            self.mode_change(dev, mode, now);
            let e_ev: f64 = EnergyEvent::ALL
                .iter()
                .map(|&e| self.profile.event_cost(e) * self.counters[dev.idx()][e.idx()] as f64)
                .sum();
            let st = &mut self.devices[dev.idx()];
            st.e_ev_total += e_ev;
            e_tot += st.e_tm_iter + e_ev;
            st.e_tm_iter = 0.0;
            self.counters[dev.idx()] = [0; 2];
        }
        self.iteration += 1;
        self.e_tot_sum += e_tot;
        let deducted = battery.drain(e_tot);
        TickOutcome {
            e_tot,
            deducted,
            depleted: battery.is_empty(),
        }
    }

    /// Time-in-mode energy summed over all closed and open iterations.
    pub fn total_time_energy(&self, device: Device) -> f64 {
        self.devices[device.idx()].e_tm_total
    }

    pub fn total_event_energy(&self, device: Device) -> f64 {
        self.devices[device.idx()].e_ev_total
    }

    /// Σ E_tot over all closed iterations.
    pub fn e_tot_sum(&self) -> f64 {
        self.e_tot_sum
    }

    /// Charged time in `mode`, up to the last mode change.
    pub fn time_in_mode(&self, mode: Mode) -> SimTime {
        SimTime::from_micros(self.time_in_mode[mode.idx()])
    }
}
