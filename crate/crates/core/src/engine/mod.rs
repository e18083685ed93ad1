//! Deterministic discrete-event engine.
//!
//! One [`Simulation`] owns every node, the event queue and the channel.
//! Radios are half-duplex disks: a frame reaches every live node within
//! range whose radio is not committed to a transmission for the frame's
//! airtime. Unicast frames are acknowledged and retried; after the last
//! retry the routing layer is told the link failed.

mod channel;
mod mobility;
mod queue;
mod timeline;

pub use channel::{airtime, communication_range, distance_sq, mw_to_dbm, range_of, SPEED_OF_LIGHT};
pub use mobility::{advance, mobility_step, Motion};
pub use queue::EventQueue;
pub use timeline::{Segment, Timeline};

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ant::AdhopNode;
use crate::aodvjr::AodvNode;
use crate::config::{ConfigError, Placement, ScenarioConfig};
use crate::energy::{Battery, Device, EnergyAccount, EnergyEvent, Mode};
use crate::heuristics::{battery_charge_h, HeuristicKind, HeuristicValue, LifetimeEstimator};
use crate::metrics::{drop_index, MetricsReport, NodeReport, Role, DROP_REASONS};
use crate::routing::{Action, AppData, DropReason, Packet, Timer};
use crate::time::SimTime;
use crate::Address;

/// Bytes of an 802.15.4 acknowledgement frame.
pub const ACK_FRAME_BYTES: u16 = 11;

const STREAM_PLACEMENT: u64 = 1;
const STREAM_MOBILITY: u64 = 2;
const STREAM_TRAFFIC: u64 = 3;
const STREAM_LOSS: u64 = 4;

/// Independent random stream `stream` of node `node` under `seed`.
pub fn node_rng(seed: u64, stream: u64, node: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) | (node & 0xffff_ffff));
    rng
}

#[derive(Debug, Clone)]
pub enum Protocol {
    Adhop(AdhopNode),
    Aodv(AodvNode),
}

#[derive(Debug, Clone)]
struct Frame {
    dest: Option<Address>,
    packet: Packet,
    attempts: u8,
}

struct Node {
    addr: Address,
    role: Role,
    alive: bool,
    motion: Motion,
    mobility_rng: ChaCha8Rng,
    loss_rng: ChaCha8Rng,
    protocol: Protocol,
    battery: Battery,
    account: EnergyAccount,
    radio: Timeline,
    cpu: Timeline,
    estimator: LifetimeEstimator,
    queue: VecDeque<Frame>,
    in_flight: Option<Frame>,
    tx_scheduled: bool,
    death: Option<SimTime>,
    frames_sent: u64,
    frames_received: u64,
    consumed: f64,
}

#[derive(Debug, Clone, Copy)]
struct Flow {
    source: Address,
    sink: Address,
    sent: u64,
}

#[derive(Debug, Clone)]
enum Event {
    AppSend {
        flow: usize,
    },
    TxStart(usize),
    TxDone {
        node: usize,
        acked: bool,
    },
    Arrival {
        node: usize,
        from: Address,
        packet: Packet,
    },
    Timer {
        node: usize,
        timer: Timer,
    },
    Mobility,
    Evaporation,
    Accounting,
    NeighborSample,
}

#[derive(Default)]
struct Collector {
    generated: u64,
    generation_failures: u64,
    delivered: BTreeSet<u64>,
    payload_tx: BTreeMap<u64, u64>,
    payload_len: BTreeMap<u64, u64>,
    frames_by_kind: [u64; 6],
    bytes_by_kind: [u64; 6],
    ack_frames: u64,
    payloadless_bytes: u64,
    data_header_bytes: u64,
    total_bytes: u64,
    tx_airtime: SimTime,
    drops: [u64; DROP_REASONS],
    neighbor_sum: u64,
    neighbor_samples: u64,
}

/// Result of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: MetricsReport,
    /// One line per traced event (`time node kind detail`); empty unless
    /// tracing was enabled.
    pub trace: Vec<String>,
}

pub struct Simulation {
    cfg: ScenarioConfig,
    range: f64,
    now: SimTime,
    events: EventQueue<Event>,
    nodes: Vec<Node>,
    flows: Vec<Flow>,
    stats: Collector,
    trace: Vec<String>,
    ack_air: SimTime,
}

/// Runs `cfg` to completion.
pub fn run(cfg: &ScenarioConfig) -> Result<RunOutput, ConfigError> {
    Ok(Simulation::new(cfg.clone())?.finish())
}

impl Simulation {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let n = cfg.node_count();
        let range = range_of(&cfg.channel);
        let flows: Vec<Flow> = cfg
            .effective_flows()
            .into_iter()
            .map(|(source, sink)| Flow {
                source,
                sink,
                sent: 0,
            })
            .collect();
        let adhop_cfg = cfg.adhop_for_protocol();
        let capacity = cfg.energy.battery_j;
        let voltage = cfg.energy.profile.voltage;
        let target = cfg.target_lifetime().as_secs_f64();

        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let addr = Address(i as u32);
            let (x, y) = match &cfg.placement {
                Placement::Explicit(p) => p[i],
                Placement::Random => {
                    let mut rng = node_rng(cfg.seed, STREAM_PLACEMENT, i as u64);
                    (
                        rng.random_range(0.0..=cfg.area_m),
                        rng.random_range(0.0..=cfg.area_m),
                    )
                }
            };
            let mut mobility_rng = node_rng(cfg.seed, STREAM_MOBILITY, i as u64);
            let motion = Motion::new(x, y, &cfg.mobility, &mut mobility_rng);
            let role = if flows.iter().any(|f| f.source == addr) {
                Role::Source
            } else if flows.iter().any(|f| f.sink == addr) {
                Role::Sink
            } else {
                Role::Router
            };
            let protocol = if cfg.protocol.is_ant_based() {
                Protocol::Adhop(AdhopNode::new(addr, adhop_cfg))
            } else {
                Protocol::Aodv(AodvNode::new(addr, cfg.aodv))
            };
            nodes.push(Node {
                addr,
                role,
                alive: true,
                motion,
                mobility_rng,
                loss_rng: node_rng(cfg.seed, STREAM_LOSS, i as u64),
                protocol,
                battery: Battery::new(capacity, voltage),
                account: EnergyAccount::new(
                    cfg.energy.profile,
                    cfg.energy.cpu_idle,
                    cfg.energy.radio_idle,
                    SimTime::ZERO,
                ),
                radio: Timeline::new(Device::Radio, cfg.energy.radio_idle),
                cpu: Timeline::new(Device::Cpu, cfg.energy.cpu_idle),
                estimator: LifetimeEstimator::new(capacity, target),
                queue: VecDeque::new(),
                in_flight: None,
                tx_scheduled: false,
                death: None,
                frames_sent: 0,
                frames_received: 0,
                consumed: 0.0,
            });
        }

        let mut events = EventQueue::new();
        let duration = cfg.duration;
        if duration > SimTime::ZERO {
            events.push(SimTime::ZERO, Event::NeighborSample);
            if cfg.mobility.v_max > 0.0 && cfg.mobility.step < duration {
                events.push(cfg.mobility.step, Event::Mobility);
            }
            if cfg.protocol.is_ant_based() && cfg.evaporation_period < duration {
                events.push(cfg.evaporation_period, Event::Evaporation);
            }
            if cfg.energy.accounting_period < duration {
                events.push(cfg.energy.accounting_period, Event::Accounting);
            }
            for (k, f) in flows.iter().enumerate() {
                let mut rng = node_rng(cfg.seed, STREAM_TRAFFIC, f.source.0 as u64);
                let phase = SimTime::from_micros(rng.random_range(0..cfg.app_interval.as_micros()));
                if phase < duration {
                    events.push(phase, Event::AppSend { flow: k });
                }
            }
        }

        let ack_air = airtime(ACK_FRAME_BYTES, cfg.channel.bitrate_bps);
        Ok(Self {
            cfg,
            range,
            now: SimTime::ZERO,
            events,
            nodes,
            flows,
            stats: Collector::default(),
            trace: Vec::new(),
            ack_air,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn protocol(&self, a: Address) -> &Protocol {
        &self.nodes[a.index()].protocol
    }

    pub fn adhop(&self, a: Address) -> Option<&AdhopNode> {
        match &self.nodes.get(a.index())?.protocol {
            Protocol::Adhop(p) => Some(p),
            Protocol::Aodv(_) => None,
        }
    }

    pub fn adhop_mut(&mut self, a: Address) -> Option<&mut AdhopNode> {
        match &mut self.nodes.get_mut(a.index())?.protocol {
            Protocol::Adhop(p) => Some(p),
            Protocol::Aodv(_) => None,
        }
    }

    pub fn aodv(&self, a: Address) -> Option<&AodvNode> {
        match &self.nodes.get(a.index())?.protocol {
            Protocol::Aodv(p) => Some(p),
            Protocol::Adhop(_) => None,
        }
    }

    pub fn position(&self, a: Address) -> (f64, f64) {
        self.nodes[a.index()].motion.position()
    }

    pub fn is_alive(&self, a: Address) -> bool {
        self.nodes[a.index()].alive
    }

    pub fn battery(&self, a: Address) -> &Battery {
        &self.nodes[a.index()].battery
    }

    pub fn account(&self, a: Address) -> &EnergyAccount {
        &self.nodes[a.index()].account
    }

    /// Processes every event scheduled before `t` (capped at the scenario
    /// duration) and advances the clock to it.
    pub fn run_until(&mut self, t: SimTime) {
        let t = t.min(self.cfg.duration);
        while let Some(at) = self.events.peek_time() {
            if at >= t {
                break;
            }
            let (at, ev) = self.events.pop().expect("peeked");
            self.now = at;
            self.handle(ev);
        }
        self.now = self.now.max(t);
    }

    /// Runs to the end of the scenario, closes the last accounting iteration
    /// and builds the report.
    pub fn finish(mut self) -> RunOutput {
        let end = self.cfg.duration;
        self.run_until(end);
        self.now = end;
        self.accounting(end);
        let report = self.build_report();
        RunOutput {
            report,
            trace: self.trace,
        }
    }

    fn schedule(&mut self, at: SimTime, ev: Event) {
        if at < self.cfg.duration {
            self.events.push(at, ev);
        }
    }

    fn log(&mut self, node: Address, kind: &str, detail: core::fmt::Arguments<'_>) {
        if self.cfg.trace {
            self.trace
                .push(format!("{} {} {} {}", self.now, node, kind, detail));
        }
    }

    fn handle(&mut self, ev: Event) {
        let now = self.now;
        match ev {
            Event::AppSend { flow } => self.app_send(flow),
            Event::TxStart(i) => self.tx_start(i),
            Event::TxDone { node, acked } => self.tx_done(node, acked),
            Event::Arrival { node, from, packet } => self.arrival(node, from, packet),
            Event::Timer { node, timer } => {
                if !self.nodes[node].alive {
                    return;
                }
                let actions = match &mut self.nodes[node].protocol {
                    Protocol::Aodv(p) => p.on_timer(timer, now),
                    Protocol::Adhop(_) => Vec::new(),
                };
                self.apply(node, actions);
            }
            Event::Mobility => {
                let step = self.cfg.mobility.step;
                let dt = step.as_secs_f64();
                let (p, area) = (self.cfg.mobility, self.cfg.area_m);
                for n in self.nodes.iter_mut().filter(|n| n.alive) {
                    mobility_step(&mut n.motion, dt, &p, area, &mut n.mobility_rng);
                }
                self.schedule(now + step, Event::Mobility);
            }
            Event::Evaporation => {
                for n in self.nodes.iter_mut().filter(|n| n.alive) {
                    if let Protocol::Adhop(p) = &mut n.protocol {
                        p.evaporate(now);
                    }
                }
                self.schedule(now + self.cfg.evaporation_period, Event::Evaporation);
            }
            Event::Accounting => {
                self.accounting(now);
                self.schedule(now + self.cfg.energy.accounting_period, Event::Accounting);
            }
            Event::NeighborSample => {
                self.sample_neighbors();
                self.schedule(now + self.cfg.neighbor_sample_period, Event::NeighborSample);
            }
        }
    }

    fn app_send(&mut self, k: usize) {
        let now = self.now;
        let flow = self.flows[k];
        self.flows[k].sent += 1;
        self.schedule(now + self.cfg.app_interval, Event::AppSend { flow: k });
        let msg_id = ((k as u64) << 32) | flow.sent;
        self.stats.generated += 1;
        let i = flow.source.index();
        if !self.nodes[i].alive {
            self.stats.generation_failures += 1;
            self.log(
                flow.source,
                "gen_fail",
                format_args!("msg={} dst={}", msg_id, flow.sink),
            );
            return;
        }
        let data = AppData {
            msg_id,
            len: self.cfg.app_payload,
        };
        self.stats.payload_len.insert(msg_id, data.len as u64);
        self.log(
            flow.source,
            "gen",
            format_args!("msg={} dst={}", msg_id, flow.sink),
        );
        let actions = match &mut self.nodes[i].protocol {
            Protocol::Adhop(p) => p.send_data(flow.sink, data, now),
            Protocol::Aodv(p) => p.send(flow.sink, data, now),
        };
        self.apply(i, actions);
    }

    fn apply(&mut self, i: usize, actions: Vec<Action>) {
        let addr = self.nodes[i].addr;
        for a in actions {
            match a {
                Action::Unicast { next, packet } => self.enqueue(i, Some(next), packet),
                Action::Broadcast(packet) => self.enqueue(i, None, packet),
                Action::Deliver { source, data } => {
                    if self.stats.delivered.insert(data.msg_id) {
                        self.log(
                            addr,
                            "deliver",
                            format_args!("msg={} src={}", data.msg_id, source),
                        );
                    }
                }
                Action::Drop { reason, data } => self.drop(addr, reason, data),
                Action::Timer { at, timer } => {
                    let at = at.max(self.now);
                    self.schedule(at, Event::Timer { node: i, timer });
                }
            }
        }
    }

    fn drop(&mut self, addr: Address, reason: DropReason, data: Option<AppData>) {
        self.stats.drops[drop_index(reason)] += 1;
        match data {
            Some(d) => self.log(
                addr,
                "drop",
                format_args!("{} msg={}", reason.name(), d.msg_id),
            ),
            None => self.log(addr, "drop", format_args!("{}", reason.name())),
        }
    }

    fn cpu_burst(&mut self, i: usize) {
        let now = self.now;
        let burst = self.cfg.energy.cpu_burst;
        self.nodes[i].cpu.commit(now, now + burst, Mode::CpuActive);
    }

    fn enqueue(&mut self, i: usize, dest: Option<Address>, packet: Packet) {
        if !self.nodes[i].alive {
            return;
        }
        self.cpu_burst(i);
        if self.nodes[i].queue.len() >= self.cfg.mac.queue_capacity {
            let addr = self.nodes[i].addr;
            self.drop(addr, DropReason::BufferOverflow, packet.data());
            return;
        }
        self.nodes[i].queue.push_back(Frame {
            dest,
            packet,
            attempts: 0,
        });
        self.kick(i);
    }

    // Makes sure a TxStart is pending if the node has something to send.
    fn kick(&mut self, i: usize) {
        let n = &mut self.nodes[i];
        if n.in_flight.is_some() || n.tx_scheduled || n.queue.is_empty() {
            return;
        }
        n.tx_scheduled = true;
        let at = n.radio.busy_until().map_or(self.now, |b| b.max(self.now));
        self.events.push(at, Event::TxStart(i));
    }

    fn tx_start(&mut self, i: usize) {
        let now = self.now;
        let n = &mut self.nodes[i];
        n.tx_scheduled = false;
        if !n.alive || n.in_flight.is_some() {
            return;
        }
        if let Some(b) = n.radio.busy_until() {
            if b > now {
                n.tx_scheduled = true;
                self.events.push(b, Event::TxStart(i));
                return;
            }
        }
        if let Some(frame) = n.queue.pop_front() {
            self.transmit(i, frame);
        }
    }

    fn transmit(&mut self, i: usize, frame: Frame) {
        let now = self.now;
        let layout = self.cfg.layout;
        let len = layout.frame_len(&frame.packet);
        let air = airtime(len, self.cfg.channel.bitrate_bps);
        let end = now + air;
        let ack_window = self.cfg.mac.ack_window;
        let src = self.nodes[i].addr;
        let pos = self.nodes[i].motion.position();

        let committed = self.nodes[i].radio.commit(now, end, Mode::RadioTx);
        debug_assert!(committed, "transmitting over a committed radio");
        self.nodes[i]
            .account
            .record_event(Device::Radio, EnergyEvent::FrameTx);
        self.nodes[i].frames_sent += 1;
        self.count_tx(&frame.packet, len, air);
        let range_sq = self.range * self.range;
        let overhearing = self.cfg.mac.overhearing;
        let loss = self.cfg.channel.loss_probability;
        let mut acked = false;
        let mut outcome = "oor";
        for j in 0..self.nodes.len() {
            if j == i {
                continue;
            }
            let addressed = frame.dest.is_none_or(|d| d.index() == j);
            if !addressed && !overhearing {
                continue;
            }
            let r = &mut self.nodes[j];
            if !r.alive || distance_sq(pos, r.motion.position()) > range_sq {
                continue;
            }
            if !r.radio.commit(now, end, Mode::RadioRx) {
                outcome = "busy";
                continue;
            }
            if !addressed {
                continue;
            }
            let lost = loss > 0.0 && r.loss_rng.random::<f64>() < loss;
            if lost {
                outcome = "lost";
                continue;
            }
            outcome = "noack";
            if frame.dest.is_some() {
                let ack_end = end + ack_window;
                let ack_start = ack_end.saturating_sub(self.ack_air).max(end);
                if r.radio.is_free(ack_start, ack_end) {
                    r.radio.commit(ack_start, ack_end, Mode::RadioTx);
                    self.stats.ack_frames += 1;
                    self.stats.tx_airtime += ack_end - ack_start;
                    acked = true;
                    outcome = "ok";
                }
            }
            self.events.push(
                end,
                Event::Arrival {
                    node: j,
                    from: src,
                    packet: frame.packet.clone(),
                },
            );
        }

        let kind = frame.packet.kind();
        match frame.dest {
            Some(d) => self.log(
                src,
                "tx",
                format_args!(
                    "{}->{} len={} try={} {}",
                    kind.name(),
                    d,
                    len,
                    frame.attempts,
                    outcome
                ),
            ),
            None => self.log(src, "tx", format_args!("{}->* len={}", kind.name(), len)),
        }
        let done_at = if frame.dest.is_some() {
            self.nodes[i]
                .radio
                .commit(end, end + ack_window, Mode::RadioRx);
            end + ack_window
        } else {
            acked = true;
            end
        };
        self.nodes[i].in_flight = Some(frame);
        self.events.push(done_at, Event::TxDone { node: i, acked });
    }

    fn count_tx(&mut self, packet: &Packet, len: u16, air: SimTime) {
        let s = &mut self.stats;
        let k = packet.kind().idx();
        s.frames_by_kind[k] += 1;
        s.bytes_by_kind[k] += len as u64;
        s.total_bytes += len as u64;
        s.tx_airtime += air;
        match packet.data() {
            Some(d) => {
                s.data_header_bytes += (len - d.len) as u64;
                *s.payload_tx.entry(d.msg_id).or_insert(0) += d.len as u64;
            }
            None => s.payloadless_bytes += len as u64,
        }
    }

    fn tx_done(&mut self, i: usize, acked: bool) {
        let now = self.now;
        if !self.nodes[i].alive {
            return;
        }
        let Some(mut frame) = self.nodes[i].in_flight.take() else {
            return;
        };
        let addr = self.nodes[i].addr;
        if !acked {
            frame.attempts += 1;
            if frame.attempts <= self.cfg.mac.retries {
                self.nodes[i].queue.push_front(frame);
            } else {
                let next = frame.dest.expect("only unicast frames go unacknowledged");
                self.log(
                    addr,
                    "link_fail",
                    format_args!("{}->{}", frame.packet.kind().name(), next),
                );
                let actions = match &mut self.nodes[i].protocol {
                    Protocol::Adhop(p) => p.on_link_failure(next, frame.packet, now),
                    Protocol::Aodv(p) => p.on_link_failure(next, frame.packet, now),
                };
                self.apply(i, actions);
            }
        }
        self.kick(i);
    }

    fn arrival(&mut self, j: usize, from: Address, packet: Packet) {
        let now = self.now;
        if !self.nodes[j].alive {
            return;
        }
        self.cpu_burst(j);
        let n = &mut self.nodes[j];
        n.account.record_event(Device::Radio, EnergyEvent::FrameRx);
        n.frames_received += 1;
        let addr = n.addr;
        self.log(
            addr,
            "rx",
            format_args!("{}<-{}", packet.kind().name(), from),
        );
        let actions = match (&mut self.nodes[j].protocol, packet) {
            (Protocol::Adhop(p), Packet::Ant { ant, data }) => p.on_receive(ant, data, now),
            (Protocol::Aodv(p), Packet::Aodv(m)) => p.on_receive(m, from, now),
            (_, other) => alloc::vec![Action::Drop {
                reason: DropReason::Malformed,
                data: other.data()
            }],
        };
        self.apply(j, actions);
    }

    fn accounting(&mut self, now: SimTime) {
        let kind = self.cfg.protocol.heuristic();
        for i in 0..self.nodes.len() {
            let n = &mut self.nodes[i];
            if !n.alive {
                continue;
            }
            n.radio.settle(&mut n.account, now);
            n.cpu.settle(&mut n.account, now);
            let out = n.account.accounting_tick(&mut n.battery, now);
            n.consumed += out.deducted;
            if out.depleted {
                self.die(i, now);
                continue;
            }
            let h = match kind {
                HeuristicKind::None => HeuristicValue::ONE,
                HeuristicKind::Battery => battery_charge_h(n.battery.remaining, n.battery.capacity),
                HeuristicKind::Lifetime => n
                    .estimator
                    .heuristic(n.battery.remaining, now.as_secs_f64()),
            };
            if let Protocol::Adhop(p) = &mut n.protocol {
                p.set_heuristic(h);
            }
        }
    }

    fn die(&mut self, i: usize, now: SimTime) {
        let n = &mut self.nodes[i];
        n.alive = false;
        n.death = Some(now);
        n.queue.clear();
        n.in_flight = None;
        n.radio.clear();
        n.cpu.clear();
        let (addr, consumed) = (n.addr, n.consumed);
        self.log(addr, "death", format_args!("consumed={:.6}", consumed));
    }

    fn sample_neighbors(&mut self) {
        let r2 = self.range * self.range;
        let alive: Vec<(f64, f64)> = self
            .nodes
            .iter()
            .filter(|n| n.alive)
            .map(|n| n.motion.position())
            .collect();
        for (a, pa) in alive.iter().enumerate() {
            let deg = alive
                .iter()
                .enumerate()
                .filter(|&(b, pb)| b != a && distance_sq(*pa, *pb) <= r2)
                .count();
            self.stats.neighbor_sum += deg as u64;
        }
        self.stats.neighbor_samples += alive.len() as u64;
    }

    fn build_report(&self) -> MetricsReport {
        let s = &self.stats;
        let mut r = MetricsReport::empty(self.cfg.seed, self.cfg.protocol);
        r.routers = self.cfg.routers;
        r.node_count = self.nodes.len();
        r.duration = self.cfg.duration;
        r.battery_j = self.cfg.energy.battery_j;
        r.generated = s.generated;
        r.generation_failures = s.generation_failures;
        r.delivered = s.delivered.len() as u64;
        r.frames_by_kind = s.frames_by_kind;
        r.bytes_by_kind = s.bytes_by_kind;
        r.ack_frames = s.ack_frames;
        r.tx_airtime = s.tx_airtime;
        r.drops = s.drops;
        r.total_bytes = s.total_bytes;
        r.data_header_bytes = s.data_header_bytes;
        let mut redundant = 0;
        for (msg, &bytes) in &s.payload_tx {
            if s.delivered.contains(msg) {
                let one = s.payload_len.get(msg).copied().unwrap_or(0);
                r.useful_bytes += one;
                redundant += bytes - one;
            } else {
                r.undelivered_payload_bytes += bytes;
            }
        }
        r.control_bytes = s.payloadless_bytes + redundant;
        r.mean_neighbors = if s.neighbor_samples == 0 {
            0.0
        } else {
            s.neighbor_sum as f64 / s.neighbor_samples as f64
        };
        r.nodes = self
            .nodes
            .iter()
            .map(|n| NodeReport {
                role: n.role,
                consumed_j: n.consumed,
                remaining_j: n.battery.remaining,
                death: n.death,
                frames_sent: n.frames_sent,
                frames_received: n.frames_received,
                radio_tx_time: n.account.time_in_mode(Mode::RadioTx),
                radio_rx_time: n.account.time_in_mode(Mode::RadioRx),
                e_tot_sum: n.account.e_tot_sum(),
            })
            .collect();
        r
    }
}
