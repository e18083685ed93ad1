//! AODVjr baseline.
//!
//! Route requests are flooded, only the destination answers, and routes
//! expire after a period without use. There are no sequence numbers, no
//! HELLO messages and no route errors: a broken link is only noticed by the
//! node whose MAC transmission failed.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::dedupe::DedupeCache;
use crate::routing::{Action, AppData, DropReason, Packet, Timer};
use crate::time::SimTime;
use crate::Address;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AodvMessage {
    Rreq {
        id: u32,
        origin: Address,
        destination: Address,
        hops: u8,
    },
    Rrep {
        origin: Address,
        destination: Address,
    },
    Data {
        source: Address,
        destination: Address,
        hops: u8,
        data: AppData,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AodvConfig {
    pub route_timeout: SimTime,
    /// Extra floods after the first one before buffered data is given up.
    pub rreq_retries: u8,
    pub rreq_spacing: SimTime,
    pub buffer_capacity: usize,
    pub ttl: u8,
    pub dedupe_capacity: usize,
    pub dedupe_age: SimTime,
}

impl Default for AodvConfig {
    fn default() -> Self {
        Self {
            route_timeout: SimTime::from_secs(10),
            rreq_retries: 3,
            rreq_spacing: SimTime::from_secs(2),
            buffer_capacity: 8,
            ttl: 32,
            dedupe_capacity: 256,
            dedupe_age: SimTime::from_secs(30),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AodvRouteEntry {
    pub destination: Address,
    pub next_hop: Address,
    pub last_used: SimTime,
}

#[derive(Debug, Clone)]
pub struct AodvNode {
    addr: Address,
    cfg: AodvConfig,
    routes: BTreeMap<Address, AodvRouteEntry>,
    seen: DedupeCache,
    buffer: VecDeque<(Address, AppData)>,
    // destination -> floods sent so far
    discoveries: BTreeMap<Address, u8>,
    next_rreq_id: u32,
}

impl AodvNode {
    pub fn new(addr: Address, cfg: AodvConfig) -> Self {
        Self {
            addr,
            cfg,
            routes: BTreeMap::new(),
            seen: DedupeCache::new(cfg.dedupe_capacity, cfg.dedupe_age),
            buffer: VecDeque::new(),
            discoveries: BTreeMap::new(),
            next_rreq_id: 0,
        }
    }

    pub fn address(&self) -> Address {
        self.addr
    }

    /// A route that has not timed out.
    pub fn route(&mut self, dst: Address, now: SimTime) -> Option<AodvRouteEntry> {
        match self.routes.get(&dst) {
            Some(e) if now.saturating_sub(e.last_used) <= self.cfg.route_timeout => Some(*e),
            Some(_) => {
                self.routes.remove(&dst);
                None
            }
            None => None,
        }
    }

    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    fn learn(&mut self, dst: Address, next_hop: Address, now: SimTime) {
        if dst != self.addr {
            self.routes.insert(
                dst,
                AodvRouteEntry {
                    destination: dst,
                    next_hop,
                    last_used: now,
                },
            );
        }
    }

    // Unicast over a live route, refreshing it.
    fn use_route(&mut self, dst: Address, now: SimTime) -> Option<Address> {
        let e = self.route(dst, now)?;
        if let Some(r) = self.routes.get_mut(&dst) {
            r.last_used = now;
        }
        Some(e.next_hop)
    }

    pub fn send(&mut self, dst: Address, data: AppData, now: SimTime) -> Vec<Action> {
        if dst == self.addr {
            return vec![Action::Deliver {
                source: self.addr,
                data,
            }];
        }
        if let Some(next) = self.use_route(dst, now) {
            let msg = AodvMessage::Data {
                source: self.addr,
                destination: dst,
                hops: 0,
                data,
            };
            return vec![Action::Unicast {
                next,
                packet: Packet::Aodv(msg),
            }];
        }
        self.enqueue(dst, data, now)
    }

    fn enqueue(&mut self, dst: Address, data: AppData, now: SimTime) -> Vec<Action> {
        let mut out = Vec::new();
        if self.buffer.len() >= self.cfg.buffer_capacity {
            if let Some((_, old)) = self.buffer.pop_front() {
                out.push(Action::Drop {
                    reason: DropReason::BufferOverflow,
                    data: Some(old),
                });
            }
        }
        self.buffer.push_back((dst, data));
        if let alloc::collections::btree_map::Entry::Vacant(e) = self.discoveries.entry(dst) {
            e.insert(0);
            out.extend(self.flood(dst, now));
        }
        out
    }

    fn flood(&mut self, dst: Address, now: SimTime) -> Vec<Action> {
        let id = self.next_rreq_id;
        self.next_rreq_id = self.next_rreq_id.wrapping_add(1);
        self.seen.insert((self.addr, id), now);
        if let Some(n) = self.discoveries.get_mut(&dst) {
            *n += 1;
        }
        let rreq = AodvMessage::Rreq {
            id,
            origin: self.addr,
            destination: dst,
            hops: 0,
        };
        vec![
            Action::Broadcast(Packet::Aodv(rreq)),
            Action::Timer {
                at: now + self.cfg.rreq_spacing,
                timer: Timer::RreqRetry(dst),
            },
        ]
    }

    fn flush(&mut self, dst: Address, now: SimTime) -> Vec<Action> {
        let mut out = Vec::new();
        let mut keep = VecDeque::with_capacity(self.buffer.len());
        for (d, data) in core::mem::take(&mut self.buffer) {
            if d != dst {
                keep.push_back((d, data));
                continue;
            }
            match self.use_route(dst, now) {
                Some(next) => {
                    let msg = AodvMessage::Data {
                        source: self.addr,
                        destination: dst,
                        hops: 0,
                        data,
                    };
                    out.push(Action::Unicast {
                        next,
                        packet: Packet::Aodv(msg),
                    });
                }
                None => keep.push_back((d, data)),
            }
        }
        self.buffer = keep;
        out
    }

    pub fn on_timer(&mut self, timer: Timer, now: SimTime) -> Vec<Action> {
        let Timer::RreqRetry(dst) = timer;
        let Some(&sent) = self.discoveries.get(&dst) else {
            return Vec::new();
        };
        if self.route(dst, now).is_some() {
            self.discoveries.remove(&dst);
            return self.flush(dst, now);
        }
        if sent <= self.cfg.rreq_retries {
            return self.flood(dst, now);
        }
        self.discoveries.remove(&dst);
        let mut out = Vec::new();
        self.buffer.retain(|&(d, data)| {
            if d == dst {
                out.push(Action::Drop {
                    reason: DropReason::DiscoveryFailed,
                    data: Some(data),
                });
                false
            } else {
                true
            }
        });
        out
    }

    /// `from` is the MAC-level sender of the frame.
    pub fn on_receive(&mut self, msg: AodvMessage, from: Address, now: SimTime) -> Vec<Action> {
        match msg {
            AodvMessage::Rreq {
                id,
                origin,
                destination,
                hops,
            } => {
                if origin == self.addr || !self.seen.insert((origin, id), now) {
                    return vec![Action::Drop {
                        reason: DropReason::Duplicate,
                        data: None,
                    }];
                }
                self.learn(origin, from, now);
                if destination == self.addr {
                    let rrep = AodvMessage::Rrep {
                        origin,
                        destination,
                    };
                    return vec![Action::Unicast {
                        next: from,
                        packet: Packet::Aodv(rrep),
                    }];
                }
                if hops.saturating_add(1) >= self.cfg.ttl {
                    return vec![Action::Drop {
                        reason: DropReason::TtlExceeded,
                        data: None,
                    }];
                }
                let fwd = AodvMessage::Rreq {
                    id,
                    origin,
                    destination,
                    hops: hops + 1,
                };
                vec![Action::Broadcast(Packet::Aodv(fwd))]
            }
            AodvMessage::Rrep {
                origin,
                destination,
            } => {
                self.learn(destination, from, now);
                if origin == self.addr {
                    self.discoveries.remove(&destination);
                    return self.flush(destination, now);
                }
                match self.use_route(origin, now) {
                    Some(next) => vec![Action::Unicast {
                        next,
                        packet: Packet::Aodv(msg),
                    }],
                    None => vec![Action::Drop {
                        reason: DropReason::NoRoute,
                        data: None,
                    }],
                }
            }
            AodvMessage::Data {
                source,
                destination,
                hops,
                data,
            } => {
                if destination == self.addr {
                    return vec![Action::Deliver { source, data }];
                }
                if hops.saturating_add(1) >= self.cfg.ttl {
                    return vec![Action::Drop {
                        reason: DropReason::TtlExceeded,
                        data: Some(data),
                    }];
                }
                match self.use_route(destination, now) {
                    Some(next) => {
                        let fwd = AodvMessage::Data {
                            source,
                            destination,
                            hops: hops + 1,
                            data,
                        };
                        vec![Action::Unicast {
                            next,
                            packet: Packet::Aodv(fwd),
                        }]
                    }
                    None => vec![Action::Drop {
                        reason: DropReason::NoRoute,
                        data: Some(data),
                    }],
                }
            }
        }
    }

    /// The MAC gave up on `next`. The route through it is forgotten; data at
    /// its origin is buffered for a fresh discovery, elsewhere it is lost.
    pub fn on_link_failure(&mut self, next: Address, packet: Packet, now: SimTime) -> Vec<Action> {
        let Packet::Aodv(msg) = packet else {
            return Vec::new();
        };
        match msg {
            AodvMessage::Data {
                source,
                destination,
                data,
                ..
            } => {
                if self
                    .routes
                    .get(&destination)
                    .is_some_and(|e| e.next_hop == next)
                {
                    self.routes.remove(&destination);
                }
                if source == self.addr {
                    self.enqueue(destination, data, now)
                } else {
                    vec![Action::Drop {
                        reason: DropReason::LinkFailure,
                        data: Some(data),
                    }]
                }
            }
            AodvMessage::Rrep { origin, .. } => {
                if self.routes.get(&origin).is_some_and(|e| e.next_hop == next) {
                    self.routes.remove(&origin);
                }
                vec![Action::Drop {
                    reason: DropReason::LinkFailure,
                    data: None,
                }]
            }
            AodvMessage::Rreq { .. } => Vec::new(),
        }
    }
}
