use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::codec::{Ant, AntType};
use crate::dedupe::DedupeCache;
use crate::heuristics::HeuristicValue;
use crate::pheromone::{PheromoneParams, RoutingTable};
use crate::routing::{Action, AppData, DropReason, Packet};
use crate::time::SimTime;
use crate::Address;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdhopConfig {
    pub pheromone: PheromoneParams,
    pub ttl: u8,
    pub dedupe_capacity: usize,
    pub dedupe_age: SimTime,
    /// How long a node remembers where a forward ant came from.
    pub pending_expiry: SimTime,
}

impl Default for AdhopConfig {
    fn default() -> Self {
        Self {
            pheromone: PheromoneParams::default(),
            ttl: 32,
            dedupe_capacity: 256,
            dedupe_age: SimTime::from_secs(30),
            pending_expiry: SimTime::from_secs(10),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct PendingReturn {
    neighbor: Address,
    expires: SimTime,
}

/// One node's ADHOP instance.
#[derive(Debug, Clone)]
pub struct AdhopNode {
    addr: Address,
    cfg: AdhopConfig,
    table: RoutingTable,
    seen: DedupeCache,
    pending: BTreeMap<(Address, u32), PendingReturn>,
    next_seq: u32,
    heuristic: HeuristicValue,
}

impl AdhopNode {
    pub fn new(addr: Address, cfg: AdhopConfig) -> Self {
        Self {
            addr,
            cfg,
            table: RoutingTable::new(addr, cfg.pheromone),
            seen: DedupeCache::new(cfg.dedupe_capacity, cfg.dedupe_age),
            pending: BTreeMap::new(),
            next_seq: 0,
            heuristic: HeuristicValue::ONE,
        }
    }

    pub fn address(&self) -> Address {
        self.addr
    }

    pub fn table(&self) -> &RoutingTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut RoutingTable {
        &mut self.table
    }

    pub fn heuristic(&self) -> HeuristicValue {
        self.heuristic
    }

    /// The value stamped into every ant this node sends or forwards.
    pub fn set_heuristic(&mut self, h: HeuristicValue) {
        self.heuristic = h;
    }

    pub fn pending_returns(&self) -> usize {
        self.pending.len()
    }

    /// Originates a data message: FTA on a known route, ETA flood otherwise.
    pub fn send_data(&mut self, dst: Address, data: AppData, now: SimTime) -> Vec<Action> {
        let seq = self.next_seq;
        self.next_seq = self.next_seq.wrapping_add(1);
        self.seen.insert((self.addr, seq), now);
        let mut ant = Ant {
            ant_type: AntType::Fta,
            hops: 0,
            source: self.addr,
            destination: dst,
            previous: self.addr,
            sequence_no: seq,
            heuristic: self.heuristic,
        };
        if dst == self.addr {
            return vec![Action::Deliver {
                source: self.addr,
                data,
            }];
        }
        match self.table.lookup(dst) {
            Some(e) => {
                let next = e.neighbor;
                vec![Action::Unicast {
                    next,
                    packet: Packet::Ant {
                        ant,
                        data: Some(data),
                    },
                }]
            }
            None => {
                ant.ant_type = AntType::Eta;
                vec![Action::Broadcast(Packet::Ant {
                    ant,
                    data: Some(data),
                })]
            }
        }
    }

    pub fn on_receive(&mut self, ant: Ant, data: Option<AppData>, now: SimTime) -> Vec<Action> {
        if ant.previous == self.addr {
            return vec![Action::Drop {
                reason: DropReason::Malformed,
                data,
            }];
        }
        match ant.ant_type {
            AntType::Fta => self.on_receive_fta(ant, data, now),
            AntType::Eta => self.on_receive_eta(ant, data, now),
            AntType::Backward => self.on_receive_backward(ant, now),
        }
    }

    pub fn on_receive_fta(&mut self, ant: Ant, data: Option<AppData>, now: SimTime) -> Vec<Action> {
        self.on_forward_ant(ant, data, now)
    }

    pub fn on_receive_eta(&mut self, ant: Ant, data: Option<AppData>, now: SimTime) -> Vec<Action> {
        self.on_forward_ant(ant, data, now)
    }

    // FTA and ETA share every step except how the ant is passed on when no
    // route is known, and both end up there the same way: as an ETA.
    fn on_forward_ant(&mut self, ant: Ant, data: Option<AppData>, now: SimTime) -> Vec<Action> {
        let key = (ant.source, ant.sequence_no);
        if ant.source == self.addr || !self.seen.insert(key, now) {
            return vec![Action::Drop {
                reason: DropReason::Duplicate,
                data,
            }];
        }
        self.table
            .reinforce(ant.source, ant.previous, ant.heuristic, now);
        self.pending.entry(key).or_insert(PendingReturn {
            neighbor: ant.previous,
            expires: now + self.cfg.pending_expiry,
        });

        if ant.destination == self.addr {
            let mut out = Vec::with_capacity(2);
            if let Some(d) = data {
                out.push(Action::Deliver {
                    source: ant.source,
                    data: d,
                });
            }
            let back = Ant {
                ant_type: AntType::Backward,
                hops: 0,
                source: self.addr,
                destination: ant.source,
                previous: self.addr,
                sequence_no: ant.sequence_no,
                heuristic: self.heuristic,
            };
            self.pending.remove(&key);
            out.push(Action::Unicast {
                next: ant.previous,
                packet: Packet::Ant {
                    ant: back,
                    data: None,
                },
            });
            return out;
        }

        if ant.hops >= self.cfg.ttl {
            return vec![Action::Drop {
                reason: DropReason::TtlExceeded,
                data,
            }];
        }
        let fwd = Ant {
            hops: ant.hops + 1,
            previous: self.addr,
            heuristic: self.heuristic,
            ..ant
        };
        vec![self.route_forward(fwd, data, Some(ant.previous))]
    }

    // Unicast over the best entry not leading straight back, else flood.
    fn route_forward(
        &self,
        mut ant: Ant,
        data: Option<AppData>,
        came_from: Option<Address>,
    ) -> Action {
        let next = self
            .table
            .bucket(self.table.bucket_of(ant.destination))
            .iter()
            .find(|e| e.destination == ant.destination && Some(e.neighbor) != came_from)
            .map(|e| e.neighbor);
        match next {
            Some(next) => {
                ant.ant_type = AntType::Fta;
                Action::Unicast {
                    next,
                    packet: Packet::Ant { ant, data },
                }
            }
            None => {
                ant.ant_type = AntType::Eta;
                Action::Broadcast(Packet::Ant { ant, data })
            }
        }
    }

    pub fn on_receive_backward(&mut self, ant: Ant, now: SimTime) -> Vec<Action> {
        self.table
            .reinforce(ant.source, ant.previous, ant.heuristic, now);
        if ant.destination == self.addr {
            return Vec::new();
        }
        let key = (ant.destination, ant.sequence_no);
        let rec = match self.pending.remove(&key) {
            Some(r) if r.expires >= now => r,
            _ => {
                return vec![Action::Drop {
                    reason: DropReason::NoPendingReturn,
                    data: None,
                }]
            }
        };
        if ant.hops >= self.cfg.ttl {
            return vec![Action::Drop {
                reason: DropReason::TtlExceeded,
                data: None,
            }];
        }
        let back = Ant {
            hops: ant.hops + 1,
            previous: self.addr,
            heuristic: self.heuristic,
            ..ant
        };
        vec![Action::Unicast {
            next: rec.neighbor,
            packet: Packet::Ant {
                ant: back,
                data: None,
            },
        }]
    }

    /// The MAC gave up on `next`. The link is dropped from the table; a
    /// forward ant is re-routed or turned into an ETA, a backward ant is lost.
    pub fn on_link_failure(&mut self, next: Address, packet: Packet, _now: SimTime) -> Vec<Action> {
        let Packet::Ant { ant, data } = packet else {
            return Vec::new();
        };
        self.table.remove(ant.destination, next);
        match ant.ant_type {
            AntType::Fta => {
                let came_from = self
                    .pending
                    .get(&(ant.source, ant.sequence_no))
                    .map(|r| r.neighbor);
                vec![self.route_forward(ant, data, came_from)]
            }
            AntType::Eta => Vec::new(),
            AntType::Backward => vec![Action::Drop {
                reason: DropReason::LinkFailure,
                data: None,
            }],
        }
    }

    /// Periodic evaporation. Returns the number of purged routes.
    pub fn evaporate(&mut self, now: SimTime) -> usize {
        self.pending.retain(|_, r| r.expires >= now);
        self.table.evaporate_all(now)
    }
}
