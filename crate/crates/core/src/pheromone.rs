//! Pheromone arithmetic and the hash-bucketed routing table.
//!
//! The table maps a destination to a bucket (`destination % buckets`). Each
//! bucket is one list holding entries for every destination that hashes to
//! it, kept sorted by pheromone so that a lookup returns the first entry that
//! matches the destination.

use alloc::vec::Vec;

use crate::heuristics::{HeuristicValue, Modulation};
use crate::time::SimTime;
use crate::Address;

/// Pull `tau` toward `tau_0` by `phi_eff`, then clamp into `[0, tau_max]`.
pub fn deposit(tau: f64, phi_eff: f64, tau_0: f64, tau_max: f64) -> f64 {
    ((1.0 - phi_eff) * tau + phi_eff * tau_0).clamp(0.0, tau_max)
}

/// Scale `tau` by `1 - rho_eff`.
pub fn evaporate(tau: f64, rho_eff: f64) -> f64 {
    (1.0 - rho_eff) * tau
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PheromoneParams {
    pub phi_base: f64,
    pub rho_base: f64,
    /// Pheromone of a freshly inserted entry, before its first deposit.
    pub tau_init: f64,
    /// Target of the deposit rule.
    pub tau_0: f64,
    /// Entries below this are purged on evaporation.
    pub tau_min: f64,
    pub tau_max: f64,
    pub kappa: f64,
    pub buckets: usize,
}

impl Default for PheromoneParams {
    fn default() -> Self {
        Self {
            phi_base: 0.5,
            rho_base: 0.1,
            tau_init: 50.0,
            tau_0: 100.0,
            tau_min: 1.0,
            tau_max: 200.0,
            kappa: 0.5,
            buckets: 16,
        }
    }
}

impl PheromoneParams {
    pub fn modulation(&self) -> Modulation {
        Modulation {
            phi_base: self.phi_base,
            rho_base: self.rho_base,
            kappa: self.kappa,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteEntry {
    pub destination: Address,
    /// Next hop.
    pub neighbor: Address,
    pub pheromone: f64,
    /// Heuristic most recently reported over this link.
    pub last_heuristic: HeuristicValue,
    pub last_update: SimTime,
    // insertion stamp, breaks pheromone ties in favour of older entries
    order: u64,
}

#[derive(Debug, Clone)]
pub struct RoutingTable {
    owner: Address,
    params: PheromoneParams,
    buckets: Vec<Vec<RouteEntry>>,
    next_order: u64,
}

impl RoutingTable {
    pub fn new(owner: Address, params: PheromoneParams) -> Self {
        let n = params.buckets.max(1);
        Self {
            owner,
            params,
            buckets: (0..n).map(|_| Vec::new()).collect(),
            next_order: 0,
        }
    }

    pub fn params(&self) -> &PheromoneParams {
        &self.params
    }

    pub fn owner(&self) -> Address {
        self.owner
    }

    /// Bucket index for a destination.
    pub fn bucket_of(&self, dst: Address) -> usize {
        dst.index() % self.buckets.len()
    }

    pub fn bucket(&self, key: usize) -> &[RouteEntry] {
        &self.buckets[key]
    }

    pub fn len(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.iter().all(Vec::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RouteEntry> {
        self.buckets.iter().flatten()
    }

    /// Best next hop for `dst`: the first matching entry of its bucket.
    pub fn lookup(&self, dst: Address) -> Option<&RouteEntry> {
        self.buckets[self.bucket_of(dst)]
            .iter()
            .find(|e| e.destination == dst)
    }

    pub fn get(&self, dst: Address, neighbor: Address) -> Option<&RouteEntry> {
        self.buckets[self.bucket_of(dst)]
            .iter()
            .find(|e| e.destination == dst && e.neighbor == neighbor)
    }

    /// Deposit on `(dst, neighbor)`, inserting the entry at `tau_init` first
    /// if it does not exist yet.
    pub fn reinforce(&mut self, dst: Address, neighbor: Address, h: HeuristicValue, now: SimTime) {
        if neighbor == self.owner || dst == self.owner {
            return;
        }
        let p = self.params;
        let phi = p.modulation().phi_eff(h);
        let key = self.bucket_of(dst);
        let bucket = &mut self.buckets[key];
        match bucket
            .iter_mut()
            .find(|e| e.destination == dst && e.neighbor == neighbor)
        {
            Some(e) => {
                e.pheromone = deposit(e.pheromone, phi, p.tau_0, p.tau_max);
                e.last_heuristic = h;
                e.last_update = now;
            }
            None => {
                let order = self.next_order;
                self.next_order += 1;
                bucket.push(RouteEntry {
                    destination: dst,
                    neighbor,
                    pheromone: deposit(p.tau_init, phi, p.tau_0, p.tau_max),
                    last_heuristic: h,
                    last_update: now,
                    order,
                });
            }
        }
        sort_bucket(bucket);
    }

    /// One evaporation step over every entry. Returns the number of entries
    /// purged for falling below `tau_min`.
    pub fn evaporate_all(&mut self, _now: SimTime) -> usize {
        let m = self.params.modulation();
        let tau_min = self.params.tau_min;
        let mut purged = 0;
        for bucket in &mut self.buckets {
            for e in bucket.iter_mut() {
                e.pheromone = evaporate(e.pheromone, m.rho_eff(e.last_heuristic));
            }
            let before = bucket.len();
            bucket.retain(|e| e.pheromone >= tau_min);
            purged += before - bucket.len();
            sort_bucket(bucket);
        }
        purged
    }

    /// Drops `(dst, neighbor)`, e.g. after the link failed at the MAC layer.
    pub fn remove(&mut self, dst: Address, neighbor: Address) -> bool {
        let key = self.bucket_of(dst);
        let bucket = &mut self.buckets[key];
        let before = bucket.len();
        bucket.retain(|e| !(e.destination == dst && e.neighbor == neighbor));
        before != bucket.len()
    }
}

fn sort_bucket(bucket: &mut [RouteEntry]) {
    bucket.sort_by(|a, b| {
        b.pheromone
            .total_cmp(&a.pheromone)
            .then(a.order.cmp(&b.order))
    });
}
