use alloc::collections::{BTreeSet, VecDeque};

use crate::time::SimTime;
use crate::Address;

/// Bounded set of `(origin, sequence)` pairs, evicted oldest first by count
/// or by age.
#[derive(Debug, Clone)]
pub(crate) struct DedupeCache {
    capacity: usize,
    max_age: SimTime,
    order: VecDeque<((Address, u32), SimTime)>,
    seen: BTreeSet<(Address, u32)>,
}

impl DedupeCache {
    pub(crate) fn new(capacity: usize, max_age: SimTime) -> Self {
        Self {
            capacity: capacity.max(1),
            max_age,
            order: VecDeque::new(),
            seen: BTreeSet::new(),
        }
    }

    fn evict(&mut self, now: SimTime) {
        while let Some(&(key, at)) = self.order.front() {
            if self.order.len() > self.capacity || now.saturating_sub(at) > self.max_age {
                self.order.pop_front();
                self.seen.remove(&key);
            } else {
                break;
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn contains(&mut self, key: (Address, u32), now: SimTime) -> bool {
        self.evict(now);
        self.seen.contains(&key)
    }

    /// Returns `false` if the key was already present.
    pub(crate) fn insert(&mut self, key: (Address, u32), now: SimTime) -> bool {
        self.evict(now);
        if !self.seen.insert(key) {
            return false;
        }
        self.order.push_back((key, now));
        self.evict(now);
        true
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.seen.len()
    }
}
