//! Per-device schedule of committed mode segments.
//!
//! The engine knows at transmission start how long a radio will stay in Tx
//! or Rx, so it commits those intervals ahead of time and charges them to
//! the energy account lazily, in time order, whenever the clock catches up.

use alloc::vec::Vec;

use crate::energy::{Device, EnergyAccount, Mode};
use crate::time::SimTime;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: SimTime,
    pub end: SimTime,
    pub mode: Mode,
}

#[derive(Debug, Clone)]
pub struct Timeline {
    device: Device,
    idle: Mode,
    segments: Vec<Segment>,
}

impl Timeline {
    pub fn new(device: Device, idle: Mode) -> Self {
        Self {
            device,
            idle,
            segments: Vec::new(),
        }
    }

    /// End of the last committed segment, or `None` when nothing is pending.
    pub fn busy_until(&self) -> Option<SimTime> {
        self.segments.last().map(|s| s.end)
    }

    pub fn is_busy_at(&self, t: SimTime) -> bool {
        self.segments.iter().any(|s| s.start <= t && t < s.end)
    }

    fn overlapping(&self, start: SimTime, end: SimTime) -> impl Iterator<Item = &Segment> {
        self.segments
            .iter()
            .filter(move |s| s.start < end && start < s.end)
    }

    /// Whether `[start, end)` is free of any segment.
    pub fn is_free(&self, start: SimTime, end: SimTime) -> bool {
        self.overlapping(start, end).next().is_none()
    }

    /// Whether `mode` can be committed over `[start, end)`: free, or only
    /// overlapping segments of the same mode.
    pub fn accepts(&self, start: SimTime, end: SimTime, mode: Mode) -> bool {
        self.overlapping(start, end).all(|s| s.mode == mode)
    }

    /// Commits `mode` over `[start, end)`, merging with overlapping segments
    /// of the same mode. Returns false and leaves the timeline untouched if
    /// a different mode is already committed there.
    pub fn commit(&mut self, start: SimTime, end: SimTime, mode: Mode) -> bool {
        debug_assert_eq!(mode.device(), self.device);
        if end <= start {
            return true;
        }
        if !self.accepts(start, end, mode) {
            return false;
        }
        let mut seg = Segment { start, end, mode };
        self.segments.retain(|s| {
            let overlaps = s.start < end && start < s.end;
            if overlaps {
                seg.start = seg.start.min(s.start);
                seg.end = seg.end.max(s.end);
            }
            !overlaps
        });
        let pos = self.segments.partition_point(|s| s.start < seg.start);
        self.segments.insert(pos, seg);
        true
    }

    /// Charges every commitment up to `now` to `account`, returning the
    /// device to its idle mode between and after segments.
    pub fn settle(&mut self, account: &mut EnergyAccount, now: SimTime) {
        let mut done = 0;
        for seg in self.segments.iter_mut() {
            if seg.start > now {
                break;
            }
            account.mode_change(self.device, seg.mode, seg.start);
            if seg.end <= now {
                account.mode_change(self.device, self.idle, seg.end);
                done += 1;
            } else {
                seg.start = now;
                break;
            }
        }
        self.segments.drain(..done);
    }

    /// Drops every pending commitment.
    pub fn clear(&mut self) {
        self.segments.clear();
    }
}
