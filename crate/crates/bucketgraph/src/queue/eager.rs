//! Eager bucket queue: per-thread local bins updated the moment a priority
//! changes, a bounded window of future buckets per thread, and the bucket
//! fusion drain that lets a thread keep processing its current-priority bin
//! without a global barrier.
//!
//! Only the owning thread touches its bins between barriers; the cross-thread
//! steps (minimum-priority reduction and the copy into a shared frontier)
//! live in the ordered processing loop, not here.

use std::collections::VecDeque;

use super::{PriorityDir, PriorityState, QueueStats};
use crate::graph::Vid;

/// Queue-wide configuration shared by all workers.
#[derive(Debug)]
pub struct EagerShared {
    pub prio: PriorityState,
    pub window: usize,
    pub fusion_threshold: usize,
}

impl EagerShared {
    pub fn new(prio: PriorityState, window: usize, fusion_threshold: usize) -> EagerShared {
        assert!(window >= 1);
        assert_eq!(
            prio.dir(),
            PriorityDir::LowerFirst,
            "eager queues are lower_first"
        );
        EagerShared {
            prio,
            window,
            fusion_threshold,
        }
    }
}

/// One thread's bins: a window of `window` buckets starting at `base`, plus
/// an overflow list for moves beyond it.
#[derive(Debug)]
pub struct EagerWorker {
    bins: VecDeque<Vec<Vid>>,
    base: u32,
    overflow: Vec<(Vid, u32)>,
    window: usize,
    pub stats: QueueStats,
    pub fused_subrounds: u64,
}

impl EagerWorker {
    pub fn new(window: usize) -> EagerWorker {
        let mut bins = VecDeque::with_capacity(window);
        bins.resize_with(window, Vec::new);
        EagerWorker {
            bins,
            base: 0,
            overflow: Vec::new(),
            window,
            stats: QueueStats::default(),
            fused_subrounds: 0,
        }
    }

    /// Records that `v` now belongs in `bucket`. Called by the owning thread
    /// immediately after a successful priority update.
    #[inline]
    pub fn insert(&mut self, v: Vid, bucket: u32) {
        self.stats.bucket_inserts += 1;
        if bucket < self.base {
            // Updates ahead of the in-flight priority would be inversions.
            debug_assert!(
                false,
                "eager update targets bucket {bucket} before base {}",
                self.base
            );
            self.bins[0].push(v);
            return;
        }
        let slot = (bucket - self.base) as usize;
        if slot < self.window {
            self.bins[slot].push(v);
        } else {
            self.overflow.push((v, bucket));
        }
    }

    /// This thread's proposal for the next global bucket: its smallest
    /// occupied bin, falling back to the overflow when the window is empty.
    pub fn min_bucket(&mut self, prio: &PriorityState) -> Option<u32> {
        for (slot, bin) in self.bins.iter().enumerate() {
            if !bin.is_empty() {
                return Some(self.base + slot as u32);
            }
        }
        if self.overflow.is_empty() {
            return None;
        }
        let before = self.overflow.len();
        self.overflow.retain(|&(v, b)| prio.entry_live(v, b));
        self.stats.stale_filtered += (before - self.overflow.len()) as u64;
        self.overflow.iter().map(|&(_, b)| b).min()
    }

    /// Slides the window forward so slot 0 sits at `bucket` (the global
    /// minimum for this round) and pulls in overflow entries that now fit.
    pub fn rewindow(&mut self, bucket: u32, prio: &PriorityState) {
        debug_assert!(bucket >= self.base, "global priority moved backwards");
        let shift = (bucket - self.base) as usize;
        if shift > 0 {
            for _ in 0..shift.min(self.window) {
                let bin = self.bins.pop_front().expect("window slot");
                debug_assert!(bin.is_empty(), "skipped a non-empty bin");
                self.bins.push_back(bin);
            }
            self.base = bucket;
            if !self.overflow.is_empty() {
                let entries = std::mem::take(&mut self.overflow);
                for (v, b) in entries {
                    if !prio.entry_live(v, b) {
                        self.stats.stale_filtered += 1;
                    } else if b < self.base + self.window as u32 {
                        debug_assert!(b >= self.base);
                        self.bins[(b - self.base) as usize].push(v);
                    } else {
                        self.overflow.push((v, b));
                    }
                }
            }
        }
    }

    /// Takes this thread's bin for `bucket`, already filtered to live entries.
    pub fn take_live(&mut self, bucket: u32, prio: &PriorityState) -> Vec<Vid> {
        debug_assert_eq!(bucket, self.base, "rewindow before taking");
        let mut batch = std::mem::take(&mut self.bins[0]);
        let before = batch.len();
        batch.retain(|&v| prio.entry_live(v, bucket));
        self.stats.stale_filtered += (before - batch.len()) as u64;
        batch
    }

    pub fn current_len(&self) -> usize {
        self.bins[0].len()
    }

    /// Bucket fusion: while the current-priority bin is non-empty and smaller
    /// than `threshold`, swap it out and process it locally instead of going
    /// back through the global round. Oversized bins are left for the shared
    /// frontier so the work gets redistributed. Returns the number of fused
    /// sub-rounds executed.
    pub fn fused_drain<F>(
        &mut self,
        bucket: u32,
        threshold: usize,
        prio: &PriorityState,
        mut process: F,
    ) -> u64
    where
        F: FnMut(&mut EagerWorker, Vid),
    {
        debug_assert_eq!(bucket, self.base);
        let mut rounds = 0u64;
        loop {
            let len = self.bins[0].len();
            if len == 0 || len >= threshold {
                break;
            }
            let batch = std::mem::take(&mut self.bins[0]);
            rounds += 1;
            for v in batch {
                if prio.entry_live(v, bucket) {
                    process(self, v);
                } else {
                    self.stats.stale_filtered += 1;
                }
            }
        }
        self.fused_subrounds += rounds;
        rounds
    }
}
