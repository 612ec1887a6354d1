//! Bucketed priority scheduling: the shared priority vector with its
//! coarsening rule, plus the two queue engines (lazy materialized buckets and
//! eager thread-local bins) built on top of it.
//!
//! Priorities move monotonically in the queue's direction. A vertex may be
//! recorded in several bucket positions over a run; exactly one of them
//! matches its current priority, and dequeue paths re-validate entries
//! against the priority vector instead of erasing old positions.

pub mod eager;
pub mod lazy;

use std::sync::atomic::{AtomicI32, AtomicI64, Ordering};

use crate::graph::Vid;

/// Null priority for `lower_first` queues (the unreachable-distance sentinel).
pub const NULL_PRIORITY: i32 = i32::MAX;

/// Which end of the priority range is processed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorityDir {
    LowerFirst,
    HigherFirst,
}

/// Maps a raw priority value to its bucket id.
#[derive(Debug, Clone, Copy)]
pub enum BucketScale {
    /// `floor(p / delta)` — priority coarsening.
    Linear { delta: u32 },
    /// `floor(log_{1+eps} p)` over positive counts (set cover's cost-per-element
    /// bucketing; stored priorities stay raw counts).
    LogCount { one_plus_eps: f64 },
}

/// Coarsens a priority by an integer factor: `floor(p / delta)`.
#[inline]
pub fn coarsen(p: i32, delta: u32) -> u32 {
    assert!(delta >= 1, "coarsening factor must be >= 1");
    debug_assert!(p >= 0, "priorities are non-negative");
    p as u32 / delta
}

/// How priority writes synchronize. `SingleWriter` is the pull-traversal
/// special case where each destination is owned by one thread, so plain
/// load/store replaces the read-modify-write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    Atomic,
    SingleWriter,
}

/// A buffered bucket move: `vertex` now belongs in `bucket`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketUpdate {
    pub vertex: Vid,
    pub bucket: u32,
}

/// The per-vertex priority vector shared by a queue and the algorithm's
/// update function, together with direction, bucket mapping, and the priority
/// of the bucket currently being processed.
#[derive(Debug)]
pub struct PriorityState {
    values: Vec<AtomicI32>,
    dir: PriorityDir,
    scale: BucketScale,
    /// Coarsened priority of the bucket in flight; -1 before the first round.
    current: AtomicI64,
}

impl PriorityState {
    pub fn new(values: Vec<i32>, dir: PriorityDir, scale: BucketScale) -> PriorityState {
        PriorityState {
            values: values.into_iter().map(AtomicI32::new).collect(),
            dir,
            scale,
            current: AtomicI64::new(-1),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dir(&self) -> PriorityDir {
        self.dir
    }

    pub fn delta(&self) -> u32 {
        match self.scale {
            BucketScale::Linear { delta } => delta,
            BucketScale::LogCount { .. } => 1,
        }
    }

    #[inline]
    pub fn load(&self, v: Vid) -> i32 {
        self.values[v as usize].load(Ordering::Relaxed)
    }

    /// Direct store, for initialization and single-threaded driver phases.
    pub fn store(&self, v: Vid, p: i32) {
        self.values[v as usize].store(p, Ordering::Relaxed);
    }

    #[inline]
    pub fn is_null(&self, p: i32) -> bool {
        match self.dir {
            PriorityDir::LowerFirst => p == NULL_PRIORITY,
            PriorityDir::HigherFirst => p <= 0,
        }
    }

    /// Bucket id for a non-null priority.
    #[inline]
    pub fn bucket_of(&self, p: i32) -> u32 {
        debug_assert!(!self.is_null(p));
        match self.scale {
            BucketScale::Linear { delta } => coarsen(p, delta),
            BucketScale::LogCount { one_plus_eps } => {
                ((p as f64).ln() / one_plus_eps.ln()).floor() as u32
            }
        }
    }

    /// True when the entry recorded for `v` under `bucket` still reflects the
    /// priority vector.
    #[inline]
    pub fn entry_live(&self, v: Vid, bucket: u32) -> bool {
        let p = self.load(v);
        !self.is_null(p) && self.bucket_of(p) == bucket
    }

    pub fn current_bucket(&self) -> Option<u32> {
        let c = self.current.load(Ordering::Relaxed);
        (c >= 0).then_some(c as u32)
    }

    pub fn set_current_bucket(&self, bucket: u32) {
        self.current.store(bucket as i64, Ordering::Relaxed);
    }

    /// Atomic minimum. Returns true iff this call strictly lowered the value;
    /// racing candidates resolve to the minimum.
    #[inline]
    pub fn update_min(&self, v: Vid, candidate: i32, mode: UpdateMode) -> bool {
        debug_assert_eq!(self.dir, PriorityDir::LowerFirst);
        let slot = &self.values[v as usize];
        match mode {
            UpdateMode::Atomic => candidate < slot.fetch_min(candidate, Ordering::Relaxed),
            UpdateMode::SingleWriter => {
                if candidate < slot.load(Ordering::Relaxed) {
                    slot.store(candidate, Ordering::Relaxed);
                    true
                } else {
                    false
                }
            }
        }
    }

    /// Bounded decrement: `p = max(p + diff, floor)` for values above the
    /// floor; values at or below the floor are left alone (they are already
    /// finalized). Returns (changed, new_value).
    #[inline]
    pub fn update_sum(&self, v: Vid, diff: i32, floor: i32, mode: UpdateMode) -> (bool, i32) {
        debug_assert!(diff < 0, "only lower-moving sum updates are supported");
        let slot = &self.values[v as usize];
        match mode {
            UpdateMode::Atomic => {
                let mut cur = slot.load(Ordering::Relaxed);
                loop {
                    if cur <= floor {
                        return (false, cur);
                    }
                    let next = (cur as i64 + diff as i64).max(floor as i64) as i32;
                    match slot.compare_exchange_weak(
                        cur,
                        next,
                        Ordering::Relaxed,
                        Ordering::Relaxed,
                    ) {
                        Ok(_) => return (true, next),
                        Err(actual) => cur = actual,
                    }
                }
            }
            UpdateMode::SingleWriter => {
                let cur = slot.load(Ordering::Relaxed);
                if cur <= floor {
                    return (false, cur);
                }
                let next = (cur as i64 + diff as i64).max(floor as i64) as i32;
                slot.store(next, Ordering::Relaxed);
                (true, next)
            }
        }
    }

    /// Whether `v`'s priority can no longer change, judged against the bucket
    /// currently being processed: every remaining update produces a value at
    /// or above `current * delta`, so anything at or below that wall is final.
    pub fn finished_vertex(&self, v: Vid) -> bool {
        let p = self.load(v);
        if self.is_null(p) {
            return false;
        }
        match (self.dir, self.current_bucket()) {
            (PriorityDir::LowerFirst, Some(cur)) => p as i64 <= cur as i64 * self.delta() as i64,
            _ => false,
        }
    }

    pub fn snapshot(&self) -> Vec<i32> {
        self.values
            .iter()
            .map(|a| a.load(Ordering::Relaxed))
            .collect()
    }

    pub fn into_values(self) -> Vec<i32> {
        self.values.into_iter().map(AtomicI32::into_inner).collect()
    }
}

/// Counters shared by both queue engines.
#[derive(Debug, Default, Clone)]
pub struct QueueStats {
    pub bucket_inserts: u64,
    pub stale_filtered: u64,
    pub ordering_violations: u64,
}
