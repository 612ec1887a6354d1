//! Lazy bucket queue: a window of materialized buckets plus an overflow list.
//!
//! Bucket moves arrive in bulk once per round (after buffered updates are
//! compacted). Entries are filtered against the priority vector on dequeue,
//! so stale positions cost a re-check rather than an eager erase. When the
//! open window drains, the overflow is re-binned into a fresh window.

use std::collections::VecDeque;

use super::{BucketUpdate, PriorityDir, PriorityState, QueueStats};
use crate::graph::Vid;

#[derive(Debug)]
pub struct LazyBucketQueue {
    prio: PriorityState,
    /// Materialized buckets; slot 0 holds the bucket at `base` in processing
    /// order (ascending bucket ids for lower_first, descending for higher_first).
    slots: VecDeque<Vec<Vid>>,
    base: u32,
    /// Next slot to examine. Stays on a slot after a dequeue so a refilled
    /// bucket of the same priority is processed again before moving on.
    cursor: usize,
    /// Entries whose bucket fell beyond the open window, tagged with the
    /// bucket they were recorded for.
    overflow: Vec<(Vid, u32)>,
    num_open: usize,
    seeded: bool,
    last_dequeued: Option<u32>,
    pub stats: QueueStats,
}

impl LazyBucketQueue {
    pub fn new(prio: PriorityState, num_open: usize) -> LazyBucketQueue {
        assert!(num_open >= 1, "need at least one open bucket");
        let mut slots = VecDeque::with_capacity(num_open);
        slots.resize_with(num_open, Vec::new);
        LazyBucketQueue {
            prio,
            slots,
            base: 0,
            cursor: 0,
            overflow: Vec::new(),
            num_open,
            seeded: false,
            last_dequeued: None,
            stats: QueueStats::default(),
        }
    }

    pub fn prio(&self) -> &PriorityState {
        &self.prio
    }

    pub fn into_priorities(self) -> (Vec<i32>, QueueStats) {
        (self.prio.into_values(), self.stats)
    }

    /// Processing-order distance of `bucket` from the window origin.
    #[inline]
    fn slot_of(&self, bucket: u32) -> i64 {
        match self.prio.dir() {
            PriorityDir::LowerFirst => bucket as i64 - self.base as i64,
            PriorityDir::HigherFirst => self.base as i64 - bucket as i64,
        }
    }

    #[inline]
    fn bucket_at(&self, slot: usize) -> u32 {
        match self.prio.dir() {
            PriorityDir::LowerFirst => self.base + slot as u32,
            PriorityDir::HigherFirst => self.base - slot as u32,
        }
    }

    /// Bins every vertex whose priority is non-null. Called once before the
    /// first dequeue; the window origin becomes the best occupied bucket.
    pub fn seed_initial(&mut self) {
        debug_assert!(!self.seeded);
        self.seeded = true;
        let mut pending: Vec<(Vid, u32)> = Vec::new();
        for v in 0..self.prio.len() as Vid {
            let p = self.prio.load(v);
            if !self.prio.is_null(p) {
                pending.push((v, self.prio.bucket_of(p)));
            }
        }
        if pending.is_empty() {
            return;
        }
        self.base = match self.prio.dir() {
            PriorityDir::LowerFirst => pending.iter().map(|&(_, b)| b).min().unwrap(),
            PriorityDir::HigherFirst => pending.iter().map(|&(_, b)| b).max().unwrap(),
        };
        for (v, b) in pending {
            self.place(v, b);
        }
    }

    #[inline]
    fn place(&mut self, v: Vid, bucket: u32) {
        let slot = self.slot_of(bucket);
        if slot < self.cursor as i64 {
            // A move below the in-flight priority would be an inversion.
            debug_assert!(false, "bucket {bucket} is below the current window");
            let keep = self.cursor.min(self.num_open - 1);
            self.slots[keep].push(v);
        } else if (slot as usize) < self.num_open {
            self.slots[slot as usize].push(v);
        } else {
            self.overflow.push((v, bucket));
        }
        self.stats.bucket_inserts += 1;
    }

    /// Applies one compacted round of bucket moves.
    pub fn bulk_update(&mut self, updates: &[BucketUpdate]) {
        debug_assert!(self.seeded);
        for u in updates {
            self.place(u.vertex, u.bucket);
        }
    }

    /// Returns the next ready bucket `(priority, members)` after filtering
    /// stale entries, or `None` when every bucket and the overflow are empty.
    pub fn dequeue_ready_set(&mut self) -> Option<(u32, Vec<Vid>)> {
        debug_assert!(self.seeded, "seed_initial before dequeueing");
        loop {
            while self.cursor < self.num_open {
                if self.slots[self.cursor].is_empty() {
                    self.cursor += 1;
                    continue;
                }
                let bucket = self.bucket_at(self.cursor);
                let mut batch = std::mem::take(&mut self.slots[self.cursor]);
                let before = batch.len();
                batch.retain(|&v| self.prio.entry_live(v, bucket));
                self.stats.stale_filtered += (before - batch.len()) as u64;
                if batch.is_empty() {
                    continue; // slot now empty; rescan it
                }
                if let Some(last) = self.last_dequeued {
                    let inverted = match self.prio.dir() {
                        PriorityDir::LowerFirst => bucket < last,
                        PriorityDir::HigherFirst => bucket > last,
                    };
                    if inverted {
                        self.stats.ordering_violations += 1;
                        debug_assert!(!inverted, "priority inversion at bucket {bucket}");
                    }
                }
                self.last_dequeued = Some(bucket);
                self.prio.set_current_bucket(bucket);
                return Some((bucket, batch));
            }
            if self.overflow.is_empty() {
                return None;
            }
            self.rebin_overflow();
        }
    }

    /// Opens a fresh window at the best live overflow bucket and re-bins.
    fn rebin_overflow(&mut self) {
        let entries = std::mem::take(&mut self.overflow);
        let mut live: Vec<(Vid, u32)> = Vec::with_capacity(entries.len());
        for (v, b) in entries {
            if self.prio.entry_live(v, b) {
                live.push((v, b));
            } else {
                self.stats.stale_filtered += 1;
            }
        }
        if live.is_empty() {
            return;
        }
        self.base = match self.prio.dir() {
            PriorityDir::LowerFirst => live.iter().map(|&(_, b)| b).min().unwrap(),
            PriorityDir::HigherFirst => live.iter().map(|&(_, b)| b).max().unwrap(),
        };
        self.cursor = 0;
        for slot in self.slots.iter_mut() {
            debug_assert!(slot.is_empty());
            slot.clear();
        }
        for (v, b) in live {
            self.place(v, b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::queue::{BucketScale, NULL_PRIORITY};

    fn queue(values: Vec<i32>, delta: u32, num_open: usize) -> LazyBucketQueue {
        let prio = PriorityState::new(
            values,
            PriorityDir::LowerFirst,
            BucketScale::Linear { delta },
        );
        let mut q = LazyBucketQueue::new(prio, num_open);
        q.seed_initial();
        q
    }

    #[test]
    fn seeds_start_vertex_at_bucket_zero() {
        let mut q = queue(vec![0, NULL_PRIORITY, NULL_PRIORITY], 1, 4);
        let (bucket, ids) = q.dequeue_ready_set().unwrap();
        assert_eq!(bucket, 0);
        assert_eq!(ids, vec![0]);
        assert!(q.dequeue_ready_set().is_none());
    }

    #[test]
    fn empty_queue_is_finished() {
        let mut q = queue(vec![NULL_PRIORITY; 3], 1, 4);
        assert!(q.dequeue_ready_set().is_none());
    }

    #[test]
    fn stale_entry_is_filtered_after_relowering() {
        // Vertex 2 lands in bucket 3, then is lowered into bucket 1; the
        // dequeue trace must visit it once, at 1, and filter the stale copy.
        let mut q = queue(vec![0, NULL_PRIORITY, NULL_PRIORITY], 1, 8);
        let (b0, f0) = q.dequeue_ready_set().unwrap();
        assert_eq!((b0, f0), (0, vec![0]));

        q.prio().store(2, 3);
        q.bulk_update(&[BucketUpdate {
            vertex: 2,
            bucket: 3,
        }]);
        q.prio().store(2, 1);
        q.bulk_update(&[BucketUpdate {
            vertex: 2,
            bucket: 1,
        }]);

        let (b1, f1) = q.dequeue_ready_set().unwrap();
        assert_eq!((b1, f1), (1, vec![2]));
        assert!(q.dequeue_ready_set().is_none());
        assert_eq!(q.stats.stale_filtered, 1);
    }

    #[test]
    fn updates_beyond_window_go_to_overflow_and_return() {
        let mut q = queue(vec![0, NULL_PRIORITY], 1, 2);
        let _ = q.dequeue_ready_set().unwrap();
        q.prio().store(1, 9); // bucket 9, far outside the 2-slot window
        q.bulk_update(&[BucketUpdate {
            vertex: 1,
            bucket: 9,
        }]);
        let (bucket, ids) = q.dequeue_ready_set().unwrap();
        assert_eq!(bucket, 9);
        assert_eq!(ids, vec![1]);
    }

    #[test]
    fn empty_bulk_update_is_noop() {
        let mut q = queue(vec![0], 1, 2);
        q.bulk_update(&[]);
        assert_eq!(q.dequeue_ready_set().unwrap(), (0, vec![0]));
    }

    #[test]
    fn same_bucket_refill_is_revisited() {
        let mut q = queue(vec![0, NULL_PRIORITY], 4, 4);
        let (b, _) = q.dequeue_ready_set().unwrap();
        assert_eq!(b, 0);
        // A relaxation drops vertex 1 into the bucket being processed.
        q.prio().store(1, 3);
        q.bulk_update(&[BucketUpdate {
            vertex: 1,
            bucket: 0,
        }]);
        let (b2, f2) = q.dequeue_ready_set().unwrap();
        assert_eq!((b2, f2), (0, vec![1]));
    }

    #[test]
    fn higher_first_dequeues_descending() {
        let prio = PriorityState::new(
            vec![5, 9, 2, 0],
            PriorityDir::HigherFirst,
            BucketScale::Linear { delta: 1 },
        );
        let mut q = LazyBucketQueue::new(prio, 4);
        q.seed_initial();
        let mut seen = Vec::new();
        while let Some((b, ids)) = q.dequeue_ready_set() {
            seen.push((b, ids));
        }
        assert_eq!(seen, vec![(9, vec![1]), (5, vec![0]), (2, vec![2])]);
        assert_eq!(q.stats.ordering_violations, 0);
    }

    #[test]
    fn higher_first_overflow_rebins() {
        // Window of 2 starting at bucket 9 covers {9, 8}; bucket 2 overflows.
        let prio = PriorityState::new(
            vec![9, 2],
            PriorityDir::HigherFirst,
            BucketScale::Linear { delta: 1 },
        );
        let mut q = LazyBucketQueue::new(prio, 2);
        q.seed_initial();
        assert_eq!(q.dequeue_ready_set().unwrap(), (9, vec![0]));
        assert_eq!(q.dequeue_ready_set().unwrap(), (2, vec![1]));
        assert!(q.dequeue_ready_set().is_none());
    }
}
