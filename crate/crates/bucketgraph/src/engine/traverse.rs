//! The `apply_update_priority` edge operator for the lazy strategies:
//! direction-selected parallel traversal, per-segment update buffering with
//! CAS-guarded deduplication, prefix-sum compaction, and the histogram
//! rewrite for constant-sum updates.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{stop_hit, ParallelGrain, RoundStats, Schedule, StopWhen, UdfKind, UpdateStrategy};
use crate::graph::{out_degree_sum, subset_convert, Graph, SubsetRepr, VertexSubset, Vid};
use crate::queue::lazy::LazyBucketQueue;
use crate::queue::{BucketUpdate, PriorityState, UpdateMode};
use crate::runtime::Runtime;

/// Priority operators available to an edge update function. Updates route the
/// recorded bucket move to whichever queue engine is driving the run.
pub trait PriorityOps {
    fn priority(&self, v: Vid) -> i32;
    /// Coarsened priority of the bucket being processed.
    fn current_priority(&self) -> u32;
    /// Lower `v`'s priority to `candidate` if it improves on the stored value.
    /// `observed` is the caller's last read and serves as a cheap screen.
    fn update_priority_min(&mut self, v: Vid, observed: i32, candidate: i32) -> bool;
    /// Add `diff` (< 0) to `v`'s priority without going below `floor`.
    fn update_priority_sum(&mut self, v: Vid, diff: i32, floor: i32) -> bool;
}

/// A per-edge update function. Must be reentrant and side-effect-free except
/// through the priority operators and algorithm-owned atomic arrays.
pub trait EdgeUdf: Sync {
    fn apply<C: PriorityOps>(&self, ctx: &mut C, src: Vid, dst: Vid, weight: u32);
}

/// Per-vertex claimed bits for one round of buffered updates.
pub struct DedupFlags {
    flags: Vec<AtomicBool>,
}

impl DedupFlags {
    pub fn new(n: usize) -> DedupFlags {
        DedupFlags {
            flags: (0..n).map(|_| AtomicBool::new(false)).collect(),
        }
    }

    /// True iff the caller claimed `v` for this round.
    #[inline]
    pub fn claim(&self, v: Vid) -> bool {
        self.flags[v as usize]
            .compare_exchange(false, true, Ordering::Relaxed, Ordering::Relaxed)
            .is_ok()
    }

    #[inline]
    pub fn release(&self, v: Vid) {
        self.flags[v as usize].store(false, Ordering::Relaxed);
    }
}

/// Buffered bucket moves, one append segment per parallel chunk.
pub struct UpdateBuffer {
    pub segments: Vec<Vec<BucketUpdate>>,
}

/// Exclusive prefix sum over segment lengths: the write offset of each
/// segment in the compacted output.
pub fn segment_offsets(lens: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(lens.len());
    let mut acc = 0usize;
    for &l in lens {
        offsets.push(acc);
        acc += l;
    }
    offsets
}

/// Flattens the per-segment buffers into one dense sequence. Every entry's
/// bucket is recomputed from the priority vector so it reflects the final
/// priority at compaction time.
pub fn compact_updates(buf: UpdateBuffer, prio: &PriorityState) -> Vec<BucketUpdate> {
    let lens: Vec<usize> = buf.segments.iter().map(|s| s.len()).collect();
    let offsets = segment_offsets(&lens);
    let total = offsets.last().map_or(0, |o| o + lens[lens.len() - 1]);
    let mut out = Vec::with_capacity(total);
    for seg in &buf.segments {
        for u in seg {
            let p = prio.load(u.vertex);
            debug_assert!(!prio.is_null(p));
            out.push(BucketUpdate {
                vertex: u.vertex,
                bucket: prio.bucket_of(p),
            });
        }
    }
    debug_assert_eq!(out.len(), total);
    out
}

struct LazyCtx<'a> {
    prio: &'a PriorityState,
    mode: UpdateMode,
    dedup: Option<&'a DedupFlags>,
    seg: Vec<BucketUpdate>,
    relaxed: u64,
}

impl LazyCtx<'_> {
    #[inline]
    fn record(&mut self, v: Vid, bucket: u32) {
        match self.dedup {
            Some(flags) => {
                if flags.claim(v) {
                    self.seg.push(BucketUpdate { vertex: v, bucket });
                }
            }
            None => self.seg.push(BucketUpdate { vertex: v, bucket }),
        }
    }
}

impl PriorityOps for LazyCtx<'_> {
    #[inline]
    fn priority(&self, v: Vid) -> i32 {
        self.prio.load(v)
    }

    #[inline]
    fn current_priority(&self) -> u32 {
        self.prio.current_bucket().expect("inside a round")
    }

    #[inline]
    fn update_priority_min(&mut self, v: Vid, observed: i32, candidate: i32) -> bool {
        if candidate >= observed {
            return false;
        }
        let changed = self.prio.update_min(v, candidate, self.mode);
        if changed {
            self.relaxed += 1;
            self.record(v, self.prio.bucket_of(candidate));
        }
        changed
    }

    #[inline]
    fn update_priority_sum(&mut self, v: Vid, diff: i32, floor: i32) -> bool {
        let (changed, new_val) = self.prio.update_sum(v, diff, floor, self.mode);
        if changed {
            self.relaxed += 1;
            if self.prio.is_null(new_val) {
                return true;
            }
            self.record(v, self.prio.bucket_of(new_val));
        }
        changed
    }
}

pub(crate) fn grain_chunk(total: usize, grain: ParallelGrain, threads: usize) -> usize {
    let c = match grain {
        ParallelGrain::VertexParallelStatic => total.div_ceil(threads.max(1)),
        ParallelGrain::VertexParallelDynamic => 64.max(total / (threads.max(1) * 8)),
    };
    c.max(1)
}

/// One round of the lazy edge operator: traverse the frontier in the selected
/// direction, buffer changed vertices (dedup-guarded), compact, and bulk-move
/// buckets. The constant-sum strategy replaces the per-edge path with a
/// histogram over destinations.
#[allow(clippy::too_many_arguments)]
pub fn apply_update_priority<F: EdgeUdf>(
    g: &Graph,
    frontier: &VertexSubset,
    udf: &F,
    kind: UdfKind,
    q: &mut LazyBucketQueue,
    sched: &Schedule,
    dedup: Option<&DedupFlags>,
    threads: usize,
    stats: &mut RoundStats,
) {
    let compacted = match sched.update_strategy {
        UpdateStrategy::LazyConstantSum => {
            let UdfKind::ConstantSum { diff } = kind else {
                panic!("lazy_constant_sum requires a constant-sum update declaration");
            };
            histogram_constant_sum(g, frontier.ids(), diff, q.prio(), sched, threads, stats)
        }
        UpdateStrategy::Lazy => {
            let buf =
                traverse_into_segments(g, frontier, udf, q.prio(), sched, dedup, threads, stats);
            let compacted = compact_updates(buf, q.prio());
            if let Some(flags) = dedup {
                for u in &compacted {
                    flags.release(u.vertex);
                }
            }
            compacted
        }
        _ => unreachable!("apply_update_priority drives the lazy strategies"),
    };
    stats.buffer_compactions += 1;
    debug_assert!(compacted.len() <= out_degree_sum(g, frontier));
    q.bulk_update(&compacted);
}

#[allow(clippy::too_many_arguments)]
fn traverse_into_segments<F: EdgeUdf>(
    g: &Graph,
    frontier: &VertexSubset,
    udf: &F,
    prio: &PriorityState,
    sched: &Schedule,
    dedup: Option<&DedupFlags>,
    threads: usize,
    stats: &mut RoundStats,
) -> UpdateBuffer {
    let results: Vec<(Vec<BucketUpdate>, u64)> = match sched.direction {
        super::TraversalDirection::SparsePush => {
            let ids = frontier.ids();
            let chunk = grain_chunk(ids.len(), sched.parallel_grain, threads);
            ids.par_chunks(chunk)
                .map(|chunk_ids| {
                    let mut ctx = LazyCtx {
                        prio,
                        mode: UpdateMode::Atomic,
                        dedup,
                        seg: Vec::new(),
                        relaxed: 0,
                    };
                    for &src in chunk_ids {
                        for e in g.out_neighbors(src) {
                            udf.apply(&mut ctx, src, e.dst, e.weight);
                        }
                    }
                    (ctx.seg, ctx.relaxed)
                })
                .collect()
        }
        super::TraversalDirection::DensePull => {
            let dense = subset_convert(frontier, SubsetRepr::Dense);
            let VertexSubset::Dense { bits, .. } = &dense else {
                unreachable!()
            };
            let n = g.num_vertices();
            let chunk = grain_chunk(n, sched.parallel_grain, threads);
            let ranges: Vec<(usize, usize)> = (0..n.div_ceil(chunk))
                .map(|i| (i * chunk, ((i + 1) * chunk).min(n)))
                .collect();
            ranges
                .par_iter()
                .map(|&(lo, hi)| {
                    // Each destination is visited by exactly one chunk, so its
                    // updates need no read-modify-write synchronization.
                    let mut ctx = LazyCtx {
                        prio,
                        mode: UpdateMode::SingleWriter,
                        dedup,
                        seg: Vec::new(),
                        relaxed: 0,
                    };
                    for dst in lo as Vid..hi as Vid {
                        for e in g.in_neighbors(dst) {
                            let src = e.dst;
                            if bits[src as usize / 64] >> (src % 64) & 1 == 1 {
                                udf.apply(&mut ctx, src, dst, e.weight);
                            }
                        }
                    }
                    (ctx.seg, ctx.relaxed)
                })
                .collect()
        }
    };
    let mut segments = Vec::with_capacity(results.len());
    for (seg, relaxed) in results {
        stats.edges_relaxed += relaxed;
        segments.push(seg);
    }
    UpdateBuffer { segments }
}

/// Constant-sum reduction: counts per-destination updates over the frontier's
/// out-edges with a histogram, then applies `max(p + diff * count, floor)`
/// once per vertex, emitting a single bucket move each.
pub fn histogram_constant_sum(
    g: &Graph,
    frontier: &[Vid],
    diff: i32,
    prio: &PriorityState,
    sched: &Schedule,
    threads: usize,
    stats: &mut RoundStats,
) -> Vec<BucketUpdate> {
    debug_assert!(diff < 0);
    let n = g.num_vertices();
    let floor = prio
        .current_bucket()
        .expect("histogram runs inside a round") as i32;
    let deg_sum: usize = frontier.iter().map(|&v| g.out_degree(v)).sum();
    let chunk = grain_chunk(frontier.len(), sched.parallel_grain, threads);

    // Dense count arrays when the frontier touches a meaningful share of the
    // graph, otherwise sort the destinations and run-length count.
    let counts: Vec<(Vid, u32)> = if deg_sum > n / 16 {
        let partials: Vec<Vec<u32>> = frontier
            .par_chunks(chunk)
            .map(|chunk_ids| {
                let mut c = vec![0u32; n];
                for &src in chunk_ids {
                    for e in g.out_neighbors(src) {
                        c[e.dst as usize] += 1;
                    }
                }
                c
            })
            .collect();
        let mut merged = vec![0u32; n];
        for p in partials {
            for (m, c) in merged.iter_mut().zip(p) {
                *m += c;
            }
        }
        merged
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(v, c)| (v as Vid, c))
            .collect()
    } else {
        let mut dsts: Vec<Vid> = frontier
            .par_chunks(chunk)
            .map(|chunk_ids| {
                let mut d = Vec::new();
                for &src in chunk_ids {
                    d.extend(g.out_neighbors(src).iter().map(|e| e.dst));
                }
                d
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            });
        dsts.sort_unstable();
        let mut runs = Vec::new();
        let mut i = 0;
        while i < dsts.len() {
            let v = dsts[i];
            let mut j = i + 1;
            while j < dsts.len() && dsts[j] == v {
                j += 1;
            }
            runs.push((v, (j - i) as u32));
            i = j;
        }
        runs
    };

    let mut out = Vec::with_capacity(counts.len());
    for (v, count) in counts {
        let old = prio.load(v);
        if old > floor {
            let new_val = (old as i64 + diff as i64 * count as i64).max(floor as i64) as i32;
            if new_val != old {
                prio.store(v, new_val);
                stats.edges_relaxed += 1;
                if !prio.is_null(new_val) {
                    out.push(BucketUpdate {
                        vertex: v,
                        bucket: prio.bucket_of(new_val),
                    });
                }
            }
        }
    }
    out
}

/// Drives the lazy while/dequeue/apply loop to completion (or early stop).
pub(crate) fn run_lazy<F: EdgeUdf>(
    g: &Graph,
    mut q: LazyBucketQueue,
    udf: &F,
    kind: UdfKind,
    sched: &Schedule,
    rt: &Runtime,
    stop: StopWhen,
) -> (Vec<i32>, RoundStats) {
    let n = g.num_vertices();
    let mut stats = RoundStats::default();
    let dedup_flags = sched.dedup.then(|| DedupFlags::new(n));
    let threads = rt.threads();
    q.seed_initial();
    let t0 = Instant::now();
    rt.pool().install(|| {
        while let Some((bucket, ids)) = q.dequeue_ready_set() {
            if rt.deadline_hit() {
                stats.aborted = true;
                break;
            }
            if stop_hit(q.prio(), stop, bucket) {
                break;
            }
            stats.rounds += 1;
            let frontier = VertexSubset::from_ids(ids, n);
            apply_update_priority(
                g,
                &frontier,
                udf,
                kind,
                &mut q,
                sched,
                dedup_flags.as_ref(),
                threads,
                &mut stats,
            );
        }
    });
    stats.time_ms = t0.elapsed().as_secs_f64() * 1e3;
    let (values, qstats) = q.into_priorities();
    stats.absorb_queue(&qstats);
    (values, stats)
}
