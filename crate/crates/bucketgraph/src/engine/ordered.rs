//! Ordered processing loop for the eager strategies: a bulk-synchronous round
//! structure where every pool thread keeps local bins across rounds, the next
//! bucket is the minimum over per-thread proposals, each thread copies its bin
//! of that priority into a shared frontier, and (with fusion enabled) drains
//! its refilled current-priority bin locally between barriers.
//!
//! DensePull under an eager strategy is supported but experimental: the
//! pulling thread owns each destination and fills its own bins, and fused
//! drains always walk out-edges. The well-trodden combinations are pull with
//! lazy bucketing and push with either eager flavor.

use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Barrier, RwLock};
use std::time::Instant;

use super::traverse::{grain_chunk, EdgeUdf, PriorityOps};
use super::{
    stop_hit, ParallelGrain, RoundStats, Schedule, StopWhen, TraversalDirection, UpdateStrategy,
};
use crate::graph::{Graph, Vid};
use crate::queue::eager::{EagerShared, EagerWorker};
use crate::queue::{PriorityState, UpdateMode};
use crate::runtime::Runtime;

const PROPOSAL_NONE: i64 = i64::MAX;
const CTL_FINISHED: i64 = -1;
const CTL_STOPPED: i64 = -2;

struct SharedRound {
    proposals: Vec<AtomicI64>,
    ctl: AtomicI64,
    frontier: RwLock<Vec<Vid>>,
    /// Dense frontier membership, maintained only for pull traversal.
    pull_bits: Option<Vec<AtomicU64>>,
    cursor: AtomicUsize,
    rounds: AtomicU64,
    last_bucket: AtomicI64,
    ordering_violations: AtomicU64,
    edges_relaxed: AtomicU64,
    bucket_inserts: AtomicU64,
    stale_filtered: AtomicU64,
    fused_rounds: AtomicU64,
    aborted: AtomicBool,
}

impl SharedRound {
    fn new(threads: usize, n: usize, pull: bool) -> SharedRound {
        SharedRound {
            proposals: (0..threads)
                .map(|_| AtomicI64::new(PROPOSAL_NONE))
                .collect(),
            ctl: AtomicI64::new(CTL_FINISHED),
            frontier: RwLock::new(Vec::new()),
            pull_bits: pull.then(|| (0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect()),
            cursor: AtomicUsize::new(0),
            rounds: AtomicU64::new(0),
            last_bucket: AtomicI64::new(-1),
            ordering_violations: AtomicU64::new(0),
            edges_relaxed: AtomicU64::new(0),
            bucket_inserts: AtomicU64::new(0),
            stale_filtered: AtomicU64::new(0),
            fused_rounds: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }
}

struct EagerCtx<'a> {
    prio: &'a PriorityState,
    worker: &'a mut EagerWorker,
    mode: UpdateMode,
    relaxed: u64,
}

impl PriorityOps for EagerCtx<'_> {
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
            self.worker.insert(v, self.prio.bucket_of(candidate));
        }
        changed
    }

    #[inline]
    fn update_priority_sum(&mut self, v: Vid, diff: i32, floor: i32) -> bool {
        let (changed, new_val) = self.prio.update_sum(v, diff, floor, self.mode);
        if changed {
            self.relaxed += 1;
            if !self.prio.is_null(new_val) {
                self.worker.insert(v, self.prio.bucket_of(new_val));
            }
        }
        changed
    }
}

#[inline]
fn relax_out<F: EdgeUdf>(g: &Graph, src: Vid, udf: &F, ctx: &mut EagerCtx<'_>) {
    for e in g.out_neighbors(src) {
        udf.apply(ctx, src, e.dst, e.weight);
    }
}

pub(crate) fn run_eager<F: EdgeUdf>(
    g: &Graph,
    prio: PriorityState,
    udf: &F,
    sched: &Schedule,
    rt: &Runtime,
    stop: StopWhen,
) -> (Vec<i32>, RoundStats) {
    let n = g.num_vertices();
    let nt = rt.threads();
    let fusion = sched.update_strategy == UpdateStrategy::EagerWithFusion;
    let pull = sched.direction == TraversalDirection::DensePull;
    let shared = EagerShared::new(prio, sched.num_open_buckets, sched.fusion_threshold);
    let sr = SharedRound::new(nt, n, pull);
    let barrier = Barrier::new(nt);

    let t0 = Instant::now();
    rt.pool().broadcast(|bc| {
        let tid = bc.index();
        let mut worker = EagerWorker::new(sched.num_open_buckets);

        // Seed this thread's slice of the initial priorities.
        let lo = tid * n / nt;
        let hi = (tid + 1) * n / nt;
        for v in lo as Vid..hi as Vid {
            let p = shared.prio.load(v);
            if !shared.prio.is_null(p) {
                worker.insert(v, shared.prio.bucket_of(p));
            }
        }

        loop {
            let proposal = worker
                .min_bucket(&shared.prio)
                .map_or(PROPOSAL_NONE, |b| b as i64);
            sr.proposals[tid].store(proposal, Ordering::Relaxed);
            barrier.wait();

            if tid == 0 {
                let gmin = sr
                    .proposals
                    .iter()
                    .map(|p| p.load(Ordering::Relaxed))
                    .min()
                    .unwrap_or(PROPOSAL_NONE);
                let decision = if gmin == PROPOSAL_NONE {
                    CTL_FINISHED
                } else if rt.deadline_hit() {
                    sr.aborted.store(true, Ordering::Relaxed);
                    CTL_STOPPED
                } else if stop_hit(&shared.prio, stop, gmin as u32) {
                    CTL_STOPPED
                } else {
                    let last = sr.last_bucket.swap(gmin, Ordering::Relaxed);
                    if last >= 0 && gmin < last {
                        sr.ordering_violations.fetch_add(1, Ordering::Relaxed);
                        debug_assert!(false, "priority inversion: {gmin} after {last}");
                    }
                    sr.rounds.fetch_add(1, Ordering::Relaxed);
                    shared.prio.set_current_bucket(gmin as u32);
                    let mut f = sr.frontier.write().unwrap();
                    if let Some(bits) = &sr.pull_bits {
                        for &v in f.iter() {
                            bits[v as usize / 64].fetch_and(!(1u64 << (v % 64)), Ordering::Relaxed);
                        }
                    }
                    f.clear();
                    sr.cursor.store(0, Ordering::Relaxed);
                    gmin
                };
                sr.ctl.store(decision, Ordering::Relaxed);
            }
            barrier.wait();

            let ctl = sr.ctl.load(Ordering::Relaxed);
            if ctl < 0 {
                break;
            }
            let bucket = ctl as u32;

            worker.rewindow(bucket, &shared.prio);
            let mine = worker.take_live(bucket, &shared.prio);
            if !mine.is_empty() {
                if let Some(bits) = &sr.pull_bits {
                    for &v in &mine {
                        bits[v as usize / 64].fetch_or(1u64 << (v % 64), Ordering::Relaxed);
                    }
                }
                sr.frontier.write().unwrap().extend_from_slice(&mine);
            }
            barrier.wait();

            let mut relaxed = 0u64;
            {
                let guard = sr.frontier.read().unwrap();
                let frontier: &[Vid] = &guard;
                match sched.direction {
                    TraversalDirection::SparsePush => {
                        let mut ctx = EagerCtx {
                            prio: &shared.prio,
                            worker: &mut worker,
                            mode: UpdateMode::Atomic,
                            relaxed: 0,
                        };
                        for_my_share(
                            frontier.len(),
                            sched.parallel_grain,
                            tid,
                            nt,
                            &sr.cursor,
                            |i| {
                                relax_out(g, frontier[i], udf, &mut ctx);
                            },
                        );
                        relaxed += ctx.relaxed;
                    }
                    TraversalDirection::DensePull => {
                        let bits = sr.pull_bits.as_ref().expect("pull bitmap");
                        let mut ctx = EagerCtx {
                            prio: &shared.prio,
                            worker: &mut worker,
                            mode: UpdateMode::SingleWriter,
                            relaxed: 0,
                        };
                        for_my_share(n, sched.parallel_grain, tid, nt, &sr.cursor, |i| {
                            let dst = i as Vid;
                            for e in g.in_neighbors(dst) {
                                let src = e.dst;
                                if bits[src as usize / 64].load(Ordering::Relaxed) >> (src % 64) & 1
                                    == 1
                                {
                                    udf.apply(&mut ctx, src, dst, e.weight);
                                }
                            }
                        });
                        relaxed += ctx.relaxed;
                    }
                }
            }

            if fusion {
                worker.fused_drain(bucket, shared.fusion_threshold, &shared.prio, |w, v| {
                    let mut ctx = EagerCtx {
                        prio: &shared.prio,
                        worker: w,
                        mode: UpdateMode::Atomic,
                        relaxed: 0,
                    };
                    relax_out(g, v, udf, &mut ctx);
                    relaxed += ctx.relaxed;
                });
            }
            sr.edges_relaxed.fetch_add(relaxed, Ordering::Relaxed);
        }

        sr.bucket_inserts
            .fetch_add(worker.stats.bucket_inserts, Ordering::Relaxed);
        sr.stale_filtered
            .fetch_add(worker.stats.stale_filtered, Ordering::Relaxed);
        sr.fused_rounds
            .fetch_add(worker.fused_subrounds, Ordering::Relaxed);
    });

    let stats = RoundStats {
        rounds: sr.rounds.load(Ordering::Relaxed),
        fused_rounds: sr.fused_rounds.load(Ordering::Relaxed),
        edges_relaxed: sr.edges_relaxed.load(Ordering::Relaxed),
        buffer_compactions: 0,
        stale_filtered: sr.stale_filtered.load(Ordering::Relaxed),
        bucket_inserts: sr.bucket_inserts.load(Ordering::Relaxed),
        ordering_violations: sr.ordering_violations.load(Ordering::Relaxed),
        time_ms: t0.elapsed().as_secs_f64() * 1e3,
        aborted: sr.aborted.load(Ordering::Relaxed),
    };
    (shared.prio.into_values(), stats)
}

/// Iterates this thread's portion of `[0, total)`: a contiguous slice under
/// the static grain, chunks claimed from a shared cursor under the dynamic
/// grain.
fn for_my_share<F: FnMut(usize)>(
    total: usize,
    grain: ParallelGrain,
    tid: usize,
    threads: usize,
    cursor: &AtomicUsize,
    mut body: F,
) {
    match grain {
        ParallelGrain::VertexParallelStatic => {
            let lo = tid * total / threads;
            let hi = (tid + 1) * total / threads;
            for i in lo..hi {
                body(i);
            }
        }
        ParallelGrain::VertexParallelDynamic => {
            let chunk = grain_chunk(total, grain, threads);
            loop {
                let start = cursor.fetch_add(chunk, Ordering::Relaxed);
                if start >= total {
                    break;
                }
                for i in start..(start + chunk).min(total) {
                    body(i);
                }
            }
        }
    }
}
