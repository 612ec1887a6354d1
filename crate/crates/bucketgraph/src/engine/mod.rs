//! The schedule-driven traversal engine: `Schedule` describes which bucket
//! update strategy, coarsening factor, traversal direction, grain, and
//! deduplication setting a run uses; the engine executes rounds accordingly.

pub mod ordered;
pub mod traverse;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::graph::{Graph, Vid};
use crate::queue::lazy::LazyBucketQueue;
use crate::queue::{PriorityState, QueueStats};
use crate::runtime::Runtime;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateStrategy {
    EagerWithFusion,
    EagerNoFusion,
    Lazy,
    LazyConstantSum,
}

impl UpdateStrategy {
    pub const ALL: [UpdateStrategy; 4] = [
        UpdateStrategy::EagerWithFusion,
        UpdateStrategy::EagerNoFusion,
        UpdateStrategy::Lazy,
        UpdateStrategy::LazyConstantSum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            UpdateStrategy::EagerWithFusion => "eager_with_fusion",
            UpdateStrategy::EagerNoFusion => "eager_no_fusion",
            UpdateStrategy::Lazy => "lazy",
            UpdateStrategy::LazyConstantSum => "lazy_constant_sum",
        }
    }

    pub fn is_eager(&self) -> bool {
        matches!(
            self,
            UpdateStrategy::EagerWithFusion | UpdateStrategy::EagerNoFusion
        )
    }
}

impl fmt::Display for UpdateStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UpdateStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<UpdateStrategy> {
        match s {
            "eager_with_fusion" => Ok(UpdateStrategy::EagerWithFusion),
            "eager_no_fusion" => Ok(UpdateStrategy::EagerNoFusion),
            "lazy" => Ok(UpdateStrategy::Lazy),
            "lazy_constant_sum" => Ok(UpdateStrategy::LazyConstantSum),
            other => Err(Error::Config(format!("unknown update strategy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TraversalDirection {
    SparsePush,
    DensePull,
}

impl FromStr for TraversalDirection {
    type Err = Error;
    fn from_str(s: &str) -> Result<TraversalDirection> {
        match s.to_ascii_lowercase().as_str() {
            "sparsepush" | "sparse_push" | "push" => Ok(TraversalDirection::SparsePush),
            "densepull" | "dense_pull" | "pull" => Ok(TraversalDirection::DensePull),
            other => Err(Error::Config(format!("unknown direction '{other}'"))),
        }
    }
}

impl fmt::Display for TraversalDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraversalDirection::SparsePush => "SparsePush",
            TraversalDirection::DensePull => "DensePull",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParallelGrain {
    VertexParallelStatic,
    VertexParallelDynamic,
}

/// Full optimization configuration for one run.
#[derive(Debug, Clone, Serialize)]
pub struct Schedule {
    pub update_strategy: UpdateStrategy,
    pub delta: u32,
    pub fusion_threshold: usize,
    pub num_open_buckets: usize,
    pub direction: TraversalDirection,
    pub parallel_grain: ParallelGrain,
    pub dedup: bool,
}

impl Default for Schedule {
    fn default() -> Schedule {
        Schedule {
            update_strategy: UpdateStrategy::Lazy,
            delta: 1,
            fusion_threshold: 1000,
            num_open_buckets: 128,
            direction: TraversalDirection::SparsePush,
            parallel_grain: ParallelGrain::VertexParallelDynamic,
            dedup: true,
        }
    }
}

impl Schedule {
    pub fn with_strategy(strategy: UpdateStrategy) -> Schedule {
        Schedule {
            update_strategy: strategy,
            ..Schedule::default()
        }
    }

    pub fn with_delta(mut self, delta: u32) -> Schedule {
        self.delta = delta;
        self
    }
}

/// Per-run instrumentation, merged from the queue and the traversal paths.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RoundStats {
    pub rounds: u64,
    pub fused_rounds: u64,
    pub edges_relaxed: u64,
    pub buffer_compactions: u64,
    pub stale_filtered: u64,
    pub bucket_inserts: u64,
    pub ordering_violations: u64,
    pub time_ms: f64,
    /// True when the run stopped at the runtime's time budget; the result is
    /// partial and must not be trusted.
    pub aborted: bool,
}

impl RoundStats {
    pub(crate) fn absorb_queue(&mut self, q: &QueueStats) {
        self.bucket_inserts += q.bucket_inserts;
        self.stale_filtered += q.stale_filtered;
        self.ordering_violations += q.ordering_violations;
    }
}

/// Early-termination condition checked at the head of each round, before the
/// round is processed or counted.
#[derive(Debug, Clone, Copy)]
pub enum StopWhen {
    Never,
    /// Stop once the target's priority is finalized: the bucket about to be
    /// processed satisfies `bucket * delta >= priority[target]`.
    TargetFinalized(Vid),
}

pub(crate) fn stop_hit(prio: &PriorityState, stop: StopWhen, bucket: u32) -> bool {
    match stop {
        StopWhen::Never => false,
        StopWhen::TargetFinalized(t) => {
            let p = prio.load(t);
            !prio.is_null(p) && p as i64 <= bucket as i64 * prio.delta() as i64
        }
    }
}

/// What the per-edge update function does, declared by the algorithm. The
/// histogram strategy is only sound for constant-increment sum updates.
#[derive(Debug, Clone, Copy)]
pub enum UdfKind {
    General,
    /// Every invocation adds `diff` with the current bucket priority as floor.
    ConstantSum {
        diff: i32,
    },
}

/// Runs an ordered algorithm to completion under `sched`, returning the final
/// priority vector and round statistics.
pub fn run_ordered<F: traverse::EdgeUdf>(
    g: &Graph,
    prio: PriorityState,
    udf: &F,
    kind: UdfKind,
    sched: &Schedule,
    rt: &Runtime,
    stop: StopWhen,
) -> Result<(Vec<i32>, RoundStats)> {
    if sched.direction == TraversalDirection::DensePull && !g.has_in_edges() {
        return Err(Error::Config(
            "DensePull requires in-edges; rebuild the graph with build_in_edges".into(),
        ));
    }
    match sched.update_strategy {
        UpdateStrategy::EagerWithFusion | UpdateStrategy::EagerNoFusion => {
            Ok(ordered::run_eager(g, prio, udf, sched, rt, stop))
        }
        UpdateStrategy::Lazy | UpdateStrategy::LazyConstantSum => {
            if matches!(sched.update_strategy, UpdateStrategy::LazyConstantSum)
                && matches!(kind, UdfKind::General)
            {
                return Err(Error::Config(
                    "lazy_constant_sum requires a constant-increment update".into(),
                ));
            }
            let q = LazyBucketQueue::new(prio, sched.num_open_buckets);
            Ok(traverse::run_lazy(g, q, udf, kind, sched, rt, stop))
        }
    }
}
