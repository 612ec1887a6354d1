//! Delta-stepping SSSP and its two derivatives: weighted BFS with delta
//! pinned to 1, and point-to-point shortest path with early termination once
//! the target's distance is finalized.

use super::AlgoKind;
use crate::engine::traverse::{EdgeUdf, PriorityOps};
use crate::engine::{run_ordered, RoundStats, Schedule, StopWhen, UdfKind};
use crate::graph::{Graph, Vid};
use crate::queue::{BucketScale, PriorityDir, PriorityState, NULL_PRIORITY};
use crate::runtime::Runtime;
use crate::tune::validate_schedule;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SsspResult {
    pub dist: Vec<i32>,
    pub stats: RoundStats,
}

#[derive(Debug, Clone)]
pub struct PpspResult {
    pub distance: i32,
    pub dist: Vec<i32>,
    pub stats: RoundStats,
}

/// Edge relaxation: lower dst's distance to dist(src) + w.
pub(crate) struct MinRelax;

impl EdgeUdf for MinRelax {
    #[inline]
    fn apply<C: PriorityOps>(&self, ctx: &mut C, src: Vid, dst: Vid, weight: u32) {
        let new_dist = ctx.priority(src).saturating_add(weight as i32);
        let observed = ctx.priority(dst);
        ctx.update_priority_min(dst, observed, new_dist);
    }
}

fn distance_state(n: usize, source: Vid, delta: u32) -> PriorityState {
    let mut init = vec![NULL_PRIORITY; n];
    init[source as usize] = 0;
    PriorityState::new(init, PriorityDir::LowerFirst, BucketScale::Linear { delta })
}

fn check_source(g: &Graph, source: Vid) -> Result<()> {
    if (source as usize) < g.num_vertices() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "source {source} out of range for {} vertices",
            g.num_vertices()
        )))
    }
}

pub fn sssp_delta_stepping(
    g: &Graph,
    source: Vid,
    sched: &Schedule,
    rt: &Runtime,
) -> Result<SsspResult> {
    validate_schedule(AlgoKind::Sssp, sched, g.has_in_edges())?;
    check_source(g, source)?;
    let prio = distance_state(g.num_vertices(), source, sched.delta);
    let (dist, stats) = run_ordered(
        g,
        prio,
        &MinRelax,
        UdfKind::General,
        sched,
        rt,
        StopWhen::Never,
    )?;
    Ok(SsspResult { dist, stats })
}

/// Weighted BFS: delta-stepping with the coarsening factor pinned to 1.
/// Zero weights are rejected (unit-step buckets assume positive integers);
/// weights at or above ceil(log2 n) only draw a warning.
pub fn wbfs(g: &Graph, source: Vid, sched: &Schedule, rt: &Runtime) -> Result<SsspResult> {
    check_source(g, source)?;
    let n = g.num_vertices();
    let log_n = (usize::BITS - n.saturating_sub(1).leading_zeros()).max(1);
    let mut out_of_convention = 0usize;
    for (_, _, w) in g.edge_triples() {
        if w == 0 {
            return Err(Error::Domain(
                "wBFS requires positive integer weights".into(),
            ));
        }
        if w >= log_n {
            out_of_convention += 1;
        }
    }
    if out_of_convention > 0 {
        static WARNED: std::sync::Once = std::sync::Once::new();
        WARNED.call_once(|| {
            eprintln!(
                "warning: {out_of_convention} edge weight(s) fall outside the wBFS convention [1, log2 n)"
            );
        });
    }
    let pinned = Schedule {
        delta: 1,
        ..sched.clone()
    };
    validate_schedule(AlgoKind::Wbfs, &pinned, g.has_in_edges())?;
    let prio = distance_state(n, source, 1);
    let (dist, stats) = run_ordered(
        g,
        prio,
        &MinRelax,
        UdfKind::General,
        &pinned,
        rt,
        StopWhen::Never,
    )?;
    Ok(SsspResult { dist, stats })
}

/// Point-to-point shortest path: identical relaxation, but the round loop
/// stops as soon as the bucket about to be processed satisfies
/// `bucket * delta >= dist(target)`.
pub fn ppsp(
    g: &Graph,
    source: Vid,
    target: Vid,
    sched: &Schedule,
    rt: &Runtime,
) -> Result<PpspResult> {
    validate_schedule(AlgoKind::Ppsp, sched, g.has_in_edges())?;
    check_source(g, source)?;
    check_source(g, target)?;
    let prio = distance_state(g.num_vertices(), source, sched.delta);
    let (dist, stats) = run_ordered(
        g,
        prio,
        &MinRelax,
        UdfKind::General,
        sched,
        rt,
        StopWhen::TargetFinalized(target),
    )?;
    let distance = dist[target as usize];
    Ok(PpspResult {
        distance,
        dist,
        stats,
    })
}
