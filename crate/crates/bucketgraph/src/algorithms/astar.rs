//! A* search over the ordered engine: true distances are min-reduced in an
//! algorithm-owned array while vertices are scheduled by the estimated total
//! (distance so far plus a scale-normalized Euclidean lower bound), kept
//! monotone by clamping against the parent's priority.

use std::sync::atomic::{AtomicI32, Ordering};

use super::AlgoKind;
use crate::engine::traverse::{EdgeUdf, PriorityOps};
use crate::engine::{run_ordered, RoundStats, Schedule, StopWhen, UdfKind};
use crate::graph::{CoordinateTable, Graph, Vid};
use crate::queue::{BucketScale, PriorityDir, PriorityState, NULL_PRIORITY};
use crate::runtime::Runtime;
use crate::tune::validate_schedule;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct AstarResult {
    pub distance: i32,
    pub stats: RoundStats,
}

/// Heuristic selection. `ScaledEuclid` is admissible for arbitrary weighted
/// inputs; `Inflated` deliberately overestimates and is kept for
/// demonstrating that admissibility is what buys exactness.
#[derive(Clone, Copy)]
pub enum HeuristicSpec<'a> {
    Zero,
    ScaledEuclid(&'a CoordinateTable),
    Inflated(&'a CoordinateTable, u32),
}

/// Largest Euclidean-distance-per-unit-weight over all edges. Dividing
/// point distances by this makes the heuristic a lower bound on remaining
/// path weight. Infinite when a zero-weight edge spans distinct points.
pub fn admissible_scale(g: &Graph, coords: &CoordinateTable) -> f64 {
    let mut scale = 0.0f64;
    for (src, dst, w) in g.edge_triples() {
        let d = coords.euclid(src, dst);
        if w == 0 {
            if d > 1e-12 {
                return f64::INFINITY;
            }
        } else {
            scale = scale.max(d / w as f64);
        }
    }
    scale
}

fn heuristic_vector(g: &Graph, spec: HeuristicSpec<'_>, target: Vid) -> Result<Vec<i32>> {
    let n = g.num_vertices();
    match spec {
        HeuristicSpec::Zero => Ok(vec![0; n]),
        HeuristicSpec::ScaledEuclid(coords) | HeuristicSpec::Inflated(coords, _) => {
            if coords.len() != n {
                return Err(Error::Config(format!(
                    "coordinate table covers {} vertices, graph has {n}",
                    coords.len()
                )));
            }
            let scale = admissible_scale(g, coords);
            let inflate = match spec {
                HeuristicSpec::Inflated(_, k) => k as f64,
                _ => 1.0,
            };
            let h = (0..n as Vid)
                .map(|v| {
                    if scale.is_finite() && scale > 0.0 {
                        ((coords.euclid(v, target) / scale * inflate).floor()).min(i32::MAX as f64)
                            as i32
                    } else {
                        0
                    }
                })
                .collect();
            Ok(h)
        }
    }
}

struct AstarRelax<'a> {
    f_score: &'a [AtomicI32],
    h: &'a [i32],
}

impl EdgeUdf for AstarRelax<'_> {
    #[inline]
    fn apply<C: PriorityOps>(&self, ctx: &mut C, src: Vid, dst: Vid, weight: u32) {
        let new_f = self.f_score[src as usize]
            .load(Ordering::Relaxed)
            .saturating_add(weight as i32);
        let prev = self.f_score[dst as usize].fetch_min(new_f, Ordering::Relaxed);
        if new_f < prev {
            // Clamping against the parent's priority keeps the schedule
            // monotone even when the heuristic shrinks faster than f grows.
            let new_g = new_f
                .saturating_add(self.h[dst as usize])
                .max(ctx.priority(src));
            let observed = ctx.priority(dst);
            ctx.update_priority_min(dst, observed, new_g);
        }
    }
}

pub fn astar_with_heuristic(
    g: &Graph,
    spec: HeuristicSpec<'_>,
    source: Vid,
    target: Vid,
    sched: &Schedule,
    rt: &Runtime,
) -> Result<AstarResult> {
    validate_schedule(AlgoKind::Astar, sched, g.has_in_edges())?;
    let n = g.num_vertices();
    if source as usize >= n || target as usize >= n {
        return Err(Error::Domain("source/target out of range".into()));
    }
    let h = heuristic_vector(g, spec, target)?;

    let f_score: Vec<AtomicI32> = (0..n)
        .map(|v| {
            AtomicI32::new(if v == source as usize {
                0
            } else {
                NULL_PRIORITY
            })
        })
        .collect();
    let mut g_init = vec![NULL_PRIORITY; n];
    g_init[source as usize] = h[source as usize];
    let prio = PriorityState::new(
        g_init,
        PriorityDir::LowerFirst,
        BucketScale::Linear { delta: sched.delta },
    );

    let udf = AstarRelax {
        f_score: &f_score,
        h: &h,
    };
    let (_, stats) = run_ordered(
        g,
        prio,
        &udf,
        UdfKind::General,
        sched,
        rt,
        StopWhen::TargetFinalized(target),
    )?;
    let distance = f_score[target as usize].load(Ordering::Relaxed);
    Ok(AstarResult { distance, stats })
}

/// A* with the scale-normalized Euclidean heuristic.
pub fn astar(
    g: &Graph,
    coords: &CoordinateTable,
    source: Vid,
    target: Vid,
    sched: &Schedule,
    rt: &Runtime,
) -> Result<AstarResult> {
    astar_with_heuristic(
        g,
        HeuristicSpec::ScaledEuclid(coords),
        source,
        target,
        sched,
        rt,
    )
}
