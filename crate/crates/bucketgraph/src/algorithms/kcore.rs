//! k-core decomposition by parallel peeling: priorities start at degrees, the
//! minimum bucket k is dequeued and finalized at coreness k, and neighbors'
//! priorities drop by one per incident peeled edge, floored at k.

use super::AlgoKind;
use crate::engine::traverse::{EdgeUdf, PriorityOps};
use crate::engine::{run_ordered, RoundStats, Schedule, StopWhen, UdfKind};
use crate::graph::{Graph, Vid};
use crate::queue::{BucketScale, PriorityDir, PriorityState};
use crate::runtime::Runtime;
use crate::tune::validate_schedule;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CorenessResult {
    pub coreness: Vec<i32>,
    pub stats: RoundStats,
}

struct PeelDecrement;

impl EdgeUdf for PeelDecrement {
    #[inline]
    fn apply<C: PriorityOps>(&self, ctx: &mut C, _src: Vid, dst: Vid, _weight: u32) {
        let k = ctx.current_priority() as i32;
        ctx.update_priority_sum(dst, -1, k);
    }
}

pub fn kcore(g: &Graph, sched: &Schedule, rt: &Runtime) -> Result<CorenessResult> {
    validate_schedule(AlgoKind::KCore, sched, g.has_in_edges())?;
    if !g.is_symmetric() {
        return Err(Error::Domain("k-core requires a symmetrized graph".into()));
    }
    let n = g.num_vertices();
    let mut degrees = Vec::with_capacity(n);
    for v in 0..n as Vid {
        let d = g.out_degree(v);
        if d > i32::MAX as usize {
            return Err(Error::Domain(format!(
                "degree of {v} exceeds the priority range"
            )));
        }
        degrees.push(d as i32);
    }
    let prio = PriorityState::new(
        degrees,
        PriorityDir::LowerFirst,
        BucketScale::Linear { delta: 1 },
    );
    let (coreness, stats) = run_ordered(
        g,
        prio,
        &PeelDecrement,
        UdfKind::ConstantSum { diff: -1 },
        sched,
        rt,
        StopWhen::Never,
    )?;
    Ok(CorenessResult { coreness, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::UpdateStrategy;

    fn rt() -> Runtime {
        Runtime::new(2).unwrap()
    }

    fn triangle() -> Graph {
        Graph::build(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)], true, false).unwrap()
    }

    #[test]
    fn triangle_is_a_two_core() {
        let sched = Schedule {
            num_open_buckets: 16,
            ..Schedule::default()
        };
        let r = kcore(&triangle(), &sched, &rt()).unwrap();
        assert_eq!(r.coreness, vec![2, 2, 2]);
    }

    #[test]
    fn star_peels_to_ones() {
        let triples: Vec<(Vid, Vid, u32)> = (1..5).map(|leaf| (0, leaf, 1)).collect();
        let g = Graph::build(5, &triples, true, false).unwrap();
        let r = kcore(&g, &Schedule::default(), &rt()).unwrap();
        assert_eq!(r.coreness, vec![1; 5]);
    }

    #[test]
    fn histogram_strategy_matches_plain_lazy() {
        let g = crate::graph::synth::uniform_random_graph(32, 128, 1, 10, 3, true, false).unwrap();
        let plain = kcore(&g, &Schedule::default(), &rt()).unwrap();
        let hist = kcore(
            &g,
            &Schedule::with_strategy(UpdateStrategy::LazyConstantSum),
            &rt(),
        )
        .unwrap();
        assert_eq!(plain.coreness, hist.coreness);
    }

    #[test]
    fn directed_graph_rejected() {
        let g = Graph::build(3, &[(0, 1, 1)], false, false).unwrap();
        assert!(kcore(&g, &Schedule::default(), &rt()).is_err());
    }

    #[test]
    fn coarsening_rejected() {
        let sched = Schedule::default().with_delta(4);
        assert!(kcore(&triangle(), &sched, &rt()).is_err());
    }
}
