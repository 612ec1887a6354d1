//! Serial reference implementations used to verify the parallel runs:
//! binary-heap Dijkstra, min-degree peeling for coreness, and greedy set
//! cover. Deterministic, no parallelism, no bucketing.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::setcover::build_membership;
use crate::graph::{Graph, Vid};
use crate::queue::NULL_PRIORITY;
use crate::Result;

/// Textbook Dijkstra. Parallel edges are independent relaxations, exactly as
/// in the bucketed runtime.
pub fn dijkstra_oracle(g: &Graph, source: Vid) -> Vec<i32> {
    let n = g.num_vertices();
    let mut dist = vec![NULL_PRIORITY; n];
    dist[source as usize] = 0;
    let mut heap: BinaryHeap<Reverse<(i32, Vid)>> = BinaryHeap::new();
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for e in g.out_neighbors(u) {
            let nd = d.saturating_add(e.weight as i32);
            if nd < dist[e.dst as usize] {
                dist[e.dst as usize] = nd;
                heap.push(Reverse((nd, e.dst)));
            }
        }
    }
    dist
}

/// Serial peeling: repeatedly finalize a minimum-degree vertex; coreness is
/// the running maximum of removal degrees. Neighbor degrees drop once per
/// incident edge, so parallel edges count with multiplicity.
pub fn kcore_oracle(g: &Graph) -> Vec<i32> {
    let n = g.num_vertices();
    let mut deg: Vec<usize> = (0..n as Vid).map(|v| g.out_degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<Vid>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n as Vid {
        buckets[deg[v as usize]].push(v);
    }
    let mut removed = vec![false; n];
    let mut core = vec![0i32; n];
    let mut k = 0usize;
    let mut cur = 0usize;
    let mut done = 0usize;
    while done < n {
        while cur <= max_deg && buckets[cur].is_empty() {
            cur += 1;
        }
        let v = match buckets[cur].pop() {
            Some(v) => v,
            None => break,
        };
        if removed[v as usize] || deg[v as usize] != cur {
            continue; // stale entry
        }
        removed[v as usize] = true;
        done += 1;
        k = k.max(cur);
        core[v as usize] = k as i32;
        for e in g.out_neighbors(v) {
            let u = e.dst as usize;
            if !removed[u] && deg[u] > 0 {
                deg[u] -= 1;
                buckets[deg[u]].push(e.dst);
                cur = cur.min(deg[u]);
            }
        }
    }
    core
}

/// Serial greedy cover: always take the set covering the most uncovered
/// elements (lowest id on ties).
pub fn greedy_setcover_oracle(g: &Graph, num_sets: usize) -> Result<Vec<Vid>> {
    let (sets_elems, _) = build_membership(g, num_sets)?;
    let num_elements = g.num_vertices() - num_sets;
    let mut covered = vec![false; num_elements];
    let mut chosen = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None; // (gain, set)
        for (s, elems) in sets_elems.iter().enumerate() {
            let gain = elems.iter().filter(|&&e| !covered[e as usize]).count();
            if gain > 0 && best.is_none_or(|(bg, _)| gain > bg) {
                best = Some((gain, s));
            }
        }
        match best {
            Some((_, s)) => {
                chosen.push(s as Vid);
                for &e in &sets_elems[s] {
                    covered[e as usize] = true;
                }
            }
            None => break,
        }
    }
    Ok(chosen)
}
