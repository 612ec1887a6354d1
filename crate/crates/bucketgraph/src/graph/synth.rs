//! Deterministic synthetic graph generators: bidirectional paths, 4-neighbor
//! grids (with lattice coordinates), uniform random digraphs, and random
//! bipartite incidence instances for set cover.

use super::{CoordinateTable, Graph, Vid};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Edge weight source for the generators.
#[derive(Debug, Clone, Copy)]
pub enum WeightGen {
    Fixed(u32),
    /// Uniform in `[lo, hi)`.
    Uniform(u32, u32),
}

impl WeightGen {
    fn sample(&self, rng: &mut SplitMix64) -> u32 {
        match *self {
            WeightGen::Fixed(w) => w,
            WeightGen::Uniform(lo, hi) => rng.next_range(lo as u64, hi as u64) as u32,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            WeightGen::Fixed(w) if w <= i32::MAX as u32 => Ok(()),
            WeightGen::Uniform(lo, hi) if lo < hi && hi <= i32::MAX as u32 + 1 => Ok(()),
            _ => Err(Error::Domain("invalid weight range".into())),
        }
    }
}

/// Chain 0 - 1 - ... - n-1 with both edge directions.
pub fn path_graph(n: usize, weights: WeightGen, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::Domain("path graph needs n >= 2".into()));
    }
    weights.validate()?;
    let mut rng = SplitMix64::new(seed);
    let triples: Vec<(Vid, Vid, u32)> = (0..n - 1)
        .map(|i| (i as Vid, i as Vid + 1, weights.sample(&mut rng)))
        .collect();
    Graph::build(n, &triples, true, false)
}

/// rows x cols lattice, 4-neighbor, both directions; coordinates are the
/// (row, col) positions.
pub fn grid_graph(
    rows: usize,
    cols: usize,
    weights: WeightGen,
    seed: u64,
) -> Result<(Graph, CoordinateTable)> {
    if rows < 2 || cols < 2 {
        return Err(Error::Domain("grid needs rows, cols >= 2".into()));
    }
    weights.validate()?;
    let n = rows * cols;
    let mut rng = SplitMix64::new(seed);
    let at = |r: usize, c: usize| (r * cols + c) as Vid;
    let mut triples = Vec::with_capacity(2 * n);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                triples.push((at(r, c), at(r, c + 1), weights.sample(&mut rng)));
            }
            if r + 1 < rows {
                triples.push((at(r, c), at(r + 1, c), weights.sample(&mut rng)));
            }
        }
    }
    let g = Graph::build(n, &triples, true, false)?;
    let coords = CoordinateTable::new(
        (0..n)
            .map(|v| ((v / cols) as f64, (v % cols) as f64))
            .collect(),
    )?;
    Ok((g, coords))
}

/// `m` directed edges sampled uniformly with replacement (parallel edges kept,
/// self-loops rejected and resampled).
pub fn uniform_random_triples(
    n: usize,
    m: usize,
    w_lo: u32,
    w_hi: u32,
    seed: u64,
) -> Result<super::io::EdgeList> {
    if n < 2 || m == 0 {
        return Err(Error::Domain(
            "uniform_random needs n >= 2 and m >= 1".into(),
        ));
    }
    let weights = WeightGen::Uniform(w_lo, w_hi);
    weights.validate()?;
    let mut rng = SplitMix64::new(seed);
    let mut triples = Vec::with_capacity(m);
    while triples.len() < m {
        let src = rng.next_below(n as u64) as Vid;
        let dst = rng.next_below(n as u64) as Vid;
        if src == dst {
            continue;
        }
        triples.push((src, dst, weights.sample(&mut rng)));
    }
    Ok((n, triples))
}

pub fn uniform_random_graph(
    n: usize,
    m: usize,
    w_lo: u32,
    w_hi: u32,
    seed: u64,
    symmetrize: bool,
    build_in_edges: bool,
) -> Result<Graph> {
    let (n, triples) = uniform_random_triples(n, m, w_lo, w_hi, seed)?;
    Graph::build(n, &triples, symmetrize, build_in_edges)
}

/// Random bipartite incidence instance for set cover. Vertices
/// `[0, num_sets)` are sets, `[num_sets, num_sets + num_elements)` are
/// elements; each element is put into 1..=max_sets_per_element random sets.
/// Built symmetric so element->set edges are available.
pub fn bipartite_incidence(
    num_sets: usize,
    num_elements: usize,
    max_sets_per_element: usize,
    seed: u64,
) -> Result<Graph> {
    if num_sets == 0 || num_elements == 0 || max_sets_per_element == 0 {
        return Err(Error::Domain(
            "bipartite instance needs non-zero sizes".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    let mut triples = Vec::new();
    for e in 0..num_elements {
        let memberships = 1 + rng.next_below(max_sets_per_element as u64) as usize;
        let element = (num_sets + e) as Vid;
        for _ in 0..memberships {
            let s = rng.next_below(num_sets as u64) as Vid;
            triples.push((s, element, 1));
        }
    }
    Graph::build(num_sets + num_elements, &triples, true, false)
}
