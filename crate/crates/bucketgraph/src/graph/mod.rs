//! Immutable graph storage (compressed adjacency with integer weights),
//! vertex subsets (frontiers), and per-vertex coordinate tables.
//!
//! Graphs are built once and then shared read-only across threads. Vertex ids
//! are 32-bit; edge weights are non-negative and bounded by `i32::MAX` so that
//! distances fit the 32-bit signed sentinel convention.

pub mod io;
pub mod synth;

use crate::{Error, Result};

/// Vertex id.
pub type Vid = u32;

/// One directed edge endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub dst: Vid,
    pub weight: u32,
}

/// Compressed adjacency: `offsets` has length `n + 1`, is non-decreasing, and
/// `edges[offsets[v]..offsets[v+1]]` are the edges out of `v`.
#[derive(Debug, Clone)]
pub struct Csr {
    offsets: Vec<usize>,
    edges: Vec<Edge>,
}

impl Csr {
    fn from_triples(n: usize, triples: &[(Vid, Vid, u32)]) -> Csr {
        let mut degree = vec![0usize; n];
        for &(src, _, _) in triples {
            degree[src as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut edges = vec![Edge { dst: 0, weight: 0 }; triples.len()];
        for &(src, dst, weight) in triples {
            let c = &mut cursor[src as usize];
            edges[*c] = Edge { dst, weight };
            *c += 1;
        }
        Csr { offsets, edges }
    }

    #[inline]
    pub fn neighbors(&self, v: Vid) -> &[Edge] {
        &self.edges[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vid) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

/// Immutable weighted graph. Out-edges always present; in-edges present when
/// requested at build time (or aliased to out-edges for symmetric graphs).
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    out: Csr,
    incoming: Option<Csr>,
    symmetric: bool,
}

impl Graph {
    /// Builds a graph from `(src, dst, weight)` triples. Parallel (duplicate)
    /// edges are preserved. With `symmetrize`, the reverse of every edge is
    /// added. With `build_in_edges`, a transposed adjacency is materialized
    /// (skipped for symmetric graphs, where in == out).
    pub fn build(
        num_vertices: usize,
        triples: &[(Vid, Vid, u32)],
        symmetrize: bool,
        build_in_edges: bool,
    ) -> Result<Graph> {
        if num_vertices == 0 {
            return Err(Error::Domain("graph must have at least one vertex".into()));
        }
        if num_vertices > u32::MAX as usize {
            return Err(Error::Domain("vertex count exceeds 32-bit id space".into()));
        }
        for &(src, dst, weight) in triples {
            if src as usize >= num_vertices || dst as usize >= num_vertices {
                return Err(Error::Domain(format!(
                    "edge ({src}, {dst}) out of range for {num_vertices} vertices"
                )));
            }
            if weight > i32::MAX as u32 {
                return Err(Error::Domain(format!(
                    "weight {weight} exceeds the 32-bit signed distance range"
                )));
            }
        }

        let forward;
        let owned;
        let all: &[(Vid, Vid, u32)] = if symmetrize {
            let mut both = Vec::with_capacity(triples.len() * 2);
            both.extend_from_slice(triples);
            both.extend(triples.iter().map(|&(s, d, w)| (d, s, w)));
            owned = both;
            &owned
        } else {
            forward = triples;
            forward
        };

        let out = Csr::from_triples(num_vertices, all);
        let incoming = if build_in_edges && !symmetrize {
            let transposed: Vec<(Vid, Vid, u32)> = all.iter().map(|&(s, d, w)| (d, s, w)).collect();
            Some(Csr::from_triples(num_vertices, &transposed))
        } else {
            None
        };

        Ok(Graph {
            n: num_vertices,
            out,
            incoming,
            symmetric: symmetrize,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Number of directed edges stored (symmetrized edges count twice).
    pub fn num_edges(&self) -> usize {
        self.out.num_edges()
    }

    #[inline]
    pub fn out_neighbors(&self, v: Vid) -> &[Edge] {
        self.out.neighbors(v)
    }

    #[inline]
    pub fn out_degree(&self, v: Vid) -> usize {
        self.out.degree(v)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn has_in_edges(&self) -> bool {
        self.symmetric || self.incoming.is_some()
    }

    /// In-edges of `v`; for symmetric graphs this is the out-adjacency.
    #[inline]
    pub fn in_neighbors(&self, v: Vid) -> &[Edge] {
        if self.symmetric {
            self.out.neighbors(v)
        } else {
            self.incoming
                .as_ref()
                .expect("in-edges not built; construct with build_in_edges")
                .neighbors(v)
        }
    }

    /// All directed edges as triples, in storage order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (Vid, Vid, u32)> + '_ {
        (0..self.n as Vid).flat_map(move |v| {
            self.out
                .neighbors(v)
                .iter()
                .map(move |e| (v, e.dst, e.weight))
        })
    }
}

/// Sum of out-degrees over a frontier; used for buffer sizing.
pub fn out_degree_sum(g: &Graph, s: &VertexSubset) -> usize {
    match s {
        VertexSubset::Sparse { ids, .. } => ids.iter().map(|&v| g.out_degree(v)).sum(),
        VertexSubset::Dense { .. } => s.iter_ids().map(|v| g.out_degree(v)).sum(),
    }
}

/// Target representation for [`subset_convert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetRepr {
    Sparse,
    Dense,
}

/// A frontier: either a list of vertex ids or a membership bitmap over the
/// vertex universe. Sparse lists are duplicate-free except transiently inside
/// the traversal engine when deduplication is disabled.
#[derive(Debug, Clone)]
pub enum VertexSubset {
    Sparse {
        ids: Vec<Vid>,
        universe: usize,
    },
    Dense {
        bits: Vec<u64>,
        universe: usize,
        count: usize,
    },
}

impl VertexSubset {
    pub fn from_ids(ids: Vec<Vid>, universe: usize) -> VertexSubset {
        debug_assert!(ids.iter().all(|&v| (v as usize) < universe));
        VertexSubset::Sparse { ids, universe }
    }

    pub fn empty(universe: usize) -> VertexSubset {
        VertexSubset::Sparse {
            ids: Vec::new(),
            universe,
        }
    }

    pub fn universe(&self) -> usize {
        match self {
            VertexSubset::Sparse { universe, .. } => *universe,
            VertexSubset::Dense { universe, .. } => *universe,
        }
    }

    /// Population count; equals the id count for duplicate-free sparse form.
    pub fn size(&self) -> usize {
        match self {
            VertexSubset::Sparse { ids, .. } => ids.len(),
            VertexSubset::Dense { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn contains(&self, v: Vid) -> bool {
        match self {
            VertexSubset::Sparse { ids, .. } => ids.contains(&v),
            VertexSubset::Dense { bits, .. } => bits[v as usize / 64] >> (v as usize % 64) & 1 == 1,
        }
    }

    pub fn iter_ids(&self) -> Box<dyn Iterator<Item = Vid> + '_> {
        match self {
            VertexSubset::Sparse { ids, .. } => Box::new(ids.iter().copied()),
            VertexSubset::Dense { bits, universe, .. } => Box::new(
                (0..*universe as Vid).filter(move |&v| bits[v as usize / 64] >> (v % 64) & 1 == 1),
            ),
        }
    }

    /// Borrow the sparse id list (panics on dense form).
    pub fn ids(&self) -> &[Vid] {
        match self {
            VertexSubset::Sparse { ids, .. } => ids,
            VertexSubset::Dense { .. } => panic!("ids() on dense subset"),
        }
    }
}

/// Converts a subset between representations, preserving membership and size.
pub fn subset_convert(s: &VertexSubset, target: SubsetRepr) -> VertexSubset {
    match (s, target) {
        (VertexSubset::Sparse { ids, universe }, SubsetRepr::Dense) => {
            let words = universe.div_ceil(64);
            let mut bits = vec![0u64; words];
            for &v in ids {
                bits[v as usize / 64] |= 1u64 << (v as usize % 64);
            }
            VertexSubset::Dense {
                bits,
                universe: *universe,
                count: ids.len(),
            }
        }
        (VertexSubset::Dense { universe, .. }, SubsetRepr::Sparse) => {
            let ids: Vec<Vid> = s.iter_ids().collect();
            VertexSubset::Sparse {
                ids,
                universe: *universe,
            }
        }
        _ => s.clone(),
    }
}

/// Per-vertex planar coordinates, stored as doubles.
#[derive(Debug, Clone)]
pub struct CoordinateTable {
    xy: Vec<(f64, f64)>,
}

impl CoordinateTable {
    pub fn new(xy: Vec<(f64, f64)>) -> Result<CoordinateTable> {
        for &(x, y) in &xy {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Domain("coordinates must be finite".into()));
            }
        }
        Ok(CoordinateTable { xy })
    }

    pub fn len(&self) -> usize {
        self.xy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xy.is_empty()
    }

    pub fn get(&self, v: Vid) -> (f64, f64) {
        self.xy[v as usize]
    }

    pub fn euclid(&self, a: Vid, b: Vid) -> f64 {
        let (ax, ay) = self.get(a);
        let (bx, by) = self.get(b);
        ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::build(3, &[(0, 1, 5), (1, 2, 3)], false, false).unwrap()
    }

    #[test]
    fn build_plain() {
        let g = path3();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.out_neighbors(0), &[Edge { dst: 1, weight: 5 }]);
        assert!(g.out_neighbors(2).is_empty());
    }

    #[test]
    fn build_symmetrized() {
        let g = Graph::build(3, &[(0, 1, 5), (1, 2, 3)], true, false).unwrap();
        assert_eq!(g.num_edges(), 4);
        let mut n1: Vec<_> = g.out_neighbors(1).to_vec();
        n1.sort_by_key(|e| e.dst);
        assert_eq!(
            n1,
            vec![Edge { dst: 0, weight: 5 }, Edge { dst: 2, weight: 3 }]
        );
        assert!(g.has_in_edges());
    }

    #[test]
    fn in_edges_are_transpose() {
        let triples = [(0, 1, 5), (1, 2, 3), (0, 2, 7), (2, 0, 1)];
        let g = Graph::build(3, &triples, false, true).unwrap();
        let mut out: Vec<_> = g.edge_triples().collect();
        let mut inn: Vec<_> = (0..3)
            .flat_map(|v| {
                g.in_neighbors(v)
                    .iter()
                    .map(move |e| (e.dst, v as Vid, e.weight))
            })
            .collect();
        out.sort_unstable();
        inn.sort_unstable();
        assert_eq!(out, inn);
    }

    #[test]
    fn parallel_edges_preserved() {
        let g = Graph::build(2, &[(0, 1, 5), (0, 1, 2)], false, false).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.out_degree(0), 2);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        assert!(Graph::build(2, &[(0, 5, 1)], false, false).is_err());
    }

    #[test]
    fn degree_sum_on_path() {
        let g = Graph::build(3, &[(0, 1, 1), (1, 2, 1)], true, false).unwrap();
        let s = VertexSubset::from_ids(vec![1], 3);
        assert_eq!(out_degree_sum(&g, &s), 2);
        assert_eq!(out_degree_sum(&g, &VertexSubset::empty(3)), 0);
    }

    #[test]
    fn degree_sum_of_full_subset_counts_every_edge() {
        let g =
            crate::graph::synth::uniform_random_graph(64, 512, 1, 1000, 7, false, false).unwrap();
        let all = VertexSubset::from_ids((0..64).collect(), 64);
        assert_eq!(out_degree_sum(&g, &all), 512);
    }

    #[test]
    fn subset_conversion_round_trip() {
        let s = VertexSubset::from_ids(vec![1, 3], 4);
        let d = subset_convert(&s, SubsetRepr::Dense);
        assert_eq!(d.size(), 2);
        assert!(d.contains(1) && d.contains(3));
        assert!(!d.contains(0) && !d.contains(2));
        let back = subset_convert(&d, SubsetRepr::Sparse);
        let mut ids = back.ids().to_vec();
        ids.sort_unstable();
        assert_eq!(ids, vec![1, 3]);
    }

    #[test]
    fn all_zero_dense_converts_to_empty_sparse() {
        let d = VertexSubset::Dense {
            bits: vec![0],
            universe: 10,
            count: 0,
        };
        let s = subset_convert(&d, SubsetRepr::Sparse);
        assert!(s.is_empty());
    }
}
