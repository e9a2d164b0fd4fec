//! Graph substrate: unweighted multigraphs, weighted skeletons, cuts,
//! vertex partitions and contraction.
//!
//! Edge identity is positional. Every edge set handled elsewhere in the crate
//! (forests, sampled levels, heavy remainders) is a set of these positions.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Compressed adjacency: for each vertex, `(neighbour, edge id)` pairs in
/// increasing edge-id order. Parallel edges appear once per copy. Entries are
/// stored as `u32` pairs, which halves the footprint of the largest array the
/// scans touch.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(u32, u32)>,
}

impl Adjacency {
    fn build(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Self {
        assert!(
            vertex_count <= u32::MAX as usize && edges.len() <= u32::MAX as usize,
            "adjacency needs vertex and edge counts below 2^32"
        );
        let mut offsets = vec![0usize; vertex_count + 1];
        for &(u, v) in edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut entries = vec![(0, 0); offsets[vertex_count]];
        for (e, &(u, v)) in edges.iter().enumerate() {
            entries[cursor[u]] = (v as u32, e as u32);
            cursor[u] += 1;
            entries[cursor[v]] = (u as u32, e as u32);
            cursor[v] += 1;
        }
        Adjacency { offsets, entries }
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> impl ExactSizeIterator<Item = (VertexId, EdgeId)> + '_ {
        self.entries[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|&(y, e)| (y as VertexId, e as EdgeId))
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Unweighted undirected multigraph. Parallel edges are allowed and kept
/// distinct by position; self-loops are not.
#[derive(Debug, Clone)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: OnceLock<Adjacency>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        for (e, &(u, v)) in edges.iter().enumerate() {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        edge: e,
                        endpoint,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { edge: e, vertex: u });
            }
        }
        Ok(Self::from_edges_unchecked(vertex_count, edges))
    }

    /// Caller guarantees the invariants checked by [`Multigraph::new`].
    pub(crate) fn from_edges_unchecked(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
    ) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(u, v)| u != v && u < vertex_count && v < vertex_count));
        Multigraph {
            vertex_count,
            edges,
            adjacency: OnceLock::new(),
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_edges_unchecked(vertex_count, Vec::new())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: EdgeId) -> Result<(VertexId, VertexId)> {
        self.edges.get(edge).copied().ok_or(Error::EdgeOutOfRange {
            edge,
            edge_count: self.edges.len(),
        })
    }

    /// Lazily built, cached on first use.
    pub fn adjacency(&self) -> &Adjacency {
        self.adjacency
            .get_or_init(|| Adjacency::build(self.vertex_count, &self.edges))
    }

    pub fn max_degree(&self) -> usize {
        let adj = self.adjacency();
        (0..self.vertex_count)
            .map(|v| adj.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// The spanning subgraph `(V, edges)`; edge `i` of the result is `ids[i]` of `self`.
    pub fn edge_subgraph(&self, ids: &[EdgeId]) -> Multigraph {
        let edges = ids.iter().map(|&e| self.edges[e]).collect();
        Multigraph::from_edges_unchecked(self.vertex_count, edges)
    }

    pub fn to_weighted(&self) -> WeightedGraph {
        WeightedGraph {
            vertex_count: self.vertex_count,
            edges: self.edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(),
        }
    }
}

/// Undirected graph with strictly positive real edge weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId, f64)>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId, f64)>) -> Result<Self> {
        for (e, &(u, v, w)) in edges.iter().enumerate() {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(Error::EndpointOutOfRange {
                        edge: e,
                        endpoint,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { edge: e, vertex: u });
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeight { edge: e, weight: w });
            }
        }
        Ok(WeightedGraph {
            vertex_count,
            edges,
        })
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(VertexId, VertexId, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }
}

/// Anything whose cut function can be evaluated: a vertex count plus weighted edges.
pub trait CutFunction {
    fn vertex_count(&self) -> usize;
    fn weighted_edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_;
}

impl CutFunction for Multigraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn weighted_edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.edges.iter().map(|&(u, v)| (u, v, 1.0))
    }
}

impl CutFunction for WeightedGraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn weighted_edges(&self) -> impl Iterator<Item = (VertexId, VertexId, f64)> + '_ {
        self.edges.iter().copied()
    }
}

/// A nontrivial bipartition of the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    sides: Vec<bool>,
}

impl Cut {
    pub fn new(sides: Vec<bool>) -> Result<Self> {
        if !sides.iter().any(|&s| s) || sides.iter().all(|&s| s) {
            return Err(Error::InvalidCut("both sides must be nonempty".into()));
        }
        Ok(Cut { sides })
    }

    /// Vertices in `members` go to side `true`, everything else to `false`.
    pub fn from_set(vertex_count: usize, members: &[VertexId]) -> Result<Self> {
        let mut sides = vec![false; vertex_count];
        for &v in members {
            if v >= vertex_count {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    vertex_count,
                });
            }
            sides[v] = true;
        }
        Cut::new(sides)
    }

    /// Bit `i` of `mask` places vertex `i` on side `true`.
    pub(crate) fn from_mask(vertex_count: usize, mask: u64) -> Self {
        Cut {
            sides: (0..vertex_count).map(|v| mask >> v & 1 == 1).collect(),
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.sides.len()
    }

    #[inline]
    pub fn side(&self, v: VertexId) -> bool {
        self.sides[v]
    }

    pub fn sides(&self) -> &[bool] {
        &self.sides
    }

    #[inline]
    pub fn separates(&self, u: VertexId, v: VertexId) -> bool {
        self.sides[u] != self.sides[v]
    }

    pub fn flipped(&self) -> Cut {
        Cut {
            sides: self.sides.iter().map(|s| !s).collect(),
        }
    }
}

/// Total weight of edges with endpoints on opposite sides of `cut`.
pub fn cut_weight<G: CutFunction + ?Sized>(graph: &G, cut: &Cut) -> Result<f64> {
    if cut.vertex_count() != graph.vertex_count() {
        return Err(Error::SizeMismatch {
            expected: graph.vertex_count(),
            found: cut.vertex_count(),
        });
    }
    Ok(graph
        .weighted_edges()
        .filter(|&(u, v, _)| cut.separates(u, v))
        .map(|(_, _, w)| w)
        .sum())
}

/// Labels every vertex with a block in `0..block_count`; every label is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    block_id: Vec<usize>,
    block_count: usize,
}

impl VertexPartition {
    pub fn new(block_id: Vec<usize>) -> Result<Self> {
        let block_count = block_id.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut used = vec![false; block_count];
        for &b in &block_id {
            used[b] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidPartition(format!(
                "label {missing} is unused"
            )));
        }
        Ok(VertexPartition {
            block_id,
            block_count,
        })
    }

    pub fn identity(vertex_count: usize) -> Self {
        VertexPartition {
            block_id: (0..vertex_count).collect(),
            block_count: vertex_count,
        }
    }

    pub(crate) fn from_dsu(dsu: &mut DisjointSets) -> Self {
        let (block_id, block_count) = dsu.labels();
        VertexPartition {
            block_id,
            block_count,
        }
    }

    #[inline]
    pub fn block_of(&self, v: VertexId) -> usize {
        self.block_id[v]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_id
    }

    #[inline]
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.block_id.len()
    }
}

pub fn connected_components(graph: &Multigraph) -> VertexPartition {
    let mut dsu = DisjointSets::new(graph.vertex_count());
    for &(u, v) in graph.edges() {
        dsu.union(u, v);
    }
    VertexPartition::from_dsu(&mut dsu)
}

/// Merges each block of `partition` into a single vertex. Edges inside a block
/// are dropped; the rest keep their relative order. `edge_map[e]` is the id of
/// original edge `e` in the contracted graph, or `None` if it was dropped.
pub fn contract(
    graph: &Multigraph,
    partition: &VertexPartition,
) -> Result<(Multigraph, Vec<Option<EdgeId>>)> {
    if partition.vertex_count() != graph.vertex_count() {
        return Err(Error::SizeMismatch {
            expected: graph.vertex_count(),
            found: partition.vertex_count(),
        });
    }
    let mut edges = Vec::with_capacity(graph.edge_count());
    let mut edge_map = Vec::with_capacity(graph.edge_count());
    for &(u, v) in graph.edges() {
        let (bu, bv) = (partition.block_of(u), partition.block_of(v));
        if bu == bv {
            edge_map.push(None);
        } else {
            edge_map.push(Some(edges.len()));
            edges.push((bu, bv));
        }
    }
    Ok((
        Multigraph::from_edges_unchecked(partition.block_count(), edges),
        edge_map,
    ))
}
