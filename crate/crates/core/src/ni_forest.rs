//! Nagamochi–Ibaraki forest decomposition.
//!
//! A single maximum-adjacency scan labels every edge with a forest index.
//! Forest `T_j` (the edges labelled `j`) is a spanning forest of the graph
//! left after removing `T_1, ..., T_{j-1}`, so two vertices joined in `T_j`
//! are joined in every earlier forest as well and have at least `j`
//! edge-disjoint paths between them.

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestLabeling {
    forest_index: Vec<usize>,
    max_index: usize,
}

impl ForestLabeling {
    /// Forest index (1-based) of `edge`.
    #[inline]
    pub fn index(&self, edge: EdgeId) -> usize {
        self.forest_index[edge]
    }

    pub fn indices(&self) -> &[usize] {
        &self.forest_index
    }

    #[inline]
    pub fn max_index(&self) -> usize {
        self.max_index
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.forest_index.len()
    }

    /// Edges of forest `T_j`, in increasing id order.
    pub fn forest(&self, j: usize) -> Vec<EdgeId> {
        self.edges_where(|idx| idx == j)
    }

    /// Edges of `T_1 ∪ ... ∪ T_j`. `j = 0` gives the empty set.
    pub fn prefix_edges(&self, j: usize) -> Vec<EdgeId> {
        self.edges_where(|idx| idx <= j)
    }

    /// Edges of `T_{j+1} ∪ T_{j+2} ∪ ...`, the complement of [`Self::prefix_edges`].
    pub fn suffix_edges(&self, j: usize) -> Vec<EdgeId> {
        self.edges_where(|idx| idx > j)
    }

    fn edges_where(&self, keep: impl Fn(usize) -> bool) -> Vec<EdgeId> {
        self.forest_index
            .iter()
            .enumerate()
            .filter(|&(_, &idx)| keep(idx))
            .map(|(e, _)| e)
            .collect()
    }

    /// Sizes `|T_1|, |T_2|, ..., |T_max|`.
    pub fn forest_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.max_index];
        for &idx in &self.forest_index {
            sizes[idx - 1] += 1;
        }
        sizes
    }

    /// Largest `j` such that `u` and `v` are connected inside forest `T_j`
    /// (0 when they are disconnected in the whole graph). Forests form a
    /// prefix: the pair is connected in every `T_i` with `i` at most this value
    /// and in none after it.
    pub fn prefix_connectivity(
        &self,
        graph: &Multigraph,
        u: VertexId,
        v: VertexId,
    ) -> Result<usize> {
        let n = graph.vertex_count();
        for w in [u, v] {
            if w >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    vertex_count: n,
                });
            }
        }
        if u == v {
            return Err(Error::SameVertex(u));
        }
        if graph.edge_count() != self.forest_index.len() {
            return Err(Error::SizeMismatch {
                expected: graph.edge_count(),
                found: self.forest_index.len(),
            });
        }
        let mut by_forest = vec![Vec::new(); self.max_index];
        for (e, &idx) in self.forest_index.iter().enumerate() {
            by_forest[idx - 1].push(e);
        }
        let mut connected = 0;
        for (j, forest) in by_forest.iter().enumerate() {
            let mut dsu = DisjointSets::new(n);
            for &e in forest {
                let (a, b) = graph.edges()[e];
                dsu.union(a, b);
            }
            if dsu.find(u) != dsu.find(v) {
                break;
            }
            connected = j + 1;
        }
        Ok(connected)
    }
}

const NIL: u32 = u32::MAX;

/// Intrusive doubly linked buckets keyed by scan rank. Links are `u32` to
/// keep the per-vertex state small enough to stay in cache.
struct BucketQueue {
    head: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
}

impl BucketQueue {
    fn new(vertex_count: usize, max_rank: usize) -> Self {
        BucketQueue {
            head: vec![NIL; max_rank + 1],
            next: vec![NIL; vertex_count],
            prev: vec![NIL; vertex_count],
        }
    }

    fn push(&mut self, bucket: usize, v: u32) {
        let old = self.head[bucket];
        self.next[v as usize] = old;
        self.prev[v as usize] = NIL;
        if old != NIL {
            self.prev[old as usize] = v;
        }
        self.head[bucket] = v;
    }

    fn remove(&mut self, bucket: usize, v: u32) {
        let (p, q) = (self.prev[v as usize], self.next[v as usize]);
        if p == NIL {
            self.head[bucket] = q;
        } else {
            self.next[p as usize] = q;
        }
        if q != NIL {
            self.prev[q as usize] = p;
        }
    }
}

/// Labels every edge with its NI forest index in `O(n + m)` time.
///
/// Vertices are scanned in maximum-adjacency order. Scanning `x` walks its
/// edges in id order; each edge to an unscanned `y` bumps `y`'s rank and takes
/// the new rank as its label, so parallel copies get consecutive labels.
/// Ties in rank go to the most recently bumped vertex, and new components
/// start at the lowest unscanned vertex id, so output depends only on the
/// edge sequence.
///
/// # Panics
///
/// If the vertex count or the maximum degree reaches `u32::MAX`.
pub fn decompose(graph: &Multigraph) -> ForestLabeling {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let adj = graph.adjacency();
    let max_rank = graph.max_degree();
    assert!(
        n < NIL as usize && max_rank < NIL as usize,
        "decompose needs vertex count and degree below 2^32 - 1"
    );

    let mut rank = vec![0u32; n];
    let mut scanned = vec![false; n];
    let mut label = vec![0usize; m];
    let mut queue = BucketQueue::new(n, max_rank);
    for v in (0..n as u32).rev() {
        queue.push(0, v);
    }

    let mut top = 0usize;
    let mut max_index = 0usize;
    for _ in 0..n {
        while queue.head[top] == NIL {
            top -= 1;
        }
        let x = queue.head[top];
        queue.remove(top, x);
        scanned[x as usize] = true;
        for (y, e) in adj.neighbors(x as usize) {
            if scanned[y] {
                continue;
            }
            let r = rank[y] as usize;
            queue.remove(r, y as u32);
            rank[y] += 1;
            label[e] = r + 1;
            queue.push(r + 1, y as u32);
            top = top.max(r + 1);
            max_index = max_index.max(r + 1);
        }
    }

    ForestLabeling {
        forest_index: label,
        max_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Multigraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Multigraph::new(n, edges).unwrap()
    }

    fn path(n: usize) -> Multigraph {
        Multigraph::new(n, (1..n).map(|v| (v - 1, v)).collect()).unwrap()
    }

    #[test]
    fn path_is_a_single_forest() {
        let l = decompose(&path(4));
        assert_eq!(l.indices(), &[1, 1, 1]);
        assert_eq!(l.prefix_connectivity(&path(4), 0, 3).unwrap(), 1);
    }

    #[test]
    fn triangle_labels() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let l = decompose(&g);
        let mut sorted = l.indices().to_vec();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 2]);
    }

    #[test]
    fn k4_forest_sizes_forced() {
        let k4 = complete(4);
        let l = decompose(&k4);
        assert_eq!(l.forest_sizes(), vec![3, 2, 1]);
        assert_eq!(l.prefix_edges(1).len(), 3);
        assert_eq!(l.prefix_edges(0), Vec::<usize>::new());
        assert_eq!(l.prefix_edges(l.max_index()).len(), 6);
        assert_eq!(l.prefix_edges(10).len(), 6);
        // T_3 is a single edge and T_2 a 2-edge path, so the per-pair values
        // are forced to {3, 2, 2, 1, 1, 1} whatever the tie-breaking.
        let mut per_pair = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                per_pair.push(l.prefix_connectivity(&k4, u, v).unwrap());
            }
        }
        per_pair.sort();
        assert_eq!(per_pair, vec![1, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn parallel_copies_take_consecutive_labels() {
        let g = Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2), (0, 1)]).unwrap();
        let l = decompose(&g);
        let mut copies: Vec<usize> = [0, 1, 3].iter().map(|&e| l.index(e)).collect();
        copies.sort();
        assert_eq!(copies, vec![1, 2, 3]);
        assert!(l.max_index() <= g.max_degree());
    }

    #[test]
    fn disconnected_and_errors() {
        let g = Multigraph::empty(2);
        let l = decompose(&g);
        assert_eq!(l.max_index(), 0);
        assert_eq!(l.prefix_connectivity(&g, 0, 1).unwrap(), 0);
        assert_eq!(l.prefix_connectivity(&g, 1, 1), Err(Error::SameVertex(1)));
        assert!(l.prefix_connectivity(&g, 0, 5).is_err());
    }
}
