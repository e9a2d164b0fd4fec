//! Verification oracle: cut-error measurement between a graph and a weighted
//! skeleton, and capped unit-capacity max-flow for heaviness checks.
//!
//! Exact mode walks every nontrivial cut in Gray-code order, so each step
//! moves one vertex and updates both cut weights from its incident edges.
//! The walk is split into fixed chunks that restart from a direct evaluation;
//! the report is identical in sequential and parallel execution.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cut_weight, Cut, CutFunction, EdgeId, Multigraph, VertexId, WeightedGraph};
use crate::par::{self, Execution};
use crate::REPORT_SCHEMA_VERSION;

/// Largest vertex count accepted by exhaustive enumeration.
pub const MAX_EXACT_VERTICES: usize = 24;

const GRAY_CHUNK: u64 = 1 << 12;
const SAMPLE_CHUNK: u64 = 1 << 10;

fn check_enumerable(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if n > MAX_EXACT_VERTICES {
        return Err(Error::TooManyVertices {
            vertex_count: n,
            max: MAX_EXACT_VERTICES,
        });
    }
    Ok(())
}

/// Every nontrivial bipartition of `n` vertices exactly once, vertex 0 always
/// on side `false`: `2^(n-1) - 1` cuts.
pub fn enumerate_cuts(n: usize) -> Result<impl Iterator<Item = Cut>> {
    check_enumerable(n)?;
    Ok((1u64..1 << (n - 1)).map(move |mask| Cut::from_mask(n, mask << 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "samples")]
pub enum CutMode {
    Exact,
    Sampled(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutErrorReport {
    pub schema_version: u32,
    pub mode: CutMode,
    /// Max over examined cuts with nonzero weight in the reference graph of
    /// `|w_h(C) - w_g(C)| / w_g(C)`.
    pub max_relative_error: f64,
    /// First cut (in examination order) attaining the maximum.
    pub argmax_cut: Option<Cut>,
    pub cuts_examined: u64,
    /// Examined cuts skipped because the reference graph has no edge across them.
    pub zero_weight_cuts: u64,
}

#[derive(Debug, Clone)]
struct Partial {
    max_error: f64,
    argmax: Option<u64>,
    examined: u64,
    zero: u64,
}

impl Partial {
    fn empty() -> Self {
        Partial {
            max_error: 0.0,
            argmax: None,
            examined: 0,
            zero: 0,
        }
    }

    #[inline]
    fn observe(&mut self, key: u64, reference: f64, candidate: f64) {
        self.examined += 1;
        if reference == 0.0 {
            self.zero += 1;
            return;
        }
        let err = (candidate - reference).abs() / reference;
        if self.argmax.is_none() || err > self.max_error {
            self.max_error = err;
            self.argmax = Some(key);
        }
    }

    /// Left-biased merge: `self` precedes `other` in examination order.
    fn merge(mut self, other: Partial) -> Partial {
        if other.argmax.is_some() && (self.argmax.is_none() || other.max_error > self.max_error) {
            self.max_error = other.max_error;
            self.argmax = other.argmax;
        }
        self.examined += other.examined;
        self.zero += other.zero;
        self
    }
}

type WeightedAdjacency = Vec<Vec<(VertexId, f64)>>;

fn weighted_adjacency<G: CutFunction>(graph: &G) -> WeightedAdjacency {
    let mut adj = vec![Vec::new(); graph.vertex_count()];
    for (u, v, w) in graph.weighted_edges() {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    adj
}

#[inline]
fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

fn mask_weight(edges: &[(VertexId, VertexId, f64)], mask: u64) -> f64 {
    edges
        .iter()
        .filter(|&&(u, v, _)| (mask >> u & 1) != (mask >> v & 1))
        .map(|e| e.2)
        .sum()
}

fn exact_chunk(
    g_edges: &[(VertexId, VertexId, f64)],
    h_edges: &[(VertexId, VertexId, f64)],
    g_adj: &WeightedAdjacency,
    h_adj: &WeightedAdjacency,
    range: std::ops::Range<u64>,
) -> Partial {
    let mut part = Partial::empty();
    // Gray index 0 is the trivial cut; vertex 0 stays on side false (bit 0 clear).
    let start = range.start.max(1);
    if start >= range.end {
        return part;
    }
    let mut mask = gray(start) << 1;
    let mut wg = mask_weight(g_edges, mask);
    let mut wh = mask_weight(h_edges, mask);
    part.observe(start, wg, wh);
    for t in start + 1..range.end {
        let v = t.trailing_zeros() as usize + 1;
        mask ^= 1 << v;
        let side = mask >> v & 1;
        for &(w, weight) in &g_adj[v] {
            if mask >> w & 1 != side {
                wg += weight;
            } else {
                wg -= weight;
            }
        }
        for &(w, weight) in &h_adj[v] {
            if mask >> w & 1 != side {
                wh += weight;
            } else {
                wh -= weight;
            }
        }
        part.observe(t, wg, wh);
    }
    part
}

/// Measures how far the cut function of `h` is from that of `g`.
///
/// `Exact` examines all `2^(n-1) - 1` cuts and needs `n <= 24`. `Sampled(k)`
/// draws `k` uniform nontrivial bipartitions from a generator seeded with
/// `seed`. The reference graph's cut weight is the denominator; cuts it does
/// not cross are counted in `zero_weight_cuts` and skipped.
pub fn max_relative_cut_error<G, H>(
    g: &G,
    h: &H,
    mode: CutMode,
    seed: u64,
    exec: Execution,
) -> Result<CutErrorReport>
where
    G: CutFunction + Sync,
    H: CutFunction + Sync,
{
    let n = g.vertex_count();
    if h.vertex_count() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: h.vertex_count(),
        });
    }
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let g_edges: Vec<_> = g.weighted_edges().collect();
    let h_edges: Vec<_> = h.weighted_edges().collect();

    let (partial, argmax_cut) = match mode {
        CutMode::Exact => {
            check_enumerable(n)?;
            let g_adj = weighted_adjacency(g);
            let h_adj = weighted_adjacency(h);
            let total = 1u64 << (n - 1);
            let partial = par::map_chunks(exec, total, GRAY_CHUNK, |range| {
                exact_chunk(&g_edges, &h_edges, &g_adj, &h_adj, range)
            })
            .into_iter()
            .fold(Partial::empty(), Partial::merge);
            let cut = partial.argmax.map(|t| Cut::from_mask(n, gray(t) << 1));
            (partial, cut)
        }
        CutMode::Sampled(samples) => {
            let chunks = par::map_chunks(exec, samples, SAMPLE_CHUNK, |range| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(range.start / SAMPLE_CHUNK);
                let mut part = Partial::empty();
                let mut cuts = Vec::with_capacity((range.end - range.start) as usize);
                for _ in range {
                    let cut = random_cut(n, &mut rng);
                    let wg = cut_weight(g, &cut).expect("sizes checked");
                    let wh = cut_weight(h, &cut).expect("sizes checked");
                    part.observe(cuts.len() as u64, wg, wh);
                    cuts.push(cut);
                }
                let cut = part.argmax.map(|i| cuts.swap_remove(i as usize));
                (part, cut)
            });
            let mut best = Partial::empty();
            let mut best_cut = None;
            for (part, cut) in chunks {
                let improves = part.argmax.is_some()
                    && (best.argmax.is_none() || part.max_error > best.max_error);
                if improves {
                    best_cut = cut;
                }
                best = best.merge(part);
            }
            (best, best_cut)
        }
    };

    Ok(CutErrorReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode,
        max_relative_error: partial.max_error,
        argmax_cut,
        cuts_examined: partial.examined,
        zero_weight_cuts: partial.zero,
    })
}

fn random_cut<R: Rng>(n: usize, rng: &mut R) -> Cut {
    loop {
        let sides: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        if let Ok(cut) = Cut::new(sides) {
            return cut;
        }
    }
}

/// Maximum number of edge-disjoint `s`–`t` paths, counting parallel edges
/// separately, stopped early once it reaches `cap`.
///
/// Shortest augmenting paths on the unit-capacity residual graph; each
/// undirected edge is a pair of opposite arcs sharing one unit.
pub fn max_flow_unit(graph: &Multigraph, s: VertexId, t: VertexId, cap: usize) -> Result<usize> {
    let n = graph.vertex_count();
    for v in [s, t] {
        if v >= n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: n,
            });
        }
    }
    if s == t {
        return Err(Error::SameVertex(s));
    }
    let adj = graph.adjacency();
    let edges = graph.edges();
    // flow[e] is the flow on edge e in its stored (u -> v) direction.
    let mut flow = vec![0i8; edges.len()];
    let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    let mut total = 0;

    while total < cap {
        visited.iter_mut().for_each(|x| *x = false);
        queue.clear();
        visited[s] = true;
        queue.push_back(s);
        'bfs: while let Some(x) = queue.pop_front() {
            for (y, e) in adj.neighbors(x) {
                if visited[y] {
                    continue;
                }
                let forward = edges[e].0 == x;
                let residual = if forward { 1 - flow[e] } else { 1 + flow[e] };
                if residual <= 0 {
                    continue;
                }
                visited[y] = true;
                parent[y] = Some((x, e));
                if y == t {
                    break 'bfs;
                }
                queue.push_back(y);
            }
        }
        if !visited[t] {
            break;
        }
        let mut y = t;
        while y != s {
            let (x, e) = parent[y].expect("bfs tree");
            if edges[e].0 == x {
                flow[e] += 1;
            } else {
                flow[e] -= 1;
            }
            y = x;
        }
        total += 1;
    }
    Ok(total)
}

/// Whether the endpoints of `edge` have max-flow at least `k` in `graph`.
pub fn is_k_heavy(graph: &Multigraph, edge: EdgeId, k: f64) -> Result<bool> {
    let (u, v) = graph.endpoints(edge)?;
    if k <= 0.0 {
        return Ok(true);
    }
    let cap = k.ceil() as usize;
    Ok(max_flow_unit(graph, u, v, cap)? as f64 >= k)
}

/// Cut error between `g` and a skeleton `h`, both treated as cut functions.
/// Convenience for the common exact check on small graphs.
pub fn exact_error(g: &Multigraph, h: &WeightedGraph) -> Result<f64> {
    Ok(max_relative_cut_error(g, h, CutMode::Exact, 0, Execution::Sequential)?.max_relative_error)
}
