//! Linear-time cut sparsification of an unweighted graph.
//!
//! Three phases:
//!
//! 1. If `m <= 2ρn` the graph is its own skeleton. Otherwise the first
//!    `⌈2ρ⌉` NI forests form `F_0` and enter the skeleton at weight 1; the
//!    rest is `Y_0`.
//! 2. While `|Y_i| > 2ρn`: keep each edge of `Y_i` with probability 1/2 to
//!    get `X_{i+1}`, then split `X_{i+1}` into a sparse part `F_{i+1}` and a
//!    remainder `Y_{i+1}` whose edges are all `k_{i+1}`-heavy in
//!    `(V, X_{i+1})`, where `k_i = ρ·2^(i+1)`.
//! 3. Each edge of `F_i` (`i >= 1`) draws `r ~ Binomial(2^i, p_i)` and enters
//!    at weight `r / p_i` when `r > 0`; the final remainder `Y_K` enters at
//!    weight `2^K`.
//!
//! `ρ = rho_constant · ln n / ε²` and `p_i = min(sampling_constant · ln n /
//! (λ_i ε²), 1)` with `λ_i = ρ·4^i`.

mod trace;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{contract, EdgeId, Multigraph, VertexPartition, WeightedGraph};
use crate::ni_forest::decompose;

pub use trace::{Constants, LevelRecord, SparsifyTrace, TERMINAL_WEIGHT_RULE};

pub const DEFAULT_RHO_CONSTANT: f64 = 1014.0 / 0.38;
pub const DEFAULT_SAMPLING_CONSTANT: f64 = 9216.0 / 0.38;
pub const DEFAULT_SEED: u64 = 0x5eed_c075;
/// Generator family behind every random draw of a run.
pub const RNG_FAMILY: &str = "chacha8";

/// Levels beyond this would overflow the `2^i` binomial trial count.
const MAX_LEVEL: usize = 62;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyConfig {
    pub epsilon: f64,
    pub rho_constant: f64,
    pub sampling_constant: f64,
    pub seed: u64,
    /// `None` means `2·⌈log2(m + 2)⌉ + 64`.
    pub max_iterations: Option<usize>,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        SparsifyConfig {
            epsilon: 1.0,
            rho_constant: DEFAULT_RHO_CONSTANT,
            sampling_constant: DEFAULT_SAMPLING_CONSTANT,
            seed: DEFAULT_SEED,
            max_iterations: None,
        }
    }
}

impl SparsifyConfig {
    pub fn new(epsilon: f64) -> Self {
        SparsifyConfig {
            epsilon,
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_constants(mut self, rho_constant: f64, sampling_constant: f64) -> Self {
        self.rho_constant = rho_constant;
        self.sampling_constant = sampling_constant;
        self
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = Some(cap);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} not in (0, 1]",
                self.epsilon
            )));
        }
        for (name, c) in [
            ("rho_constant", self.rho_constant),
            ("sampling_constant", self.sampling_constant),
        ] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} {c} must be positive")));
            }
        }
        if self.max_iterations == Some(0) {
            return Err(Error::InvalidConfig(
                "max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, edge_count: usize) -> usize {
        self.max_iterations.unwrap_or_else(|| {
            let bits = ((edge_count + 2) as f64).log2().ceil() as usize;
            2 * bits + 64
        })
    }
}

/// `ρ = rho_constant · ln n / ε²`.
pub fn compute_rho(n: usize, config: &SparsifyConfig) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    Ok(config.rho_constant * (n as f64).ln() / (config.epsilon * config.epsilon))
}

/// Number of leading NI forests kept at weight 1.
pub fn phase1_forest_count(rho: f64) -> usize {
    (2.0 * rho).ceil() as usize
}

/// Splits `E` into the first `⌈2ρ⌉` NI forests (`F_0`) and the rest (`Y_0`).
/// Both come back in increasing edge-id order.
pub fn phase1(graph: &Multigraph, rho: f64) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let labeling = decompose(graph);
    let keep = phase1_forest_count(rho);
    (labeling.prefix_edges(keep), labeling.suffix_edges(keep))
}

/// Result of splitting one sample `X_i` into a sparse part and a heavy remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyReduction {
    /// Surviving edges `E_c` once `|E_c| <= 2k|V_c|`; increasing id order.
    pub f: Vec<EdgeId>,
    /// Edges absorbed into super-vertices; increasing id order.
    pub y: Vec<EdgeId>,
    pub phases: usize,
    pub supervertices: usize,
    /// `|E_c|` on entry and after every contraction phase.
    pub edge_counts: Vec<usize>,
}

/// Index of the NI forest contracted in each phase of [`reduce_to_heavy`].
///
/// Forest `⌊k⌋ + 1` is the first whose edges are guaranteed `k`-heavy
/// (their endpoints are joined in `⌊k⌋ + 1 >= ⌈k⌉` forests), and the
/// `⌊k⌋` forests left behind hold at most `k|V_c| < |E_c|/2` edges.
pub fn contraction_forest(k: f64) -> usize {
    k.floor() as usize + 1
}

/// Starting from `G_c = (V, X)`, repeatedly builds NI forests of `G_c` and
/// contracts forest [`contraction_forest`]`(k)` until `|E_c| <= 2k|V_c|`.
/// Every edge absorbed by a contraction is `k`-heavy in `(V, X)`.
///
/// `x` is a subset of `graph`'s edge ids; `k` must be positive.
pub fn reduce_to_heavy(graph: &Multigraph, x: &[EdgeId], k: f64) -> HeavyReduction {
    assert!(
        k > 0.0 && k.is_finite(),
        "heaviness threshold must be positive, got {k}"
    );
    let mut ids = x.to_vec();
    if !ids.windows(2).all(|w| w[0] < w[1]) {
        ids.sort_unstable();
        ids.dedup();
    }
    let x_sorted = ids.clone();
    let target = contraction_forest(k);

    let mut current = graph.edge_subgraph(&ids);
    let mut edge_counts = vec![ids.len()];
    let mut phases = 0;
    while current.edge_count() as f64 > 2.0 * k * current.vertex_count() as f64 {
        let labeling = decompose(&current);
        let mut dsu = DisjointSets::new(current.vertex_count());
        for (e, &(a, b)) in current.edges().iter().enumerate() {
            if labeling.index(e) == target {
                dsu.union(a, b);
            }
        }
        let partition = VertexPartition::from_dsu(&mut dsu);
        let (next, edge_map) = contract(&current, &partition).expect("partition sized to graph");
        // contraction keeps surviving edges in order, so `ids` stays sorted
        ids = edge_map
            .iter()
            .zip(&ids)
            .filter_map(|(kept, &id)| kept.map(|_| id))
            .collect();
        current = next;
        phases += 1;
        edge_counts.push(ids.len());
    }

    let mut y = Vec::with_capacity(x_sorted.len() - ids.len());
    let mut survivors = ids.iter().peekable();
    for &e in &x_sorted {
        if survivors.peek() == Some(&&e) {
            survivors.next();
        } else {
            y.push(e);
        }
    }
    HeavyReduction {
        f: ids,
        y,
        phases,
        supervertices: current.vertex_count(),
        edge_counts,
    }
}

/// Keeps each edge independently with probability 1/2, one draw per edge in
/// input order.
pub fn half_sample<R: Rng + ?Sized>(y: &[EdgeId], rng: &mut R) -> Vec<EdgeId> {
    y.iter().copied().filter(|_| rng.random::<bool>()).collect()
}

/// `λ_i = ρ·4^i`, shared by every edge of `F_i`.
pub fn level_strength(rho: f64, level: usize) -> f64 {
    rho * 4f64.powi(level as i32)
}

/// `k_i = ρ·2^(i+1)`.
pub fn level_threshold(rho: f64, level: usize) -> f64 {
    rho * 2f64.powi(level as i32 + 1)
}

/// `p_i = min(sampling_constant · ln n / (λ_i ε²), 1)`.
pub fn sampling_probability(config: &SparsifyConfig, n: usize, rho: f64, level: usize) -> f64 {
    let lambda = level_strength(rho, level);
    let p = config.sampling_constant * (n as f64).ln() / (lambda * config.epsilon * config.epsilon);
    p.min(1.0)
}

/// One level's worth of edges for [`final_sample`].
#[derive(Debug, Clone, Copy)]
pub struct LevelEdges<'a> {
    pub level: usize,
    pub edges: &'a [EdgeId],
}

/// Replaces every edge of `F_i` by `2^i` copies kept with probability `p_i`
/// and weighted `1/p_i`: draws `r ~ Binomial(2^i, p_i)` and emits
/// `(e, r / p_i)` when `r > 0`. Levels are consumed in the order given, edges
/// in the order listed. Level 0 is not accepted.
pub fn final_sample<R: Rng + ?Sized>(
    levels: &[LevelEdges<'_>],
    config: &SparsifyConfig,
    n: usize,
    rng: &mut R,
) -> Result<Vec<(EdgeId, f64)>> {
    let rho = compute_rho(n, config)?;
    let mut out = Vec::new();
    for lvl in levels {
        if lvl.level == 0 || lvl.level > MAX_LEVEL {
            return Err(Error::LevelOutOfRange {
                level: lvl.level,
                terminal: MAX_LEVEL,
            });
        }
        let p = sampling_probability(config, n, rho, lvl.level);
        let trials = 1u64 << lvl.level;
        let binomial = Binomial::new(trials, p)
            .map_err(|e| Error::InvalidConfig(format!("sampling probability {p}: {e}")))?;
        for &e in lvl.edges {
            let r = binomial.sample(rng);
            if r > 0 {
                out.push((e, r as f64 / p));
            }
        }
    }
    Ok(out)
}

/// Wall-clock split of one [`sparsify_timed`] run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub forests: Duration,
    pub levels: Duration,
    pub sampling: Duration,
    pub total: Duration,
}

/// Builds the weighted skeleton and the full per-level trace. Runs with the
/// same graph and config are bit-identical.
pub fn sparsify(
    graph: &Multigraph,
    config: &SparsifyConfig,
) -> Result<(WeightedGraph, SparsifyTrace)> {
    sparsify_timed(graph, config).map(|(h, t, _)| (h, t))
}

pub fn sparsify_timed(
    graph: &Multigraph,
    config: &SparsifyConfig,
) -> Result<(WeightedGraph, SparsifyTrace, PhaseTimings)> {
    let started = Instant::now();
    config.validate()?;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let rho = compute_rho(n, config)?;
    let threshold = 2.0 * rho * n as f64;
    let cap = config.iteration_cap(m);
    let mut timings = PhaseTimings::default();
    let mut trace = SparsifyTrace::new(graph, config, rho, cap);

    if m as f64 <= threshold {
        trace.early_exit = true;
        trace.terminal_y_edges = (0..m).collect();
        timings.total = started.elapsed();
        return Ok((graph.to_weighted(), trace, timings));
    }

    let (f0, y0) = phase1(graph, rho);
    trace.levels.push(LevelRecord {
        level: 0,
        x_edges: (0..m).collect(),
        f_edges: f0,
        y_edges: y0.clone(),
        k: level_threshold(rho, 0),
        lambda: level_strength(rho, 0),
        p: 1.0,
        contraction_phase_count: 0,
        supervertex_count_final: n,
        contraction_edge_counts: vec![m],
    });
    let forests_done = Instant::now();
    timings.forests = forests_done - started;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut y = y0;
    let mut level = 0;
    while y.len() as f64 > threshold {
        if level + 1 > cap.min(MAX_LEVEL) {
            return Err(Error::IterationCapExceeded(cap.min(MAX_LEVEL)));
        }
        let x = half_sample(&y, &mut rng);
        level += 1;
        let k = level_threshold(rho, level);
        let reduction = reduce_to_heavy(graph, &x, k);
        trace.levels.push(LevelRecord {
            level,
            x_edges: x,
            f_edges: reduction.f,
            y_edges: reduction.y.clone(),
            k,
            lambda: level_strength(rho, level),
            p: sampling_probability(config, n, rho, level),
            contraction_phase_count: reduction.phases,
            supervertex_count_final: reduction.supervertices,
            contraction_edge_counts: reduction.edge_counts,
        });
        y = reduction.y;
    }
    let levels_done = Instant::now();
    timings.levels = levels_done - forests_done;

    let terminal_weight = 2f64.powi(level as i32);
    trace.terminal_level = level;
    trace.terminal_weight = terminal_weight;
    trace.terminal_y_edges = y;

    let sampled_levels: Vec<LevelEdges<'_>> = trace.levels[1..]
        .iter()
        .map(|r| LevelEdges {
            level: r.level,
            edges: &r.f_edges,
        })
        .collect();
    let sampled = final_sample(&sampled_levels, config, n, &mut rng)?;

    // indexed by edge id, so the skeleton comes out in input order without a sort
    let mut weight = vec![0.0; m];
    for &e in &trace.levels[0].f_edges {
        weight[e] = 1.0;
    }
    for (e, w) in sampled {
        weight[e] = w;
    }
    for &e in &trace.terminal_y_edges {
        weight[e] = terminal_weight;
    }
    let skeleton = WeightedGraph::new(
        n,
        graph
            .edges()
            .iter()
            .zip(weight)
            .filter(|&(_, w)| w > 0.0)
            .map(|(&(u, v), w)| (u, v, w))
            .collect(),
    )?;
    timings.sampling = levels_done.elapsed();
    timings.total = started.elapsed();
    Ok((skeleton, trace, timings))
}
