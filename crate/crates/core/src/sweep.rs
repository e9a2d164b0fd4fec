//! Monte Carlo sweeps: many independent seeded runs, each measured against
//! its input with the exact cut oracle. Runs are distributed over the
//! execution pool; each run's own enumeration stays sequential.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Multigraph, WeightedGraph};
use crate::oracle::{max_relative_cut_error, CutMode};
use crate::par::{self, Execution};
use crate::sparsifier::{sparsify, SparsifyConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub seed: u64,
    pub early_exit: bool,
    pub terminal_level: usize,
    pub skeleton_edges: usize,
    /// Exact max relative cut error of the skeleton against its input.
    pub skeleton_error: f64,
    /// Exact max relative cut error of each intermediate graph `S_j`
    /// against `(V, X_j)`, for `j = 0..=K`.
    pub intermediate_errors: Vec<f64>,
}

/// Runs `sparsify` once per seed. `graph_for(seed)` builds that run's input;
/// the sparsifier itself is seeded with `seed` as well.
pub fn cut_error_sweep<F>(
    seeds: &[u64],
    base: &SparsifyConfig,
    exec: Execution,
    graph_for: F,
) -> Result<Vec<SweepPoint>>
where
    F: Fn(u64) -> Result<Multigraph> + Sync + Send,
{
    par::map(exec, seeds, |&seed| -> Result<SweepPoint> {
        let graph = graph_for(seed)?;
        let config = base.clone().with_seed(seed);
        let (skeleton, trace) = sparsify(&graph, &config)?;
        let exact = |g: &Multigraph, h: &WeightedGraph| {
            max_relative_cut_error(g, h, CutMode::Exact, 0, Execution::Sequential)
                .map(|r| r.max_relative_error)
        };
        let skeleton_error = exact(&graph, &skeleton)?;
        let mut intermediate_errors = Vec::with_capacity(trace.terminal_level + 1);
        for j in 0..=trace.terminal_level {
            let s_j = trace.reconstruct_intermediate(&graph, j)?;
            let x_j = if trace.early_exit {
                graph.clone()
            } else {
                graph.edge_subgraph(&trace.levels[j].x_edges)
            };
            intermediate_errors.push(exact(&x_j, &s_j)?);
        }
        Ok(SweepPoint {
            seed,
            early_exit: trace.early_exit,
            terminal_level: trace.terminal_level,
            skeleton_edges: skeleton.edge_count(),
            skeleton_error,
            intermediate_errors,
        })
    })
    .into_iter()
    .collect()
}
