use serde::{Deserialize, Serialize};

use super::{level_strength, level_threshold, SparsifyConfig, RNG_FAMILY};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, WeightedGraph};
use crate::TRACE_SCHEMA_VERSION;

/// How the final remainder `Y_K` is weighted in the skeleton.
pub const TERMINAL_WEIGHT_RULE: &str = "2^K";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub epsilon: f64,
    pub rho_constant: f64,
    pub sampling_constant: f64,
    pub max_iterations: usize,
}

/// Everything decided at one level `i`. Level 0 is the forest split; its
/// `x_edges` is all of `E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub x_edges: Vec<EdgeId>,
    pub f_edges: Vec<EdgeId>,
    pub y_edges: Vec<EdgeId>,
    /// Heaviness threshold `k_i = ρ·2^(i+1)` certified for `y_edges`.
    pub k: f64,
    /// `λ_i = ρ·4^i`.
    pub lambda: f64,
    /// Final sampling probability of `f_edges`; 1 at level 0.
    pub p: f64,
    pub contraction_phase_count: usize,
    pub supervertex_count_final: usize,
    /// `|E_c|` on entry and after every contraction phase.
    pub contraction_edge_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsifyTrace {
    pub schema_version: u32,
    pub rng: String,
    pub seed: u64,
    pub constants: Constants,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub rho: f64,
    pub early_exit: bool,
    pub levels: Vec<LevelRecord>,
    pub terminal_level: usize,
    pub terminal_y_edges: Vec<EdgeId>,
    pub terminal_weight: f64,
    pub terminal_weight_rule: String,
}

impl SparsifyTrace {
    pub(super) fn new(graph: &Multigraph, config: &SparsifyConfig, rho: f64, cap: usize) -> Self {
        SparsifyTrace {
            schema_version: TRACE_SCHEMA_VERSION,
            rng: RNG_FAMILY.to_string(),
            seed: config.seed,
            constants: Constants {
                epsilon: config.epsilon,
                rho_constant: config.rho_constant,
                sampling_constant: config.sampling_constant,
                max_iterations: cap,
            },
            vertex_count: graph.vertex_count(),
            edge_count: graph.edge_count(),
            rho,
            early_exit: false,
            levels: Vec::new(),
            terminal_level: 0,
            terminal_y_edges: Vec::new(),
            terminal_weight: 1.0,
            terminal_weight_rule: TERMINAL_WEIGHT_RULE.to_string(),
        }
    }

    /// `F_level`, empty for levels the run never reached.
    pub fn f_edges(&self, level: usize) -> &[EdgeId] {
        self.levels.get(level).map_or(&[], |r| &r.f_edges)
    }

    /// `D_i = Y_{i-1} \ X_i`: edges discarded by the half-sample entering
    /// level `i`. Together with `F_0..F_K` and `Y_K` these partition `E`.
    pub fn dropped_edges(&self, level: usize) -> Vec<EdgeId> {
        if level == 0 || level >= self.levels.len() {
            return Vec::new();
        }
        let kept = &self.levels[level].x_edges;
        let mut it = kept.iter().peekable();
        self.levels[level - 1]
            .y_edges
            .iter()
            .copied()
            .filter(|e| {
                if it.peek() == Some(&e) {
                    it.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }

    /// `Σ_{i≥1} Σ_{e∈F_i} 2^i / λ_i`.
    pub fn ledger(&self) -> f64 {
        self.levels
            .iter()
            .skip(1)
            .map(|r| r.f_edges.len() as f64 * 2f64.powi(r.level as i32) / r.lambda)
            .sum()
    }

    /// The intermediate weighted graph of level `j`: each `F_i` with `i >= j`
    /// at weight `2^(i-j)` and `Y_K` at `2^(K-j)`. Level 0 is the unsampled
    /// counterpart of the skeleton; on an early exit it is `G` itself.
    pub fn reconstruct_intermediate(&self, graph: &Multigraph, j: usize) -> Result<WeightedGraph> {
        if graph.edge_count() != self.edge_count || graph.vertex_count() != self.vertex_count {
            return Err(Error::SizeMismatch {
                expected: self.edge_count,
                found: graph.edge_count(),
            });
        }
        if j > self.terminal_level {
            return Err(Error::LevelOutOfRange {
                level: j,
                terminal: self.terminal_level,
            });
        }
        let mut weighted: Vec<(EdgeId, f64)> = Vec::new();
        for record in self.levels.iter().filter(|r| r.level >= j) {
            let w = 2f64.powi((record.level - j) as i32);
            weighted.extend(record.f_edges.iter().map(|&e| (e, w)));
        }
        let w = 2f64.powi((self.terminal_level - j) as i32);
        weighted.extend(self.terminal_y_edges.iter().map(|&e| (e, w)));
        weighted.sort_unstable_by_key(|&(e, _)| e);
        let edges = graph.edges();
        WeightedGraph::new(
            self.vertex_count,
            weighted
                .into_iter()
                .map(|(e, w)| (edges[e].0, edges[e].1, w))
                .collect(),
        )
    }

    /// Structural guarantees every run must satisfy, checked from the trace
    /// alone. Returns one message per violation.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let m = self.edge_count;
        let n = self.vertex_count as f64;

        let mut owner = vec![0u32; m];
        let mut mark = |edges: &[EdgeId], what: &str, violations: &mut Vec<String>| {
            for &e in edges {
                if e >= m {
                    violations.push(format!("{what}: edge {e} out of range"));
                } else {
                    owner[e] += 1;
                }
            }
        };
        for r in &self.levels {
            mark(&r.f_edges, &format!("F_{}", r.level), &mut violations);
        }
        mark(&self.terminal_y_edges, "Y_K", &mut violations);
        for i in 1..self.levels.len() {
            mark(&self.dropped_edges(i), &format!("D_{i}"), &mut violations);
        }
        if let Some(e) = owner.iter().position(|&c| c != 1) {
            violations.push(format!(
                "partition: edge {e} lies in {} of F_0..F_K, Y_K, D_1..D_K",
                owner[e]
            ));
        }

        if self.early_exit {
            if !self.levels.is_empty()
                || self.terminal_level != 0
                || self.terminal_y_edges.len() != m
            {
                violations.push("early exit trace must hold all edges in Y_0".into());
            }
            return violations;
        }

        for (i, r) in self.levels.iter().enumerate() {
            if r.level != i {
                violations.push(format!("level record {i} is labelled {}", r.level));
            }
            if !is_disjoint_split(&r.x_edges, &r.f_edges, &r.y_edges) {
                violations.push(format!("level {i}: F and Y do not split X"));
            }
            if i == 0 {
                if r.x_edges.len() != m {
                    violations.push("level 0: X_0 must be E".into());
                }
            } else if !is_subset(&r.x_edges, &self.levels[i - 1].y_edges) {
                violations.push(format!("nesting: X_{i} is not contained in Y_{}", i - 1));
            }
            let k = level_threshold(self.rho, i);
            let lambda = level_strength(self.rho, i);
            if !close(r.k, k) || !close(r.lambda, lambda) {
                violations.push(format!("level {i}: k or lambda off formula"));
            }
            if i >= 1 {
                if r.f_edges.len() as f64 > 2.0 * r.k * r.supervertex_count_final as f64 {
                    violations.push(format!(
                        "level {i}: |F| = {} exceeds 2·k·|V_c| = {}",
                        r.f_edges.len(),
                        2.0 * r.k * r.supervertex_count_final as f64
                    ));
                }
                if r.contraction_edge_counts.len() != r.contraction_phase_count + 1 {
                    violations.push(format!("level {i}: phase counter mismatch"));
                }
                for w in r.contraction_edge_counts.windows(2) {
                    if 2 * w[1] >= w[0] {
                        violations.push(format!(
                            "level {i}: |E_c| went {} -> {} without halving",
                            w[0], w[1]
                        ));
                    }
                }
            }
        }

        match self.levels.last() {
            Some(last) if last.level == self.terminal_level => {
                if last.y_edges != self.terminal_y_edges {
                    violations.push("terminal Y differs from last level's Y".into());
                }
            }
            _ => violations.push("terminal level does not match level records".into()),
        }
        if self.terminal_weight != 2f64.powi(self.terminal_level as i32) {
            violations.push("terminal weight is not 2^K".into());
        }
        let ledger = self.ledger();
        if ledger > 8.0 * n {
            violations.push(format!("ledger {ledger} exceeds 8n = {}", 8.0 * n));
        }
        violations
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

/// Both inputs sorted ascending.
fn is_subset(small: &[EdgeId], big: &[EdgeId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|e| it.any(|b| b == e))
}

fn is_disjoint_split(whole: &[EdgeId], a: &[EdgeId], b: &[EdgeId]) -> bool {
    if a.len() + b.len() != whole.len() {
        return false;
    }
    let mut merged: Vec<EdgeId> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    merged == whole
}
