//! Wall-time scaling runs of the full sparsification pipeline.

use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{generate, Family, GeneratorSpec};
use crate::sparsifier::{sparsify_timed, PhaseTimings, SparsifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    Gnm,
    Gnp,
    RandomRegular,
    Complete,
    Cycle,
    Path,
    TwoCliquesBridge,
    Barbell,
}

impl std::str::FromStr for BenchFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gnm" => BenchFamily::Gnm,
            "gnp" => BenchFamily::Gnp,
            "random-regular" => BenchFamily::RandomRegular,
            "complete" => BenchFamily::Complete,
            "cycle" => BenchFamily::Cycle,
            "path" => BenchFamily::Path,
            "two-cliques-bridge" => BenchFamily::TwoCliquesBridge,
            "barbell" => BenchFamily::Barbell,
            other => return Err(Error::InvalidSpec(format!("unknown family `{other}`"))),
        })
    }
}

impl BenchFamily {
    /// What `size` means: the edge count for `gnm`, the clique size for the
    /// two-clique families, the vertex count otherwise. `avg_degree` fixes the
    /// density of the random families.
    pub fn spec(self, size: usize, avg_degree: f64, seed: u64) -> GeneratorSpec {
        let family = match self {
            BenchFamily::Gnm => {
                let n = ((2.0 * size as f64 / avg_degree).round() as usize).max(2);
                let m = size.min(n * (n - 1) / 2);
                Family::Gnm { n, m }
            }
            BenchFamily::Gnp => Family::Gnp {
                n: size,
                p: (avg_degree / (size.max(2) - 1) as f64).min(1.0),
            },
            BenchFamily::RandomRegular => Family::RandomRegular {
                n: size,
                d: avg_degree.round() as usize,
            },
            BenchFamily::Complete => Family::Complete { n: size },
            BenchFamily::Cycle => Family::Cycle { n: size },
            BenchFamily::Path => Family::Path { n: size },
            BenchFamily::TwoCliquesBridge => Family::TwoCliquesBridge { clique: size },
            BenchFamily::Barbell => Family::Barbell {
                clique: size,
                path: size,
            },
        };
        GeneratorSpec::new(family, seed)
    }
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub family: BenchFamily,
    pub sizes: Vec<usize>,
    pub repeat: usize,
    pub avg_degree: f64,
    pub graph_seed: u64,
    pub config: SparsifyConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub size: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub early_exit: bool,
    pub levels: usize,
    pub skeleton_edges: usize,
    pub median_total_ms: f64,
    pub median_forests_ms: f64,
    pub median_levels_ms: f64,
    pub median_sampling_ms: f64,
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of nothing");
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Generates one graph per size and times `repeat` sparsify runs on it.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    if spec.repeat == 0 {
        return Err(Error::InvalidConfig("repeat must be positive".into()));
    }
    let mut rows = Vec::with_capacity(spec.sizes.len());
    for &size in &spec.sizes {
        let graph = generate(&spec.family.spec(size, spec.avg_degree, spec.graph_seed))?;
        let mut samples: Vec<PhaseTimings> = Vec::with_capacity(spec.repeat);
        let mut last = None;
        for _ in 0..spec.repeat {
            let (skeleton, trace, timings) = sparsify_timed(&graph, &spec.config)?;
            samples.push(timings);
            last = Some((
                skeleton.edge_count(),
                trace.early_exit,
                trace.terminal_level,
            ));
        }
        let (skeleton_edges, early_exit, levels) = last.expect("repeat > 0");
        let pick = |f: fn(&PhaseTimings) -> Duration| {
            median(&mut samples.iter().map(|t| ms(f(t))).collect::<Vec<_>>())
        };
        rows.push(BenchRow {
            size,
            vertex_count: graph.vertex_count(),
            edge_count: graph.edge_count(),
            early_exit,
            levels,
            skeleton_edges,
            median_total_ms: pick(|t| t.total),
            median_forests_ms: pick(|t| t.forests),
            median_levels_ms: pick(|t| t.levels),
            median_sampling_ms: pick(|t| t.sampling),
        });
    }
    Ok(rows)
}

/// Ratios of consecutive median total times.
pub fn time_ratios(rows: &[BenchRow]) -> Vec<f64> {
    rows.windows(2)
        .map(|w| w[1].median_total_ms / w[0].median_total_ms)
        .collect()
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:>10} {:>9} {:>10} {:>6} {:>9} {:>10} {:>10} {:>10} {:>10} {:>7}\n",
        "size",
        "n",
        "m",
        "levels",
        "skeleton",
        "total_ms",
        "forest_ms",
        "levels_ms",
        "sample_ms",
        "ratio"
    );
    let ratios = time_ratios(rows);
    for (i, r) in rows.iter().enumerate() {
        let ratio = if i == 0 {
            "-".to_string()
        } else {
            format!("{:.2}", ratios[i - 1])
        };
        out.push_str(&format!(
            "{:>10} {:>9} {:>10} {:>6} {:>9} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>7}\n",
            r.size,
            r.vertex_count,
            r.edge_count,
            if r.early_exit {
                "exit".to_string()
            } else {
                r.levels.to_string()
            },
            r.skeleton_edges,
            r.median_total_ms,
            r.median_forests_ms,
            r.median_levels_ms,
            r.median_sampling_ms,
            ratio
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn small_bench_runs() {
        let spec = BenchSpec {
            family: BenchFamily::Gnm,
            sizes: vec![2000, 4000],
            repeat: 3,
            avg_degree: 20.0,
            graph_seed: 1,
            config: SparsifyConfig::new(1.0).with_constants(0.05, 0.5),
        };
        let rows = run_bench(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].edge_count, 4000);
        assert_eq!(rows[1].vertex_count, 400);
        assert!(!rows[1].early_exit);
        assert!(format_table(&rows).lines().count() == 3);
        assert_eq!(time_ratios(&rows).len(), 1);
    }
}
