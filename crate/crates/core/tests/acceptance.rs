//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cutsparse::bench::{run_bench, time_ratios, BenchFamily, BenchSpec};
use cutsparse::generate::{generate, Family, GeneratorSpec};
use cutsparse::oracle::exact_error;
use cutsparse::sparsifier::{compute_rho, final_sample, sampling_probability, LevelEdges};
use cutsparse::sweep::{cut_error_sweep, SweepPoint};
use cutsparse::{
    decompose, is_k_heavy, sparsify, EdgeId, Execution, Multigraph, SparsifyConfig, SparsifyTrace,
};

// glibc returns freed pages to the kernel between repeats at the larger
// sizes, and the re-faulting dominates the timing rows.
#[global_allocator]
static ALLOCATOR: mimalloc::MiMalloc = mimalloc::MiMalloc;

/// Reduced constants that engage the level loop on desk-sized graphs.
const REDUCED: (f64, f64) = (0.05, 0.5);
/// Multipliers applied to both reduced constants in the cut-error sweeps.
const SCALES: [f64; 4] = [1.0, 4.0, 16.0, 64.0];
/// Smallest multiplier found by the sweep at which 95% of seeds meet ε = 0.5
/// on gnp(16, 0.8). Mirrored in the README.
const RECORDED_SCALE: f64 = 3.0;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gnp(n: usize, p: f64, seed: u64) -> Multigraph {
    generate(&GeneratorSpec::new(Family::Gnp { n, p }, seed)).unwrap()
}

fn reduced(epsilon: f64, scale: f64) -> SparsifyConfig {
    SparsifyConfig::new(epsilon).with_constants(REDUCED.0 * scale, REDUCED.1 * scale)
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }
    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> (usize, DisjointSets) {
    let mut dsu = DisjointSets::new(n);
    let mut count = n;
    for (a, b) in edges {
        if dsu.union(a, b) {
            count -= 1;
        }
    }
    (count, dsu)
}

/// All-pairs local edge connectivity by enumerating every bipartition.
#[allow(clippy::needless_range_loop)]
fn all_pairs_min_cut(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut best = vec![vec![usize::MAX; n]; n];
    for mask in 1u64..(1 << (n - 1)) {
        let side = |v: usize| v > 0 && mask >> (v - 1) & 1 == 1;
        let w = g
            .edges()
            .iter()
            .filter(|&&(a, b)| side(a) != side(b))
            .count();
        for u in 0..n {
            for v in u + 1..n {
                if side(u) != side(v) && w < best[u][v] {
                    best[u][v] = w;
                }
            }
        }
    }
    best
}

fn random_multigraph(rng: &mut ChaCha8Rng) -> Multigraph {
    let n = rng.random_range(2..=64);
    let m = rng.random_range(0..=4 * n);
    let hot = rng.random_range(1..=n.min(8));
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        // a small hot set makes parallel copies common
        let (a, b) = if rng.random_bool(0.3) {
            (rng.random_range(0..hot), rng.random_range(0..hot))
        } else {
            (rng.random_range(0..n), rng.random_range(0..n))
        };
        if a != b {
            edges.push((a, b));
        }
    }
    Multigraph::new(n, edges).unwrap()
}

fn early_exit_fidelity() -> Outcome {
    let config = SparsifyConfig::new(1.0);
    let mut graphs = vec![
        generate(&GeneratorSpec::new(Family::Gnm { n: 100, m: 1000 }, 1)).unwrap(),
        generate(&GeneratorSpec::new(Family::Gnm { n: 1000, m: 20000 }, 2)).unwrap(),
        generate(&GeneratorSpec::new(Family::Complete { n: 20 }, 1)).unwrap(),
        generate(&GeneratorSpec::new(
            Family::Barbell { clique: 6, path: 4 },
            1,
        ))
        .unwrap(),
        Multigraph::new(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap(),
    ];
    graphs.extend((0..10).map(|s| gnp(12 + s as usize, 0.6, s)));
    let mut exact_checked = 0;
    for g in &graphs {
        let (h, trace) = sparsify(g, &config).map_err(|e| e.to_string())?;
        let bitwise = h.edges().len() == g.edge_count()
            && h.edges()
                .iter()
                .zip(g.edges())
                .all(|(&(a, b, w), &(u, v))| (a, b) == (u, v) && w.to_bits() == 1f64.to_bits());
        if !trace.early_exit || !bitwise {
            return Err(format!(
                "n={} m={} not returned verbatim",
                g.vertex_count(),
                g.edge_count()
            ));
        }
        if g.vertex_count() <= 20 {
            let err = exact_error(g, &h).map_err(|e| e.to_string())?;
            if err != 0.0 {
                return Err(format!("n={} exact error {err}", g.vertex_count()));
            }
            exact_checked += 1;
        }
    }
    Ok(format!(
        "{} graphs returned verbatim, {exact_checked} with exact error 0",
        graphs.len()
    ))
}

fn ni_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut pairs_checked = 0usize;
    for round in 0..200 {
        let g = random_multigraph(&mut rng);
        let n = g.vertex_count();
        let l = decompose(&g);
        let labels = l.indices();
        let fail = |what: &str| {
            Err(format!(
                "graph {round} (n={n}, m={}): {what}",
                g.edge_count()
            ))
        };
        if labels.iter().any(|&j| j == 0 || j > l.max_index()) {
            return fail("forests do not partition E");
        }
        let mut conn: Vec<DisjointSets> = Vec::new();
        for j in 1..=l.max_index() {
            let forest: Vec<(usize, usize)> = l.forest(j).iter().map(|&e| g.edges()[e]).collect();
            let (comps, dsu) = components(n, forest.iter().copied());
            if n - comps != forest.len() {
                return fail(&format!("T_{j} has a cycle"));
            }
            let (residual_comps, _) = components(
                n,
                labels
                    .iter()
                    .enumerate()
                    .filter(|&(_, &i)| i >= j)
                    .map(|(e, _)| g.edges()[e]),
            );
            if comps != residual_comps {
                return fail(&format!("T_{j} does not span the residual graph"));
            }
            conn.push(dsu);
        }
        let cuts = (n <= 16).then(|| all_pairs_min_cut(&g));
        for u in 0..n {
            for v in u + 1..n {
                let joined: Vec<bool> = conn.iter_mut().map(|d| d.find(u) == d.find(v)).collect();
                let depth = joined.iter().take_while(|&&b| b).count();
                if joined[depth..].iter().any(|&b| b) {
                    return fail(&format!("pair ({u},{v}) connectivity is not a prefix"));
                }
                if l.prefix_connectivity(&g, u, v).unwrap() != depth {
                    return fail(&format!("pair ({u},{v}) prefix connectivity disagrees"));
                }
                if let Some(c) = &cuts {
                    if depth > c[u][v] {
                        return fail(&format!(
                            "pair ({u},{v}) depth {depth} exceeds min cut {}",
                            c[u][v]
                        ));
                    }
                    pairs_checked += 1;
                }
            }
        }
    }
    Ok(format!(
        "200 graphs, {pairs_checked} pairs checked against min cut"
    ))
}

/// Heaviness runs: reduced constants, ε = 1, dense gnp with n between 16
/// and 40, which always reach at least two sampling levels.
fn heavy_runs() -> Vec<(Multigraph, SparsifyTrace)> {
    (0..50u64)
        .map(|seed| {
            let n = 16 + (seed as usize * 7) % 25;
            let p = 0.5 + 0.4 * ((seed * 13) % 10) as f64 / 10.0;
            let g = gnp(n, p, seed);
            let (_, trace) = sparsify(&g, &reduced(1.0, 1.0).with_seed(seed)).unwrap();
            (g, trace)
        })
        .collect()
}

fn heaviness(runs: &[(Multigraph, SparsifyTrace)]) -> Outcome {
    let mut certified = 0usize;
    let mut min_levels = usize::MAX;
    for (g, trace) in runs {
        min_levels = min_levels.min(trace.terminal_level);
        for record in &trace.levels {
            let sub = g.edge_subgraph(&record.x_edges);
            let position = |e: EdgeId| record.x_edges.binary_search(&e).unwrap();
            for &e in &record.y_edges {
                if !is_k_heavy(&sub, position(e), record.k).unwrap() {
                    return Err(format!(
                        "n={} level {}: edge {e} is not {}-heavy",
                        g.vertex_count(),
                        record.level,
                        record.k
                    ));
                }
                certified += 1;
            }
        }
    }
    check(
        min_levels >= 2,
        format!("{certified} edges certified over 50 runs, at least {min_levels} levels each"),
    )
}

fn subroutine_bounds(runs: &[(Multigraph, SparsifyTrace)]) -> Outcome {
    let mut invocations = 0;
    for (g, trace) in runs {
        for r in trace.levels.iter().skip(1) {
            invocations += 1;
            let bound = 2.0 * r.k * r.supervertex_count_final as f64;
            if r.f_edges.len() as f64 > bound {
                return Err(format!(
                    "n={} level {}: |F|={} > 2k|V_c|={bound}",
                    g.vertex_count(),
                    r.level,
                    r.f_edges.len()
                ));
            }
            if let Some(w) = r
                .contraction_edge_counts
                .windows(2)
                .find(|w| 2 * w[1] >= w[0])
            {
                return Err(format!(
                    "n={} level {}: |E_c| went {} -> {}",
                    g.vertex_count(),
                    r.level,
                    w[0],
                    w[1]
                ));
            }
        }
    }
    Ok(format!("{invocations} reductions within bound and halving"))
}

fn ledger(runs: &[(Multigraph, SparsifyTrace)]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut record = |g: &Multigraph, t: &SparsifyTrace| -> Outcome {
        let total: f64 = t
            .levels
            .iter()
            .skip(1)
            .map(|r| {
                r.f_edges.len() as f64 * 2f64.powi(r.level as i32)
                    / (t.rho * 4f64.powi(r.level as i32))
            })
            .sum();
        let n = g.vertex_count() as f64;
        worst = worst.max(total / n);
        count += 1;
        check(total <= 8.0 * n, format!("n={n}: ledger {total} > 8n"))
    };
    for (g, t) in runs {
        record(g, t)?;
    }
    for (i, scale) in [0.02, 0.2, 1.0, 5.0, 20.0].into_iter().enumerate() {
        for eps in [0.3, 1.0] {
            let g = generate(&GeneratorSpec::new(
                Family::Gnm { n: 300, m: 6000 },
                i as u64,
            ))
            .unwrap();
            let config = SparsifyConfig::new(eps).with_constants(0.05 * scale, 0.5 * scale);
            let (_, t) = sparsify(&g, &config).unwrap();
            record(&g, &t)?;
        }
    }
    let g = gnp(200, 0.2, 9);
    let (_, t) = sparsify(&g, &SparsifyConfig::new(1.0)).unwrap();
    record(&g, &t)?;
    Ok(format!("{count} runs, max ledger/n = {worst:.3}"))
}

fn unbiasedness() -> Outcome {
    let config = SparsifyConfig::new(1.0);
    let n = 100;
    let rho = compute_rho(n, &config).unwrap();
    let p = sampling_probability(&config, n, rho, 2);
    if (p - 96.0 / 169.0).abs() > 1e-12 {
        return Err(format!("p_2 = {p}, expected 96/169"));
    }
    let draws = 10_000;
    let levels = [LevelEdges {
        level: 2,
        edges: &[0],
    }];
    let weights: Vec<f64> = (0..draws)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            final_sample(&levels, &config, n, &mut rng)
                .unwrap()
                .first()
                .map_or(0.0, |&(_, w)| w)
        })
        .collect();
    let mean = weights.iter().sum::<f64>() / draws as f64;
    let var = weights.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    let se = (var / draws as f64).sqrt();
    let z = (mean - 4.0) / se;
    check(
        z.abs() <= 3.0,
        format!("mean weight {mean:.4} over {draws} draws, {z:+.2} standard errors from 4"),
    )
}

fn sweep(n: usize, p: f64, epsilon: f64, scale: f64, seeds: u64) -> Vec<SweepPoint> {
    let seeds: Vec<u64> = (0..seeds).collect();
    cut_error_sweep(
        &seeds,
        &reduced(epsilon, scale),
        Execution::default(),
        |seed| generate(&GeneratorSpec::new(Family::Gnp { n, p }, seed)),
    )
    .unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

fn decreasing_medians(medians: &[f64]) -> bool {
    medians.iter().all(|m| m.is_finite())
        && medians.windows(2).all(|w| w[1] <= w[0])
        && medians[medians.len() - 1] < medians[0]
}

fn cut_preservation() -> Outcome {
    let medians: Vec<f64> = SCALES
        .iter()
        .map(|&s| {
            median(
                sweep(16, 0.8, 1.0, s, 50)
                    .iter()
                    .map(|p| p.skeleton_error)
                    .collect(),
            )
        })
        .collect();
    let shown = medians
        .iter()
        .map(|m| format!("{m:.3}"))
        .collect::<Vec<_>>()
        .join(", ");
    if !decreasing_medians(&medians) {
        return Err(format!("(a) medians over scales {SCALES:?}: {shown}"));
    }
    let points = sweep(16, 0.8, 0.5, RECORDED_SCALE, 100);
    let within = points.iter().filter(|p| p.skeleton_error <= 0.5).count();
    let early = points.iter().filter(|p| p.early_exit).count();
    let max_level = points.iter().map(|p| p.terminal_level).max().unwrap_or(0);
    check(
        within >= 95,
        format!(
            "(a) medians {shown}; (b) scale {RECORDED_SCALE}: {within}/100 seeds within 0.5 \
             ({early} early exits, deepest level {max_level})"
        ),
    )
}

fn intermediate_graphs() -> Outcome {
    let mut medians = Vec::new();
    for &s in &SCALES {
        let points = sweep(14, 0.8, 1.0, s, 50);
        if let Some(p) = points
            .iter()
            .find(|p| p.intermediate_errors.iter().any(|e| !e.is_finite()))
        {
            return Err(format!(
                "seed {} has a non-finite intermediate error",
                p.seed
            ));
        }
        let worst = points
            .iter()
            .map(|p| p.intermediate_errors.iter().copied().fold(0.0, f64::max))
            .collect();
        medians.push(median(worst));
    }
    let shown = medians
        .iter()
        .map(|m| format!("{m:.3}"))
        .collect::<Vec<_>>()
        .join(", ");
    check(
        decreasing_medians(&medians),
        format!("median worst-level error over scales {SCALES:?}: {shown}"),
    )
}

fn linear_time() -> Outcome {
    let spec = BenchSpec {
        family: BenchFamily::Gnm,
        sizes: vec![100_000, 200_000, 400_000, 800_000],
        repeat: 5,
        avg_degree: 20.0,
        graph_seed: 1,
        // at ε = 0.5 every size runs the same number of levels
        config: reduced(0.5, 1.0),
    };
    let rows = run_bench(&spec).map_err(|e| e.to_string())?;
    if let Some(r) = rows.iter().find(|r| r.early_exit || r.levels == 0) {
        return Err(format!("m={} did not engage the level loop", r.edge_count));
    }
    let ratios = time_ratios(&rows);
    let shown = ratios
        .iter()
        .map(|r| format!("{r:.2}"))
        .collect::<Vec<_>>()
        .join(", ");
    let levels = rows.iter().map(|r| r.levels).collect::<Vec<_>>();
    let times = rows
        .iter()
        .map(|r| format!("{:.0}", r.median_total_ms))
        .collect::<Vec<_>>()
        .join(", ");
    check(
        ratios.iter().all(|r| (1.5..=3.0).contains(r)),
        format!("levels {levels:?}; median ms {times}; ratios {shown}"),
    )
}

fn main() -> ExitCode {
    let runs = heavy_runs();
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("early-exit fidelity", Box::new(early_exit_fidelity)),
        ("NI forest invariants", Box::new(ni_invariants)),
        ("heaviness certification", Box::new(|| heaviness(&runs))),
        (
            "reduction bound and halving",
            Box::new(|| subroutine_bounds(&runs)),
        ),
        ("size ledger", Box::new(|| ledger(&runs))),
        ("sampling unbiasedness", Box::new(unbiasedness)),
        ("statistical cut preservation", Box::new(cut_preservation)),
        ("linear-time behaviour", Box::new(linear_time)),
        ("intermediate graphs", Box::new(intermediate_graphs)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.1}s] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{secs:.1}s] {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
