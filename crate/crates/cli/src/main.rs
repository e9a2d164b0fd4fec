use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cutsparse::bench::{format_table, run_bench, BenchFamily, BenchSpec};
use cutsparse::generate::{generate, GeneratorSpec};
use cutsparse::io::{parse_multigraph, parse_weighted, write_multigraph, write_weighted};
use cutsparse::sparsifier::{DEFAULT_RHO_CONSTANT, DEFAULT_SAMPLING_CONSTANT, DEFAULT_SEED};
use cutsparse::{decompose, max_relative_cut_error, sparsify, CutMode, Execution, SparsifyConfig};

#[global_allocator]
static ALLOCATOR: mimalloc::MiMalloc = mimalloc::MiMalloc;

const DEFAULT_SAMPLES: u64 = 100_000;

#[derive(Parser)]
#[command(name = "cutsparse", version, about = "Cut sparsification workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph, e.g. `gnp:n=100,p=0.1,seed=3`.
    Gen {
        spec: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sparsify an unweighted edge list.
    Sparsify {
        #[arg(short, long)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_CONSTANT)]
        rho_constant: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLING_CONSTANT)]
        sampling_constant: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Input edge list; stdin when absent.
        #[arg(short, long)]
        input: Option<PathBuf>,
        /// Skeleton output; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Max relative cut error of a skeleton against its graph, as JSON.
    Verify {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(short, long)]
        skeleton: PathBuf,
        /// Enumerate every cut (the default up to 24 vertices).
        #[arg(long, conflicts_with = "samples")]
        exact: bool,
        /// Check this many random cuts instead.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Print `edge_id u v forest_index` for every edge.
    Ni {
        #[arg(short, long)]
        input: Option<PathBuf>,
    },
    /// Time sparsify across graph sizes.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
        #[arg(long, default_value_t = 20.0)]
        avg_degree: f64,
        #[arg(short, long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_CONSTANT)]
        rho_constant: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLING_CONSTANT)]
        sampling_constant: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Emit rows as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Invariant(Vec<String>),
}

impl From<cutsparse::Error> for Failure {
    fn from(e: cutsparse::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen { spec, output } => {
            let spec: GeneratorSpec = spec.parse()?;
            write_output(output.as_deref(), &write_multigraph(&generate(&spec)?))
        }
        Command::Sparsify {
            epsilon,
            rho_constant,
            sampling_constant,
            seed,
            input,
            output,
            trace: trace_path,
        } => {
            let graph = parse_multigraph(&read_input(input.as_deref())?)?;
            let config = SparsifyConfig::new(epsilon)
                .with_constants(rho_constant, sampling_constant)
                .with_seed(seed);
            let (skeleton, trace) = sparsify(&graph, &config)?;
            let violations = trace.check_invariants();
            if !violations.is_empty() {
                return Err(Failure::Invariant(violations));
            }
            if let Some(p) = &trace_path {
                write_output(Some(p), &trace.to_json())?;
            }
            eprintln!(
                "n={} m={} rho={:.3} early_exit={} levels={} skeleton_edges={}",
                graph.vertex_count(),
                graph.edge_count(),
                trace.rho,
                trace.early_exit,
                trace.terminal_level,
                skeleton.edge_count()
            );
            write_output(output.as_deref(), &write_weighted(&skeleton))
        }
        Command::Verify {
            graph,
            skeleton,
            exact,
            samples,
            seed,
            sequential,
        } => {
            let g = parse_weighted(&read_input(Some(&graph))?)?;
            let h = parse_weighted(&read_input(Some(&skeleton))?)?;
            let mode = match (exact, samples) {
                (_, Some(s)) => CutMode::Sampled(s),
                (true, None) => CutMode::Exact,
                (false, None) if g.vertex_count() <= cutsparse::oracle::MAX_EXACT_VERTICES => {
                    CutMode::Exact
                }
                (false, None) => CutMode::Sampled(DEFAULT_SAMPLES),
            };
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let report = max_relative_cut_error(&g, &h, mode, seed, exec)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            write_output(None, &(json + "\n"))
        }
        Command::Ni { input } => {
            let graph = parse_multigraph(&read_input(input.as_deref())?)?;
            let labels = decompose(&graph);
            let mut out = String::with_capacity(graph.edge_count() * 16);
            for (e, &(u, v)) in graph.edges().iter().enumerate() {
                out.push_str(&format!("{e} {u} {v} {}\n", labels.index(e)));
            }
            write_output(None, &out)
        }
        Command::Bench {
            family,
            sizes,
            repeat,
            avg_degree,
            epsilon,
            rho_constant,
            sampling_constant,
            seed,
            json,
        } => {
            let spec = BenchSpec {
                family: family.parse::<BenchFamily>()?,
                sizes,
                repeat,
                avg_degree,
                graph_seed: seed,
                config: SparsifyConfig::new(epsilon)
                    .with_constants(rho_constant, sampling_constant)
                    .with_seed(seed),
            };
            let rows = run_bench(&spec)?;
            let text = if json {
                serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
            } else {
                format_table(&rows)
            };
            write_output(None, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(violations)) => {
            for v in violations {
                eprintln!("invariant violated: {v}");
            }
            ExitCode::from(2)
        }
    }
}
