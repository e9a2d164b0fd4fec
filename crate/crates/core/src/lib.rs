//! Linear-time cut sparsification for unweighted undirected graphs.
//!
//! [`sparsifier::sparsify`] turns a [`Multigraph`] into a weighted skeleton
//! whose cut weights track the input's, plus a [`SparsifyTrace`] recording
//! every intermediate edge set. [`oracle`] measures cut error exhaustively
//! or by sampling and certifies edge heaviness with capped max-flow.
//!
//! The `parallel` feature (default) runs cut enumeration and seed sweeps on
//! rayon; [`Execution::Sequential`] and builds without the feature use the
//! same code path on one thread and produce identical results.

pub mod bench;
mod dsu;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod ni_forest;
pub mod oracle;
pub mod par;
pub mod sparsifier;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{
    connected_components, contract, cut_weight, Cut, CutFunction, EdgeId, Multigraph, VertexId,
    VertexPartition, WeightedGraph,
};
pub use ni_forest::{decompose, ForestLabeling};
pub use oracle::{
    enumerate_cuts, is_k_heavy, max_flow_unit, max_relative_cut_error, CutErrorReport, CutMode,
};
pub use par::Execution;
pub use sparsifier::{sparsify, SparsifyConfig, SparsifyTrace};

/// Version stamped into serialized traces.
pub const TRACE_SCHEMA_VERSION: u32 = 1;
/// Version stamped into serialized cut-error reports.
pub const REPORT_SCHEMA_VERSION: u32 = 1;
