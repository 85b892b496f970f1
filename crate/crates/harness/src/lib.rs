//! Experiment execution: run configs, seeded batches over algorithms ×
//! problems × runs, convergence traces, persistence and summaries.

pub mod batch;
pub mod config;
pub mod error;
pub mod export;
pub mod persist;
pub mod result;
pub mod run;

pub use batch::{cell_seed, run_batch, BatchSpec};
pub use config::{ExperimentConfig, ParamOverrides};
pub use error::{Error, Result};
pub use export::{mean_traces, TraceExport};
pub use persist::{load, load_matrix, load_summary, save, trace_file_name, trace_text, SCHEMA_VERSION};
pub use result::{mean_std, CellSummary, ProblemMeta, ResultSet};
pub use run::{run_single, RunConfig, RunRecord, DEFAULT_FES_MULT, DEFAULT_POPULATION};
