//! Experiment harness for the grid benchmarks: spec files, per-run metrics,
//! aggregation into Table-1 and anytime-curve shaped outputs, and the
//! acceptance suite behind `aepase-bench selftest`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod aggregate;
pub mod experiment;
pub mod metrics;
pub mod oracle;
pub mod output;
pub mod spec;

pub use aggregate::{aggregate, AggregateError, Summary};
pub use experiment::{run_experiment, ExperimentError};
pub use metrics::{RunMetrics, RunStatus};
pub use oracle::OracleCache;
pub use output::emit_outputs;
pub use spec::{Algorithm, MapSource, RunSpec, SpecError, SpecFile};
