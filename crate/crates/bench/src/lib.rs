//! Experiment runner for the solvers in `dsm_core`: builds a benchmark
//! problem, perturbs its data with seeded noise, runs IS1, IS2 and VR, and
//! reports relative errors and iteration counts as CSV or markdown.

pub mod emit;
pub mod error;
pub mod manifest;
pub mod runner;
pub mod spec;

pub use emit::{emit, parse_csv, Format, CSV_HEADER};
pub use error::{BenchError, Result};
pub use runner::{median, q_sweep, run_experiment, ResultRow, SweepTable};
pub use spec::{ExperimentSpec, Method, PreparedProblem, ProblemKind, SpecFile, PRESETS};
