//! Batch experiments: Monte Carlo summaries, benchmark tables, timescale
//! sweeps, path export and parameter-recovery studies.

pub mod batch;
pub mod config;
pub mod paths;
pub mod reference;
pub mod study;
pub mod sweep;
pub mod table2;

pub use batch::{run_batch, BatchReport, BatchRun, MetricSummary, OrderSimulator, TstatSummary};
pub use config::ExperimentConfig;
pub use paths::{sample_paths, write_paths_csv, PathSamples};
pub use study::{run_regression_study, RegressionStudy};
pub use sweep::{run_sweep, SweepReport};
pub use table2::{run_table2, Table2Report};
