//! Seeded trial batches, success statistics and result files.
//!
//! Trial `t` of an experiment always draws from the stream `(seed, t)` and results
//! are merged in trial order, so output files are identical for any worker count.

mod experiment;
mod output;
mod stats;

pub use experiment::{
    seeded_cubic_graph, CubicReport, CubicStudy, ExperimentOutcome, ExperimentSpec, GraphSpec, HistogramBin,
    MachineSpec, Runner, TrialRow, GRAPH_SALT, HISTOGRAM_BINS,
};
pub use output::{write_cubic_report, write_experiment, OutputFormat};
pub use stats::{clopper_pearson_interval, normal_quantile, wilson_interval, IntervalMethod, SuccessSummary};
