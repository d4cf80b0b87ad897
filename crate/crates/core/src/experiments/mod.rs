//! Config-driven experiments: tail estimates at fixed vertices, maxima, and
//! exact tree tails, each compared with its concentration bound.

mod bounds;
mod config;
mod report;
mod run;

pub use bounds::{format_ratio, ln_ratio, ratio_le_exp_neg, ratio_to_f64};
pub use config::{ExperimentConfig, Format, GraphSource, Kind, LambdaSource, SamplerKind, Steps};
pub use report::{emit_report, Bound, ExperimentResult, Row, COLUMNS, HYPOTHESES_NOT_MET};
pub use run::{run_experiment, tree_ball_size};
