//! Batch experiments: run an algorithm over a budget grid and many seeded
//! trials, fit decay rates to the median excess error, and write CSV and a
//! summary.

pub mod acceptance;
mod config;
mod fit;
mod report;
mod runner;

pub use config::{ExperimentConfig, OutputConfig};
pub use fit::{fit_points, fit_rate, predicted_rate, Prediction, RateFit, RateModel, ERROR_FLOOR};
pub use report::{emit_report, write_csv, ReportPaths};
pub use runner::{quantile, run_experiment, trial_seed, BudgetSummary, LearningCurve, TrialRecord};
