//! Experiment harness: configurations, seeded trial batches, result tables,
//! scaling fits and the command line front end.

pub mod cli;
pub mod config;
pub mod expr;
pub mod fit;
pub mod runner;
pub mod table;

pub use config::{default_budget, AlgoKind, ExperimentConfig, Point};
pub use expr::{Expr, Vars};
pub use fit::{filter_gamma, fit_points, fit_scaling, plot_svg, FitPoint, ScalingFit, ScalingModel};
pub use runner::{compare, run_single, run_trials, run_trials_with_workers, worker_count, ComparePoint, Comparison};
pub use table::{PointSummary, TrialRecord, TrialTable};
