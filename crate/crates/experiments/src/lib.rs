//! Experiment harness: declarative configs, cohort builders, multi-seed runs
//! and score reports.

pub mod cohorts;
pub mod config;
pub mod error;
pub mod reference;
pub mod report;
pub mod runner;

pub use cohorts::{
    build_all_large, build_baseline, build_fixed_cohorts, build_ova, CohortPlan, CohortSpec, GROWING_GENRES,
};
pub use config::{check_no_leakage, DevPolicy, ExperimentConfig, Regime, Selection, Target};
pub use error::{Error, Result};
pub use report::{degradation, DegradationRow, RunRow, ScoreReport};
pub use runner::{run, Corpora, RunOptions};
