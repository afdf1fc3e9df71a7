//! Experiment protocols at desk scale: configs, result tables and runners.

mod config;
mod experiments;
mod record;
mod subject;

pub use config::{
    preset, BandSection, DataSection, ExperimentConfig, ExperimentKind, GridSection, ModelOverrides, Scale,
    PRESETS,
};
pub use experiments::{
    mean_std, run_aliasing_study, run_and_save, run_benchmark, run_experiment, run_init_sensitivity, run_lowfreq,
    run_superres, TEST_STREAM,
};
pub use record::{ResultRecord, ResultTable, HEADER};
pub use subject::{exact_rule, fit, model_spec, Rule, Subject};
