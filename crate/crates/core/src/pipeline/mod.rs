//! End-to-end commands built from the library stages. Each command reads its
//! inputs, writes its artifacts into the output directory and is
//! deterministic for a given configuration and seed.

pub mod commands;
pub mod config;

pub use commands::{
    align_swings, analyze_all, cmd_explain, cmd_momentum, cmd_predict_swings, cmd_significance, cmd_simulate,
    cmd_sobol, explain_study, gain_ranking, load_logs, significance_study, simulate_matches, CommandReport,
    SignificanceReport, SWING_TOLERANCE,
};
pub use config::{sub_seed, RunConfig, SeedStream, Settings, DEFAULT_EXPLAIN_FEATURES};
