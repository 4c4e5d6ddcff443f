//! Scenario runner: builds `mu` and `rho` for a configured scenario, runs
//! every analyzer, and writes deterministic JSON and CSV reports.

mod config;
mod run;
mod selftest;
mod theorem1;

pub use config::{ScenarioConfig, ScenarioKind};
pub use run::{run_scenario, verify_theorem2, write_json, RunOutcome, ScenarioReport, Theorem2Summary};
pub use selftest::{transform_selftest, SelftestReport};
pub use theorem1::{compare_theorem1, Theorem1Config, Theorem1Row, Theorem1Table};

use crate::Error;

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotConverged { .. } => 3,
        Error::Io(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

/// One-line JSON error for stderr.
pub fn error_json(err: &Error) -> String {
    let kind = match err {
        Error::NotConverged { .. } => "non_convergence",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
        _ => "config",
    };
    serde_json::json!({ "error": kind, "message": err.to_string() }).to_string()
}
