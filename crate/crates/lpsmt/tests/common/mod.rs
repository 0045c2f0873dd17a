#![allow(dead_code)]

use std::path::PathBuf;
use std::time::Duration;

use lpsmt::solver::{solve, SolverCommand, SolverError};

pub const TIMEOUT: Duration = Duration::from_secs(60);

/// Solvers exercised by the tests: `LPSMT_TEST_SOLVERS` (`;`-separated
/// templates), else z3 and yices.
pub fn configured_solvers() -> Vec<SolverCommand> {
    let list = std::env::var("LPSMT_TEST_SOLVERS")
        .unwrap_or_else(|_| "z3 {file};yices-smt2 {file}".into());
    list.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| SolverCommand::parse(s.trim()).expect("solver template"))
        .collect()
}

/// The configured solvers that can actually be launched.
pub fn installed_solvers() -> Vec<SolverCommand> {
    configured_solvers()
        .into_iter()
        .filter(|c| !matches!(solve("(check-sat)\n", c, TIMEOUT), Err(SolverError::NotFound { .. })))
        .collect()
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
