//! Command-line front end for `lpsmt-core`: runs external SMT-LIB2 solvers
//! and prints answer sets.

pub mod cli;
pub mod solver;

pub use cli::{run, DumpTarget, Input, RunConfig};
pub use solver::{solve, ExternalSolver, SatResult, SolverCommand, SolverError};
