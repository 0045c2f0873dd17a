use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use lpsmt::cli::{run, DumpTarget, Input, RunConfig, EXIT_ERROR};
use lpsmt::solver::SolverCommand;

/// Enumerate answer sets of a ground logic program (smodels format) with an
/// SMT-LIB2 solver.
#[derive(Parser, Debug)]
#[command(name = "lpsmt", version)]
struct Args {
    /// Ground program in smodels format, or `-` for standard input.
    input: String,

    /// Linear constraints bound to atoms of the program.
    #[arg(long, value_name = "FILE")]
    theory: Option<PathBuf>,

    /// Number of answer sets to compute, 0 for all. Defaults to the count
    /// in the program's footer.
    #[arg(short = 'e', long = "models", value_name = "N")]
    models: Option<usize>,

    /// Solver command; `{file}` stands for the script path. Defaults to
    /// $EZSMT_SOLVER, else `z3 {file}`.
    #[arg(long, value_name = "CMD")]
    solver: Option<String>,

    /// Per-call solver time limit.
    #[arg(long, value_name = "SECS", default_value_t = 300.0, value_parser = positive_secs)]
    timeout: f64,

    /// Write the first SMT-LIB2 script to FILE (`-` for standard output).
    #[arg(long, value_name = "FILE")]
    dump_smt: Option<String>,

    /// Print tightness and strongly connected component statistics.
    #[arg(long)]
    stats: bool,

    /// Compute answer sets by brute force instead of calling a solver.
    #[arg(long)]
    oracle: bool,
}

fn positive_secs(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let solver = match args.solver.as_deref() {
        Some(t) => SolverCommand::parse(t),
        None => SolverCommand::from_env(),
    };
    let solver = match solver {
        Ok(s) => s,
        Err(e) => {
            eprintln!("lpsmt: error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let cfg = RunConfig {
        input: match args.input.as_str() {
            "-" => Input::Stdin,
            p => Input::File(p.into()),
        },
        theory: args.theory,
        models: args.models,
        solver,
        timeout: Duration::from_secs_f64(args.timeout),
        dump_smt: args.dump_smt.map(|d| match d.as_str() {
            "-" => DumpTarget::Stdout,
            p => DumpTarget::File(p.into()),
        }),
        stats: args.stats,
        oracle: args.oracle,
    };
    let code = run(
        &cfg,
        &mut std::io::stdin().lock(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
