//! The `lpsmt` command: read a ground program, enumerate its answer sets,
//! print them.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use lpsmt_core::oracle::{brute_force_answer_sets, OracleError};
use lpsmt_core::{
    enumerate_translation, translate, AnswerSet, Completeness, EnumerateError, ParseError,
    Program, Theory, TheoryError, TranslateOptions,
};
use thiserror::Error;

use crate::solver::{ExternalSolver, SolverCommand, SolverError};

pub const EXIT_SATISFIABLE: i32 = 10;
pub const EXIT_UNSATISFIABLE: i32 = 20;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Stdin,
    File(PathBuf),
}

impl Input {
    fn label(&self) -> String {
        match self {
            Input::Stdin => "<stdin>".into(),
            Input::File(p) => p.display().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DumpTarget {
    Stdout,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: Input,
    pub theory: Option<PathBuf>,
    /// Number of answer sets to print, 0 for all. `None` defers to the
    /// count in the program's footer.
    pub models: Option<usize>,
    pub solver: SolverCommand,
    pub timeout: Duration,
    pub dump_smt: Option<DumpTarget>,
    pub stats: bool,
    pub oracle: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("{path}: {source}")]
    Theory {
        path: String,
        #[source]
        source: TheoryError,
    },
    #[error("--oracle cannot be combined with --theory")]
    OracleWithTheory,
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{0}")]
    Enumerate(String),
    #[error("writing {path}: {source}")]
    Dump {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl From<EnumerateError<SolverError>> for RunError {
    fn from(e: EnumerateError<SolverError>) -> Self {
        match e {
            EnumerateError::Backend(s) => RunError::Solver(s),
            other => RunError::Enumerate(other.to_string()),
        }
    }
}

struct Outcome {
    answer_sets: Vec<AnswerSet>,
    completeness: Completeness,
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String, RunError> {
    let mut text = String::new();
    let res = match input {
        Input::Stdin => stdin.read_to_string(&mut text).map(|_| ()),
        Input::File(p) => fs::read_to_string(p).map(|t| text = t),
    };
    res.map_err(|source| RunError::Read {
        path: input.label(),
        source,
    })?;
    Ok(text)
}

fn format_answer(k: usize, a: &AnswerSet) -> String {
    let mut line = format!("Answer {k}:");
    for atom in &a.atoms {
        line.push(' ');
        line.push_str(atom);
    }
    if let Some(numeric) = a.numeric.as_ref().filter(|n| !n.is_empty()) {
        line.push_str("\n ");
        for (name, value) in numeric {
            let _ = write!(line, " {name}={value}");
        }
    }
    line
}

fn oracle_answers(program: &Program, limit: usize) -> Result<Outcome, RunError> {
    let sets = brute_force_answer_sets(program)?;
    let total = sets.len();
    let mut answer_sets: Vec<AnswerSet> = sets
        .into_iter()
        .map(|s| {
            let atom_ids: std::collections::BTreeSet<_> =
                s.into_iter().filter(|a| program.atom_name(*a).is_some()).collect();
            let mut atoms: Vec<String> = atom_ids
                .iter()
                .filter_map(|a| program.atom_name(*a).map(String::from))
                .collect();
            atoms.sort();
            AnswerSet {
                atoms,
                atom_ids,
                numeric: None,
                ranking: None,
            }
        })
        .collect();
    let completeness = if limit != 0 && total > limit {
        answer_sets.truncate(limit);
        Completeness::LimitReached
    } else {
        Completeness::Exhausted
    };
    Ok(Outcome {
        answer_sets,
        completeness,
    })
}

fn execute(cfg: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, RunError> {
    let path = cfg.input.label();
    let text = read_input(&cfg.input, stdin)?;
    let program = Program::parse_smodels(&text).map_err(|source| RunError::Parse {
        path: path.clone(),
        source,
    })?;
    let theory = match &cfg.theory {
        None => Theory::default(),
        Some(_) if cfg.oracle => return Err(RunError::OracleWithTheory),
        Some(p) => {
            let input = Input::File(p.clone());
            let text = read_input(&input, stdin)?;
            Theory::parse(&text, &program).map_err(|source| RunError::Theory {
                path: input.label(),
                source,
            })?
        }
    };
    let limit = cfg
        .models
        .unwrap_or_else(|| usize::try_from(program.models_requested).unwrap_or(0));

    let translation = translate(&program, &theory, TranslateOptions::default());
    if let Some(target) = &cfg.dump_smt {
        let smt = translation.unit.to_smtlib().map_err(SolverError::from)?;
        match target {
            DumpTarget::Stdout => out.write_all(smt.as_bytes())?,
            DumpTarget::File(p) => fs::write(p, smt).map_err(|source| RunError::Dump {
                path: p.display().to_string(),
                source,
            })?,
        }
    }

    let mut solver = ExternalSolver::new(cfg.solver.clone(), cfg.timeout);
    let outcome = if cfg.oracle {
        oracle_answers(&program, limit)?
    } else {
        let e = enumerate_translation(&translation, limit, &mut solver)?;
        Outcome {
            answer_sets: e.answer_sets,
            completeness: e.completeness,
        }
    };

    for (i, a) in outcome.answer_sets.iter().enumerate() {
        writeln!(out, "{}", format_answer(i + 1, a))?;
    }
    let code = match outcome.completeness {
        Completeness::Interrupted => {
            if solver.timed_out {
                writeln!(err, "lpsmt: solver timed out after {:?}", cfg.timeout)?;
            }
            writeln!(out, "UNKNOWN")?;
            EXIT_UNKNOWN
        }
        _ if outcome.answer_sets.is_empty() => {
            writeln!(out, "UNSATISFIABLE")?;
            EXIT_UNSATISFIABLE
        }
        _ => {
            writeln!(out, "SATISFIABLE")?;
            EXIT_SATISFIABLE
        }
    };

    if cfg.stats {
        let d = &translation.dependency;
        writeln!(out, "Atoms        : {}", translation.program.atoms.len())?;
        writeln!(out, "Rules        : {}", translation.program.rules.len())?;
        writeln!(out, "Tight        : {}", if d.is_tight() { "yes" } else { "no" })?;
        writeln!(out, "SCCs         : {}", d.components.len())?;
        writeln!(out, "Nontrivial   : {}", d.nontrivial.len())?;
        writeln!(out, "Largest SCC  : {}", d.largest_component())?;
        writeln!(out, "Solver calls : {}", solver.calls)?;
        writeln!(out, "Solver time  : {:.3}s", solver.elapsed.as_secs_f64())?;
    }
    Ok(code)
}

/// Runs the command and returns its exit status. Errors are reported on
/// `err` as a single line.
pub fn run(cfg: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cfg, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "lpsmt: error: {e}");
            EXIT_ERROR
        }
    }
}
