//! Running an external SMT-LIB2 solver on one emitted script.

use std::fmt;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::{Child, Command, ExitStatus, Stdio};
use std::str::FromStr;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use lpsmt_core::{
    parse_value_response, Assignment, EmissionUnit, EmitError, SatOutcome, SmtBackend, Verdict,
};
use thiserror::Error;

/// Placeholder replaced by the script path in a solver command template.
pub const FILE_PLACEHOLDER: &str = "{file}";

/// Environment variable holding the default solver command.
pub const SOLVER_ENV: &str = "EZSMT_SOLVER";

const DEFAULT_SOLVER: &str = "z3 {file}";
const POLL_INTERVAL: Duration = Duration::from_millis(2);

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver command `{0}`")]
    BadCommand(String),
    #[error("solver `{command}` not found: {source}")]
    NotFound {
        command: String,
        #[source]
        source: io::Error,
    },
    #[error("failed to run solver `{command}`: {source}")]
    Io {
        command: String,
        #[source]
        source: io::Error,
    },
    #[error("solver `{command}` exited with {status} without a verdict{}", stderr_suffix(.stderr))]
    Crashed {
        command: String,
        status: String,
        stderr: String,
    },
    #[error("solver `{command}` gave an unparseable response: {reason}")]
    Unparseable { command: String, reason: String },
    #[error(transparent)]
    Emit(#[from] EmitError),
}

fn stderr_suffix(stderr: &str) -> String {
    let s = stderr.trim();
    if s.is_empty() {
        String::new()
    } else {
        format!(": {s}")
    }
}

/// A solver invocation such as `yices-smt2 {file}` or `z3 -smt2 {file}`.
/// Without a placeholder the script path is appended as the last argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverCommand {
    template: String,
    argv: Vec<String>,
}

impl SolverCommand {
    pub fn parse(template: &str) -> Result<Self, SolverError> {
        let argv = shlex::split(template)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| SolverError::BadCommand(template.into()))?;
        Ok(SolverCommand {
            template: template.into(),
            argv,
        })
    }

    /// The command from [`SOLVER_ENV`], else `z3 {file}`.
    pub fn from_env() -> Result<Self, SolverError> {
        match std::env::var(SOLVER_ENV) {
            Ok(t) if !t.trim().is_empty() => Self::parse(&t),
            _ => Self::parse(DEFAULT_SOLVER),
        }
    }

    pub fn program(&self) -> &str {
        &self.argv[0]
    }

    pub fn template(&self) -> &str {
        &self.template
    }

    fn args_for(&self, file: &Path) -> Vec<String> {
        let file = file.to_string_lossy();
        let mut args: Vec<String> = self.argv[1..]
            .iter()
            .map(|a| a.replace(FILE_PLACEHOLDER, &file))
            .collect();
        if !self.argv.iter().any(|a| a.contains(FILE_PLACEHOLDER)) {
            args.push(file.into_owned());
        }
        args
    }
}

impl FromStr for SolverCommand {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, SolverError> {
        Self::parse(s)
    }
}

impl fmt::Display for SolverCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.template)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub verdict: Verdict,
    /// Present iff the verdict is `Sat`.
    pub assignment: Option<Assignment>,
    pub stderr: String,
    pub elapsed: Duration,
    /// The solver was killed at the deadline; the verdict is `Unknown`.
    pub timed_out: bool,
}

fn drain<R: Read + Send + 'static>(mut r: R) -> JoinHandle<Vec<u8>> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        buf
    })
}

/// Waits for `child` until `deadline`, killing and reaping it on expiry.
fn wait_until(child: &mut Child, deadline: Instant) -> io::Result<Option<ExitStatus>> {
    loop {
        if let Some(status) = child.try_wait()? {
            return Ok(Some(status));
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            child.wait()?;
            return Ok(None);
        }
        thread::sleep(POLL_INTERVAL);
    }
}

fn split_verdict(stdout: &str) -> Option<(Verdict, &str)> {
    let mut rest = stdout;
    while !rest.is_empty() {
        let (line, tail) = rest.split_once('\n').unwrap_or((rest, ""));
        let verdict = match line.trim() {
            "sat" => Some(Verdict::Sat),
            "unsat" => Some(Verdict::Unsat),
            "unknown" => Some(Verdict::Unknown),
            _ => None,
        };
        if let Some(v) = verdict {
            return Some((v, tail));
        }
        rest = tail;
    }
    None
}

/// Writes `smt_text` to a temporary file and runs `command` on it.
pub fn solve(smt_text: &str, command: &SolverCommand, timeout: Duration) -> Result<SatResult, SolverError> {
    let io_err = |source| SolverError::Io {
        command: command.template.clone(),
        source,
    };
    let mut file = tempfile::Builder::new()
        .prefix("lpsmt-")
        .suffix(".smt2")
        .tempfile()
        .map_err(io_err)?;
    file.write_all(smt_text.as_bytes()).map_err(io_err)?;
    file.flush().map_err(io_err)?;

    let start = Instant::now();
    let mut child = Command::new(command.program())
        .args(command.args_for(file.path()))
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| match source.kind() {
            io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied => SolverError::NotFound {
                command: command.template.clone(),
                source,
            },
            _ => io_err(source),
        })?;
    let out = drain(child.stdout.take().expect("piped stdout"));
    let err = drain(child.stderr.take().expect("piped stderr"));
    let status = wait_until(&mut child, start + timeout).map_err(io_err)?;
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.join().unwrap_or_default()).into_owned();
    let stderr = String::from_utf8_lossy(&err.join().unwrap_or_default()).into_owned();

    let Some(status) = status else {
        return Ok(SatResult {
            verdict: Verdict::Unknown,
            assignment: None,
            stderr,
            elapsed,
            timed_out: true,
        });
    };
    let unparseable = |reason: String| SolverError::Unparseable {
        command: command.template.clone(),
        reason,
    };
    let Some((verdict, rest)) = split_verdict(&stdout) else {
        if status.success() {
            return Err(unparseable(format!("no verdict in output `{}`", stdout.trim())));
        }
        return Err(SolverError::Crashed {
            command: command.template.clone(),
            status: status.to_string(),
            stderr: if stderr.trim().is_empty() { stdout } else { stderr },
        });
    };
    let assignment = match verdict {
        Verdict::Sat if rest.trim().is_empty() => Some(Assignment::new()),
        Verdict::Sat => Some(parse_value_response(rest.trim()).map_err(|e| unparseable(e.0))?),
        _ => None,
    };
    Ok(SatResult {
        verdict,
        assignment,
        stderr,
        elapsed,
        timed_out: false,
    })
}

/// [`SmtBackend`] that emits each unit and hands it to an external solver.
#[derive(Debug)]
pub struct ExternalSolver {
    pub command: SolverCommand,
    pub timeout: Duration,
    pub calls: usize,
    pub elapsed: Duration,
    pub timed_out: bool,
}

impl ExternalSolver {
    pub fn new(command: SolverCommand, timeout: Duration) -> Self {
        ExternalSolver {
            command,
            timeout,
            calls: 0,
            elapsed: Duration::ZERO,
            timed_out: false,
        }
    }
}

impl SmtBackend for ExternalSolver {
    type Error = SolverError;

    fn check(&mut self, unit: &EmissionUnit) -> Result<SatOutcome, SolverError> {
        let text = unit.to_smtlib()?;
        let result = solve(&text, &self.command, self.timeout)?;
        self.calls += 1;
        self.elapsed += result.elapsed;
        self.timed_out |= result.timed_out;
        if let Some(a) = &result.assignment {
            if let Some(missing) = unit.query.iter().find(|q| !a.contains_key(*q)) {
                return Err(SolverError::Unparseable {
                    command: self.command.template.clone(),
                    reason: format!("no value for `{missing}`"),
                });
            }
        }
        Ok(SatOutcome {
            verdict: result.verdict,
            assignment: result.assignment,
        })
    }
}
