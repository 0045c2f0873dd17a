mod common;

use std::time::{Duration, Instant};

use lpsmt::solver::{solve, SolverCommand, SolverError};
use lpsmt_core::rational::parse_decimal;
use lpsmt_core::{Rational, Value, Verdict};

use common::{installed_solvers, TIMEOUT};

const SAT_A: &str = "(set-logic QF_LIA)\n(declare-fun |a| () Bool)\n(assert |a|)\n(check-sat)\n(get-value (|a|))\n";
const UNSAT_A: &str =
    "(set-logic QF_LIA)\n(declare-fun |a| () Bool)\n(assert |a|)\n(assert (not |a|))\n(check-sat)\n(get-value (|a|))\n";

fn sh(script: &str) -> SolverCommand {
    SolverCommand::parse(&format!("sh -c '{script}'")).unwrap()
}

#[test]
fn forced_assignment_is_sat() {
    for solver in installed_solvers() {
        let r = solve(SAT_A, &solver, TIMEOUT).unwrap();
        assert_eq!(r.verdict, Verdict::Sat, "{solver}");
        assert_eq!(r.assignment.unwrap()["a"], Value::Bool(true));
        assert!(!r.timed_out);
    }
}

#[test]
fn contradiction_is_unsat_without_assignment() {
    for solver in installed_solvers() {
        let r = solve(UNSAT_A, &solver, TIMEOUT).unwrap();
        assert_eq!(r.verdict, Verdict::Unsat, "{solver}");
        assert_eq!(r.assignment, None);
    }
}

#[test]
fn negative_and_fractional_values_are_exact() {
    let script = "(set-logic QF_LIRA)\n(declare-fun |x| () Int)\n(declare-fun |y| () Real)\n\
                  (assert (= |x| (- 3)))\n(assert (= (* 4.0 |y|) (- 3.0)))\n(check-sat)\n(get-value (|x| |y|))\n";
    for solver in installed_solvers() {
        let a = solve(script, &solver, TIMEOUT).unwrap().assignment.unwrap();
        assert_eq!(a["x"].as_rational(), Some(Rational::from_integer((-3).into())), "{solver}");
        assert_eq!(a["y"].as_rational(), parse_decimal("-0.75"), "{solver}");
    }
}

#[test]
fn nonexistent_solver() {
    let cmd = SolverCommand::parse("/nonexistent/solver-binary {file}").unwrap();
    let err = solve(SAT_A, &cmd, TIMEOUT).unwrap_err();
    assert!(matches!(err, SolverError::NotFound { .. }));
    assert!(err.to_string().contains("/nonexistent/solver-binary"));
}

#[test]
fn crash_without_verdict() {
    let err = solve(SAT_A, &sh("echo boom >&2; exit 3"), TIMEOUT).unwrap_err();
    match err {
        SolverError::Crashed { stderr, .. } => assert!(stderr.contains("boom")),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn verdict_with_malformed_values() {
    let err = solve(SAT_A, &sh("echo sat; echo \"((|a| tru)\""), TIMEOUT).unwrap_err();
    assert!(matches!(err, SolverError::Unparseable { .. }), "{err:?}");
}

#[test]
fn status_token_wins_over_exit_code() {
    // z3 exits nonzero when get-value follows unsat
    let r = solve(UNSAT_A, &sh("echo unsat; echo \"(error x)\"; exit 1"), TIMEOUT).unwrap();
    assert_eq!(r.verdict, Verdict::Unsat);
}

#[test]
fn script_path_is_passed() {
    let r = solve(SAT_A, &sh("grep -q \"assert |a|\" \"$0\" && echo sat && echo \"((|a| true))\""), TIMEOUT)
        .unwrap();
    assert_eq!(r.verdict, Verdict::Sat);
}

#[test]
fn timeout_kills_and_reaps() {
    let dir = tempfile::tempdir().unwrap();
    let pidfile = dir.path().join("pid");
    let cmd = sh(&format!("echo $$ > {}; exec sleep 30", pidfile.display()));
    let start = Instant::now();
    let r = solve(SAT_A, &cmd, Duration::from_millis(300)).unwrap();
    assert!(start.elapsed() < Duration::from_secs(10));
    assert_eq!(r.verdict, Verdict::Unknown);
    assert!(r.timed_out);
    assert_eq!(r.assignment, None);
    let pid = std::fs::read_to_string(&pidfile).unwrap();
    // neither running nor a zombie
    assert!(!std::path::Path::new(&format!("/proc/{}", pid.trim())).exists());
}
