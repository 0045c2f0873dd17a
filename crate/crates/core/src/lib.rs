//! Translation of ground answer set programs into SMT-LIB2.
//!
//! A program (basic and choice rules, read from smodels format) is turned
//! into its Clark completion; atoms on positive cycles additionally get
//! bounded integer level rankings, so that every model of the resulting
//! formula corresponds to exactly one answer set. Atoms may be bound to
//! linear constraints over integer and real variables. Answer sets are
//! enumerated by re-solving with blocking formulas through any
//! [`SmtBackend`].
//!
//! The crate is `no_std` and only needs `alloc`. Running an external solver
//! process, reading files and the command line live in the `lpsmt` crate.

#![no_std]

extern crate alloc;

pub mod completion;
pub mod dependency;
pub mod enumerate;
pub mod exhaustive;
pub mod formula;
#[cfg(feature = "gen")]
pub mod gen;
pub mod oracle;
pub mod program;
pub mod ranking;
pub mod rational;
pub mod smt;
pub mod theory;
pub mod translate;
pub mod value;

pub use completion::{clark_completion, Completion};
pub use dependency::DependencyInfo;
pub use enumerate::{
    blocking_assertion, enumerate_answer_sets, enumerate_translation, AnswerSet, Completeness,
    Enumeration, EnumerateError, SatOutcome, SmtBackend, Verdict,
};
pub use formula::Formula;
pub use program::{Atom, AtomId, ParseError, Program, ProgramBuilder, Rule, RuleKind};
pub use ranking::level_ranking_formulas;
pub use rational::Rational;
pub use smt::{emit_smtlib, EmissionUnit, EmitError};
pub use theory::{Theory, TheoryError};
pub use translate::{translate, TranslateOptions, Translation};
pub use value::{parse_value_response, Assignment, ResponseError, Value};
