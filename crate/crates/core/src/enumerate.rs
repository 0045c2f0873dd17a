//! Answer-set enumeration by repeated solving with blocking formulas.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::formula::Formula;
use crate::program::{AtomId, Program};
use crate::rational::Rational;
use crate::smt::EmissionUnit;
use crate::theory::Theory;
use crate::translate::{translate, TranslateOptions, Translation};
use crate::value::{Assignment, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatOutcome {
    pub verdict: Verdict,
    /// Values of the unit's query symbols, present iff `Sat`.
    pub assignment: Option<Assignment>,
}

/// Anything that can decide an [`EmissionUnit`].
pub trait SmtBackend {
    type Error;

    fn check(&mut self, unit: &EmissionUnit) -> Result<SatOutcome, Self::Error>;
}

impl<B: SmtBackend + ?Sized> SmtBackend for &mut B {
    type Error = B::Error;

    fn check(&mut self, unit: &EmissionUnit) -> Result<SatOutcome, Self::Error> {
        (**self).check(unit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerSet {
    /// Names of the true visible atoms, sorted.
    pub atoms: Vec<String>,
    pub atom_ids: BTreeSet<AtomId>,
    /// Values of the theory variables, when the program has any.
    pub numeric: Option<BTreeMap<String, Rational>>,
    /// `lr_` symbol to rank, when ranks were queried and the program has any.
    pub ranking: Option<BTreeMap<String, i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    /// The solver reported unsat: no further answer sets exist.
    Exhausted,
    /// The requested number of answer sets was reached.
    LimitReached,
    /// The solver gave up; the answer sets found so far are partial.
    Interrupted,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub answer_sets: Vec<AnswerSet>,
    pub completeness: Completeness,
    /// One blocking formula per answer set, in the order they were added.
    pub blocking: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError<E> {
    #[error(transparent)]
    Backend(E),
    #[error("solver reported sat without a value for `{0}`")]
    MissingValue(String),
    #[error("solver returned a non-{expected} value `{value}` for `{symbol}`")]
    IllTyped {
        symbol: String,
        expected: &'static str,
        value: String,
    },
}

/// The disjunction saying that at least one visible atom takes a value
/// different from `true_atoms`.
pub fn blocking_assertion(true_atoms: &BTreeSet<AtomId>, visible: &[AtomId]) -> Formula {
    Formula::or(
        visible
            .iter()
            .map(|&a| {
                if true_atoms.contains(&a) {
                    Formula::not(Formula::atom(a))
                } else {
                    Formula::atom(a)
                }
            })
            .collect(),
    )
}

fn lookup<'a, E>(assignment: &'a Assignment, symbol: &str) -> Result<&'a Value, EnumerateError<E>> {
    assignment
        .get(symbol)
        .ok_or_else(|| EnumerateError::MissingValue(symbol.into()))
}

fn ill_typed<E>(symbol: &str, expected: &'static str, value: &Value) -> EnumerateError<E> {
    EnumerateError::IllTyped {
        symbol: symbol.into(),
        expected,
        value: alloc::format!("{value}"),
    }
}

fn read_answer_set<E>(t: &Translation, assignment: &Assignment) -> Result<AnswerSet, EnumerateError<E>> {
    let mut atoms = Vec::new();
    let mut atom_ids = BTreeSet::new();
    for v in &t.visible {
        let value = lookup(assignment, &v.symbol)?;
        if value.as_bool().ok_or_else(|| ill_typed(&v.symbol, "Boolean", value))? {
            atoms.push(v.name.clone());
            atom_ids.insert(v.id);
        }
    }
    atoms.sort();

    let numeric = if t.numeric.is_empty() {
        None
    } else {
        let mut out = BTreeMap::new();
        for (var, sym) in &t.numeric {
            let value = lookup(assignment, sym)?;
            let r = value
                .as_rational()
                .ok_or_else(|| ill_typed(sym, "numeric", value))?;
            out.insert(var.name.clone(), r);
        }
        Some(out)
    };

    let ranking = if t.query_ranks && !t.ranks.is_empty() {
        let mut out = BTreeMap::new();
        for (_, sym) in &t.ranks {
            let value = lookup(assignment, sym)?;
            let rank = match value {
                Value::Int(i) => i.to_i64(),
                _ => None,
            }
            .ok_or_else(|| ill_typed(sym, "integer", value))?;
            out.insert(sym.clone(), rank);
        }
        Some(out)
    } else {
        None
    };

    Ok(AnswerSet {
        atoms,
        atom_ids,
        numeric,
        ranking,
    })
}

/// Enumerates up to `limit` answer sets (0 for all) of a translated program.
/// Each round re-solves the whole unit with every blocking formula so far.
pub fn enumerate_translation<B: SmtBackend>(
    translation: &Translation,
    limit: usize,
    mut backend: B,
) -> Result<Enumeration, EnumerateError<B::Error>> {
    let visible: Vec<AtomId> = translation.visible.iter().map(|v| v.id).collect();
    let mut unit = translation.unit.clone();
    let mut answer_sets = Vec::new();
    let mut blocking = Vec::new();
    let completeness = loop {
        if limit != 0 && answer_sets.len() >= limit {
            break Completeness::LimitReached;
        }
        let outcome = backend.check(&unit).map_err(EnumerateError::Backend)?;
        match outcome.verdict {
            Verdict::Unsat => break Completeness::Exhausted,
            Verdict::Unknown => break Completeness::Interrupted,
            Verdict::Sat => {}
        }
        let assignment = outcome
            .assignment
            .ok_or_else(|| EnumerateError::MissingValue("<all>".into()))?;
        let answer_set = read_answer_set(translation, &assignment)?;
        let block = blocking_assertion(&answer_set.atom_ids, &visible);
        unit.assertions.push(block.clone());
        blocking.push(block);
        answer_sets.push(answer_set);
    };
    Ok(Enumeration {
        answer_sets,
        completeness,
        blocking,
    })
}

/// Translates `program` with `theory` and enumerates up to `limit` answer
/// sets (0 for all).
pub fn enumerate_answer_sets<B: SmtBackend>(
    program: &Program,
    theory: &Theory,
    limit: usize,
    backend: B,
) -> Result<Enumeration, EnumerateError<B::Error>> {
    let translation = translate(program, theory, TranslateOptions::default());
    enumerate_translation(&translation, limit, backend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn id(n: u32) -> AtomId {
        AtomId::new(n).unwrap()
    }

    #[test]
    fn blocking_flips_literals() {
        let (a, b) = (id(1), id(2));
        let fa = Formula::atom(a);
        let fb = Formula::atom(b);
        assert_eq!(
            blocking_assertion(&[a].into(), &[a, b]),
            Formula::Or(vec![Formula::not(fa.clone()), fb.clone()])
        );
        assert_eq!(
            blocking_assertion(&BTreeSet::new(), &[a, b]),
            Formula::Or(vec![fa.clone(), fb.clone()])
        );
        assert_eq!(
            blocking_assertion(&[a, b].into(), &[a, b]),
            Formula::Or(vec![Formula::not(fa), Formula::not(fb)])
        );
        assert_eq!(blocking_assertion(&BTreeSet::new(), &[]), Formula::Const(false));
    }
}
