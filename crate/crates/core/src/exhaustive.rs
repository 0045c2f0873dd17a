//! In-process [`SmtBackend`] that decides an [`EmissionUnit`] by exhaustive
//! search. Only meant for small units without numeric theory variables;
//! it lets the translation and the enumeration loop be exercised without an
//! external solver.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::enumerate::{SatOutcome, SmtBackend, Verdict};
use crate::formula::{BodyAux, BoolVar, Formula, Valuation};
use crate::program::AtomId;
use crate::smt::{rank_symbol, EmissionUnit};
use crate::value::{Assignment, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExhaustiveError {
    #[error("unit has {0} atoms, more than the search limit")]
    TooLarge(usize),
    #[error("numeric theory variables are not supported by exhaustive search")]
    NumericVariables,
}

#[derive(Clone, Copy, Debug)]
pub struct ExhaustiveBackend {
    pub max_atoms: usize,
}

impl Default for ExhaustiveBackend {
    fn default() -> Self {
        ExhaustiveBackend { max_atoms: 20 }
    }
}

struct Partial<'a> {
    atoms: &'a BTreeMap<AtomId, bool>,
    bodies: &'a BTreeMap<BodyAux, &'a Formula>,
    ranks: BTreeMap<AtomId, i64>,
}

impl Valuation for Partial<'_> {
    fn atom(&self, atom: AtomId) -> Option<bool> {
        self.atoms.get(&atom).copied()
    }

    fn body(&self, aux: BodyAux) -> Option<bool> {
        self.bodies.get(&aux)?.eval(self)
    }

    fn rank(&self, atom: AtomId) -> Option<i64> {
        self.ranks.get(&atom).copied()
    }
}

fn consistent(assertions: &[Formula], v: &Partial<'_>) -> Option<bool> {
    let mut all = Some(true);
    for f in assertions {
        match f.eval(v) {
            Some(false) => return Some(false),
            None => all = None,
            Some(true) => {}
        }
    }
    all
}

fn search_ranks(
    assertions: &[Formula],
    ranked: &[(AtomId, u32)],
    v: &mut Partial<'_>,
) -> bool {
    match consistent(assertions, v) {
        Some(false) => return false,
        Some(true) if v.ranks.len() == ranked.len() => return true,
        _ => {}
    }
    let Some(&(atom, upper)) = ranked.get(v.ranks.len()) else {
        return false;
    };
    for r in 1..=i64::from(upper) {
        v.ranks.insert(atom, r);
        if search_ranks(assertions, ranked, v) {
            return true;
        }
    }
    v.ranks.remove(&atom);
    false
}

impl SmtBackend for ExhaustiveBackend {
    type Error = ExhaustiveError;

    fn check(&mut self, unit: &EmissionUnit) -> Result<SatOutcome, ExhaustiveError> {
        if !unit.symbols.numeric.is_empty() {
            return Err(ExhaustiveError::NumericVariables);
        }
        let atoms: Vec<AtomId> = unit.symbols.atoms.keys().copied().collect();
        if atoms.len() > self.max_atoms {
            return Err(ExhaustiveError::TooLarge(atoms.len()));
        }
        let mut bodies = BTreeMap::new();
        let mut ranked = Vec::new();
        for f in &unit.assertions {
            match f {
                Formula::Iff(l, r) => {
                    if let Formula::Var(BoolVar::Body(b)) = **l {
                        bodies.insert(b, &**r);
                    }
                }
                Formula::RankWithin { atom, upper } => ranked.push((*atom, *upper)),
                _ => {}
            }
        }

        for mask in 0u64..(1 << atoms.len()) {
            let values: BTreeMap<AtomId, bool> = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (*a, mask & (1 << i) != 0))
                .collect();
            let mut v = Partial {
                atoms: &values,
                bodies: &bodies,
                ranks: BTreeMap::new(),
            };
            if !search_ranks(&unit.assertions, &ranked, &mut v) {
                continue;
            }
            let mut by_symbol: BTreeMap<&str, Value> = BTreeMap::new();
            let mut rank_names: Vec<(String, AtomId)> = Vec::new();
            for (id, sym) in &unit.symbols.atoms {
                by_symbol.insert(sym, Value::Bool(values[id]));
                rank_names.push((rank_symbol(sym), *id));
            }
            let mut assignment = Assignment::new();
            for q in &unit.query {
                let value = match by_symbol.get(q.as_str()) {
                    Some(val) => val.clone(),
                    None => {
                        let atom = rank_names.iter().find(|(s, _)| s == q).map(|(_, a)| *a);
                        let rank = atom.and_then(|a| v.ranks.get(&a)).copied().unwrap_or(1);
                        Value::Int(BigInt::from(rank))
                    }
                };
                assignment.insert(q.clone(), value);
            }
            return Ok(SatOutcome {
                verdict: Verdict::Sat,
                assignment: Some(assignment),
            });
        }
        Ok(SatOutcome {
            verdict: Verdict::Unsat,
            assignment: None,
        })
    }
}
