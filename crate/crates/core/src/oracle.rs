//! Brute-force ground truth for small programs.
//!
//! Answer sets come straight from the Gelfond-Lifschitz definition over all
//! interpretations, with choice rules handled directly rather than through
//! [`Program::eliminate_choice_rules`]. Positive cycles are found by
//! transitive closure, independently of [`crate::dependency`]. Nothing here
//! goes through the SMT translation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::completion::{clark_completion, Completion};
use crate::formula::{BodyAux, Valuation};
use crate::program::{AtomId, Program, RuleKind};

pub type Interpretation = BTreeSet<AtomId>;

/// Default limit on the number of atoms the oracle will enumerate over.
pub const DEFAULT_ATOM_CAP: usize = 16;

/// `head :- body` without negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRule {
    pub head: AtomId,
    pub body: Vec<AtomId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("program has {atoms} atoms, more than the oracle cap of {cap}")]
    TooLarge { atoms: usize, cap: usize },
    #[error("completion models are only defined for programs without choice rules")]
    ChoiceRules,
}

/// Reduct of `program` relative to `interpretation`. A choice rule
/// `{H} :- B` contributes `h :- B+` for each `h` in `H` that is true in the
/// interpretation.
pub fn gl_reduct(program: &Program, interpretation: &Interpretation) -> Vec<PositiveRule> {
    let mut out = Vec::new();
    for rule in &program.rules {
        if rule.neg.iter().any(|a| interpretation.contains(a)) {
            continue;
        }
        for &head in &rule.heads {
            if rule.kind == RuleKind::Choice && !interpretation.contains(&head) {
                continue;
            }
            out.push(PositiveRule {
                head,
                body: rule.pos.clone(),
            });
        }
    }
    out
}

pub fn least_model(rules: &[PositiveRule]) -> Interpretation {
    let mut model = Interpretation::new();
    loop {
        let before = model.len();
        for r in rules {
            if r.body.iter().all(|a| model.contains(a)) {
                model.insert(r.head);
            }
        }
        if model.len() == before {
            return model;
        }
    }
}

struct Bits {
    atoms: Vec<AtomId>,
    index: BTreeMap<AtomId, usize>,
}

impl Bits {
    fn new(program: &Program, cap: usize) -> Result<Self, OracleError> {
        let atoms: Vec<AtomId> = program.atoms.keys().copied().collect();
        let cap = cap.min(63);
        if atoms.len() > cap {
            return Err(OracleError::TooLarge {
                atoms: atoms.len(),
                cap,
            });
        }
        let index = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        Ok(Bits { atoms, index })
    }

    fn mask<'a>(&self, ids: impl IntoIterator<Item = &'a AtomId>) -> u64 {
        ids.into_iter().fold(0, |m, a| m | 1 << self.index[a])
    }

    fn set(&self, mask: u64) -> Interpretation {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| *a)
            .collect()
    }
}

pub fn brute_force_answer_sets(program: &Program) -> Result<Vec<Interpretation>, OracleError> {
    brute_force_answer_sets_capped(program, DEFAULT_ATOM_CAP)
}

/// All answer sets satisfying the compute statement, in increasing order of
/// their bitmask over atoms sorted by id.
pub fn brute_force_answer_sets_capped(
    program: &Program,
    cap: usize,
) -> Result<Vec<Interpretation>, OracleError> {
    let bits = Bits::new(program, cap)?;
    // (head bits, positive body, negative body, is choice)
    let rules: Vec<(u64, u64, u64, bool)> = program
        .rules
        .iter()
        .map(|r| {
            (
                bits.mask(&r.heads),
                bits.mask(&r.pos),
                bits.mask(&r.neg),
                r.kind == RuleKind::Choice,
            )
        })
        .collect();
    let must = bits.mask(&program.assume_true);
    let must_not = bits.mask(&program.assume_false);

    let mut out = Vec::new();
    for candidate in 0..(1u64 << bits.atoms.len()) {
        if candidate & must != must || candidate & must_not != 0 {
            continue;
        }
        let reduct: Vec<(u64, u64)> = rules
            .iter()
            .filter(|(_, _, neg, _)| neg & candidate == 0)
            .map(|&(heads, pos, _, choice)| (if choice { heads & candidate } else { heads }, pos))
            .collect();
        let mut model = 0u64;
        loop {
            let next = reduct
                .iter()
                .filter(|(_, pos)| pos & model == *pos)
                .fold(model, |m, (heads, _)| m | heads);
            if next == model {
                break;
            }
            model = next;
        }
        if model == candidate {
            out.push(bits.set(candidate));
        }
    }
    Ok(out)
}

struct CompletionValuation<'a> {
    atoms: &'a Interpretation,
    completion: &'a Completion,
}

impl Valuation for CompletionValuation<'_> {
    fn atom(&self, atom: AtomId) -> Option<bool> {
        Some(self.atoms.contains(&atom))
    }

    fn body(&self, aux: BodyAux) -> Option<bool> {
        self.completion
            .bodies
            .iter()
            .find(|d| d.aux == aux)?
            .body
            .eval(self)
    }
}

pub fn brute_force_completion_models(program: &Program) -> Result<Vec<Interpretation>, OracleError> {
    brute_force_completion_models_capped(program, DEFAULT_ATOM_CAP)
}

/// All interpretations satisfying the Clark completion (compute statement
/// included), with body auxiliaries taking their defined values.
pub fn brute_force_completion_models_capped(
    program: &Program,
    cap: usize,
) -> Result<Vec<Interpretation>, OracleError> {
    if program.has_choice_rules() {
        return Err(OracleError::ChoiceRules);
    }
    let bits = Bits::new(program, cap)?;
    let completion = clark_completion(program);
    let mut out = Vec::new();
    for candidate in 0..(1u64 << bits.atoms.len()) {
        let atoms = bits.set(candidate);
        let v = CompletionValuation {
            atoms: &atoms,
            completion: &completion,
        };
        if completion.formulas.iter().all(|f| f.eval(&v) == Some(true)) {
            out.push(atoms);
        }
    }
    Ok(out)
}

/// Components of the positive dependency graph that lie on a cycle, found
/// by transitive closure. Sorted by smallest member.
pub fn positive_cycles(program: &Program) -> Vec<BTreeSet<AtomId>> {
    let atoms: Vec<AtomId> = program.atoms.keys().copied().collect();
    let n = atoms.len();
    let index: BTreeMap<AtomId, usize> = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let mut reach = vec![vec![false; n]; n];
    for rule in &program.rules {
        for h in &rule.heads {
            for b in &rule.pos {
                reach[index[h]][index[b]] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                let via = reach[k].clone();
                for (r, v) in reach[i].iter_mut().zip(via) {
                    *r |= v;
                }
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] || !reach[i][i] {
            continue;
        }
        let comp: BTreeSet<AtomId> = (0..n)
            .filter(|&j| j == i || (reach[i][j] && reach[j][i]))
            .inspect(|&j| seen[j] = true)
            .map(|j| atoms[j])
            .collect();
        out.push(comp);
    }
    out
}

/// Searches for ranks in `[1, bound(component)]` for the true atoms of every
/// positive cycle such that each of them is supported by a rule whose body
/// holds in `answer_set` and whose positive atoms from the same component
/// have strictly smaller ranks.
pub fn find_level_ranking(
    program: &Program,
    answer_set: &Interpretation,
    mut bound: impl FnMut(&BTreeSet<AtomId>) -> u32,
) -> Option<BTreeMap<AtomId, u32>> {
    let mut ranking = BTreeMap::new();
    for comp in positive_cycles(program) {
        let upper = bound(&comp);
        if upper == 0 {
            // every ranking variable must lie in [1, upper]
            return None;
        }
        let members: Vec<AtomId> = comp.intersection(answer_set).copied().collect();
        // For each true member: the same-component positive atoms of each
        // applicable rule.
        let supports: Vec<Vec<Vec<AtomId>>> = members
            .iter()
            .map(|a| {
                program
                    .rules
                    .iter()
                    .filter(|r| r.heads.contains(a))
                    .filter(|r| r.pos.iter().all(|b| answer_set.contains(b)))
                    .filter(|r| !r.neg.iter().any(|b| answer_set.contains(b)))
                    .map(|r| r.pos.iter().filter(|b| comp.contains(b)).copied().collect())
                    .collect()
            })
            .collect();
        let mut ranks = vec![1u32; members.len()];
        let valid = |ranks: &[u32]| {
            members.iter().enumerate().all(|(i, _)| {
                supports[i].iter().any(|below| {
                    below.iter().all(|b| {
                        let j = members.iter().position(|m| m == b).unwrap();
                        ranks[i] > ranks[j]
                    })
                })
            })
        };
        let mut found = members.is_empty() || valid(&ranks);
        // Odometer over [1, upper]^k.
        while !found && upper >= 1 {
            let mut i = 0;
            while i < ranks.len() && ranks[i] == upper {
                ranks[i] = 1;
                i += 1;
            }
            if i == ranks.len() {
                break;
            }
            ranks[i] += 1;
            found = valid(&ranks);
        }
        if !found {
            return None;
        }
        ranking.extend(members.into_iter().zip(ranks));
    }
    Some(ranking)
}
