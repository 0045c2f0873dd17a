//! Level-ranking formulas for atoms on positive cycles.
//!
//! Every atom `a` in a nontrivial component `C` gets an integer rank
//! `lr(a)` in `[1, |C|]`. If `a` is true, some rule for `a` must have a true
//! body whose positive atoms from `C` all have smaller ranks. Atoms outside
//! nontrivial components never get a rank.

use alloc::vec::Vec;

use crate::completion::rule_support;
use crate::dependency::{DependencyInfo, SccIndex};
use crate::formula::Formula;
use crate::program::{AtomId, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankingVar {
    pub atom: AtomId,
    pub scc: SccIndex,
    pub upper: u32,
}

impl RankingVar {
    pub const LOWER: u32 = 1;
}

/// One ranking variable per atom of a nontrivial component, by atom id.
pub fn ranking_vars(dependency: &DependencyInfo) -> Vec<RankingVar> {
    dependency
        .component_of
        .iter()
        .filter(|(_, scc)| dependency.nontrivial.contains(scc))
        .map(|(&atom, &scc)| RankingVar {
            atom,
            scc,
            upper: dependency.ranking_upper_bound(scc),
        })
        .collect()
}

/// Bound formulas for every ranking variable followed by one support
/// formula per ranked atom. Empty for tight programs.
pub fn level_ranking_formulas(program: &Program, dependency: &DependencyInfo) -> Vec<Formula> {
    let vars = ranking_vars(dependency);
    let mut formulas: Vec<Formula> = vars
        .iter()
        .map(|v| Formula::RankWithin {
            atom: v.atom,
            upper: v.upper,
        })
        .collect();

    for var in &vars {
        let mut alternatives = Vec::new();
        for (index, rule) in program.rules.iter().enumerate() {
            if !rule.heads.contains(&var.atom) {
                continue;
            }
            let mut conj = alloc::vec![rule_support(program, index)];
            conj.extend(
                rule.pos
                    .iter()
                    .filter(|b| dependency.component_of.get(b) == Some(&var.scc))
                    .map(|&b| Formula::RankAbove {
                        atom: var.atom,
                        below: b,
                    }),
            );
            alternatives.push(Formula::and(conj));
        }
        formulas.push(Formula::implies(
            Formula::atom(var.atom),
            Formula::or(alternatives),
        ));
    }
    formulas
}
