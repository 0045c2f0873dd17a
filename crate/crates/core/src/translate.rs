//! The whole translation: choice elimination, completion, level rankings
//! and theory definitions, collected into one [`EmissionUnit`].

use alloc::string::String;
use alloc::vec::Vec;

use crate::completion::clark_completion;
use crate::dependency::DependencyInfo;
use crate::program::{AtomId, Program};
use crate::ranking::{level_ranking_formulas, ranking_vars};
use crate::smt::{
    atom_symbol, body_symbol, numeric_symbol, rank_symbol, Declaration, EmissionUnit, Logic,
    SmtSort, SymbolTable,
};
use crate::theory::{NumVar, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibleAtom {
    pub id: AtomId,
    pub name: String,
    pub symbol: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TranslateOptions {
    /// Also query ranking variables, so answer sets carry a ranking witness.
    pub query_ranks: bool,
}

#[derive(Clone, Debug)]
pub struct Translation {
    /// The normal program actually translated (theory choices injected,
    /// choice rules eliminated).
    pub program: Program,
    pub dependency: DependencyInfo,
    pub unit: EmissionUnit,
    /// Named atoms in id order; blocking formulas range over these.
    pub visible: Vec<VisibleAtom>,
    pub numeric: Vec<(NumVar, String)>,
    /// Ranked atoms and their symbols, in id order.
    pub ranks: Vec<(AtomId, String)>,
    pub query_ranks: bool,
}

pub fn translate(program: &Program, theory: &Theory, options: TranslateOptions) -> Translation {
    let normal = theory.inject_choices(program).eliminate_choice_rules();
    let dependency = DependencyInfo::compute(&normal);
    let completion = clark_completion(&normal);

    let mut symbols = SymbolTable::default();
    let mut declarations = Vec::new();
    for atom in normal.atoms.values() {
        let sym = atom_symbol(atom);
        symbols.atoms.insert(atom.id, sym.clone());
        declarations.push(Declaration {
            symbol: sym,
            sort: SmtSort::Bool,
        });
    }
    for def in &completion.bodies {
        declarations.push(Declaration {
            symbol: body_symbol(def.aux),
            sort: SmtSort::Bool,
        });
    }
    let ranks: Vec<(AtomId, String)> = ranking_vars(&dependency)
        .iter()
        .map(|v| (v.atom, rank_symbol(&symbols.atoms[&v.atom])))
        .collect();
    for (_, sym) in &ranks {
        declarations.push(Declaration {
            symbol: sym.clone(),
            sort: SmtSort::Int,
        });
    }
    let numeric: Vec<(NumVar, String)> = theory
        .vars
        .iter()
        .map(|v| (v.clone(), numeric_symbol(&v.name)))
        .collect();
    for (var, sym) in &numeric {
        symbols.numeric.insert(var.name.clone(), sym.clone());
        declarations.push(Declaration {
            symbol: sym.clone(),
            sort: var.sort.into(),
        });
    }

    let visible: Vec<VisibleAtom> = normal
        .visible_atoms()
        .map(|a| VisibleAtom {
            id: a.id,
            name: a.name.clone().unwrap_or_default(),
            symbol: symbols.atoms[&a.id].clone(),
        })
        .collect();

    let mut query: Vec<String> = visible.iter().map(|v| v.symbol.clone()).collect();
    query.extend(numeric.iter().map(|(_, s)| s.clone()));
    if options.query_ranks {
        query.extend(ranks.iter().map(|(_, s)| s.clone()));
    }

    let mut assertions = completion.formulas;
    assertions.extend(level_ranking_formulas(&normal, &dependency));
    assertions.extend(theory.formulas());

    let logic = if theory.has_real() {
        Logic::QfLira
    } else {
        Logic::QfLia
    };

    Translation {
        program: normal,
        dependency,
        unit: EmissionUnit {
            logic,
            declarations,
            assertions,
            query,
            symbols,
        },
        visible,
        numeric,
        ranks,
        query_ranks: options.query_ranks,
    }
}
