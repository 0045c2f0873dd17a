//! SMT-LIB2 text generation.
//!
//! Every symbol is emitted `|quoted|`. Internal symbols live under reserved
//! prefixes, and user atom names that would collide with them are escaped,
//! so the mapping from internal symbols to emitted names is injective:
//!
//! | prefix | meaning                                   |
//! |--------|-------------------------------------------|
//! | `lr_`  | ranking variable of an atom               |
//! | `bd_`  | body auxiliary of a rule                  |
//! | `ch_`  | choice auxiliary of an atom               |
//! | `hd_`  | hidden (unnamed) atom                     |
//! | `nv_`  | numeric theory variable                   |
//! | `esc_` | user atom name that starts with a prefix  |
//! | `hx_`  | user atom name that cannot be quoted      |

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::formula::{BodyAux, BoolVar, Formula};
use crate::program::{Atom, AtomId};
use crate::rational::Rational;
use crate::theory::{LinearConstraint, NumSort};

pub const RESERVED_PREFIXES: [&str; 7] = ["lr_", "bd_", "ch_", "hd_", "nv_", "esc_", "hx_"];

/// Emitted name of a user-visible atom name.
pub fn user_symbol(name: &str) -> String {
    let quotable = !name.is_empty()
        && name
            .chars()
            .all(|c| c != '|' && c != '\\' && (c == ' ' || c.is_ascii_graphic() || !c.is_ascii()));
    if !quotable {
        let mut out = String::from("hx_");
        for b in name.bytes() {
            let _ = write!(out, "{b:02x}");
        }
        out
    } else if RESERVED_PREFIXES.iter().any(|p| name.starts_with(p)) {
        format!("esc_{name}")
    } else {
        name.to_string()
    }
}

pub fn atom_symbol(atom: &Atom) -> String {
    match (&atom.name, atom.choice_aux_of) {
        (Some(name), _) => user_symbol(name),
        (None, Some(of)) => format!("ch_{of}"),
        (None, None) => format!("hd_{}", atom.id),
    }
}

pub fn body_symbol(aux: BodyAux) -> String {
    format!("bd_{}", aux.0)
}

pub fn rank_symbol(atom_symbol: &str) -> String {
    format!("lr_{atom_symbol}")
}

pub fn numeric_symbol(var: &str) -> String {
    format!("nv_{var}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Logic {
    QfLia,
    QfLira,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::QfLia => "QF_LIA",
            Logic::QfLira => "QF_LIRA",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmtSort {
    Bool,
    Int,
    Real,
}

impl SmtSort {
    fn name(self) -> &'static str {
        match self {
            SmtSort::Bool => "Bool",
            SmtSort::Int => "Int",
            SmtSort::Real => "Real",
        }
    }
}

impl From<NumSort> for SmtSort {
    fn from(s: NumSort) -> Self {
        match s {
            NumSort::Int => SmtSort::Int,
            NumSort::Real => SmtSort::Real,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub symbol: String,
    pub sort: SmtSort,
}

/// Maps atoms and numeric variables to their emitted names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub atoms: BTreeMap<AtomId, String>,
    pub numeric: BTreeMap<String, String>,
}

impl SymbolTable {
    fn resolve_var(&self, var: &BoolVar) -> Result<String, EmitError> {
        match var {
            BoolVar::Atom(a) => self
                .atoms
                .get(a)
                .cloned()
                .ok_or_else(|| EmitError::UndeclaredSymbol(format!("atom {a}"))),
            BoolVar::Body(b) => Ok(body_symbol(*b)),
        }
    }

    fn resolve_rank(&self, atom: AtomId) -> Result<String, EmitError> {
        self.atoms
            .get(&atom)
            .map(|s| rank_symbol(s))
            .ok_or_else(|| EmitError::UndeclaredSymbol(format!("rank of atom {atom}")))
    }

    fn resolve_numeric(&self, name: &str) -> Result<String, EmitError> {
        self.numeric
            .get(name)
            .cloned()
            .ok_or_else(|| EmitError::UndeclaredSymbol(format!("variable {name}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmissionUnit {
    pub logic: Logic,
    pub declarations: Vec<Declaration>,
    pub assertions: Vec<Formula>,
    /// Symbols listed in the trailing `get-value`.
    pub query: Vec<String>,
    pub symbols: SymbolTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("symbol {0} is used but not declared")]
    UndeclaredSymbol(String),
}

struct Renderer<'a> {
    symbols: &'a SymbolTable,
    declared: BTreeMap<&'a str, SmtSort>,
}

impl Renderer<'_> {
    fn symbol(&self, name: &str, sort: SmtSort) -> Result<String, EmitError> {
        match self.declared.get(name) {
            Some(s) if *s == sort => Ok(format!("|{name}|")),
            _ => Err(EmitError::UndeclaredSymbol(format!("|{name}| of sort {}", sort.name()))),
        }
    }

    fn list(&self, op: &str, parts: &[Formula], empty: &str) -> Result<String, EmitError> {
        match parts {
            [] => Ok(empty.to_string()),
            [only] => self.render(only),
            _ => {
                let mut out = format!("({op}");
                for p in parts {
                    out.push(' ');
                    out.push_str(&self.render(p)?);
                }
                out.push(')');
                Ok(out)
            }
        }
    }

    fn render(&self, f: &Formula) -> Result<String, EmitError> {
        Ok(match f {
            Formula::Const(true) => "true".into(),
            Formula::Const(false) => "false".into(),
            Formula::Var(v) => self.symbol(&self.symbols.resolve_var(v)?, SmtSort::Bool)?,
            Formula::Not(g) => format!("(not {})", self.render(g)?),
            Formula::And(gs) => self.list("and", gs, "true")?,
            Formula::Or(gs) => self.list("or", gs, "false")?,
            Formula::Implies(l, r) => format!("(=> {} {})", self.render(l)?, self.render(r)?),
            Formula::Iff(l, r) => match **r {
                Formula::Const(true) => self.render(l)?,
                Formula::Const(false) => format!("(not {})", self.render(l)?),
                _ => format!("(= {} {})", self.render(l)?, self.render(r)?),
            },
            Formula::RankWithin { atom, upper } => {
                let lr = self.symbol(&self.symbols.resolve_rank(*atom)?, SmtSort::Int)?;
                format!("(and (<= 1 {lr}) (<= {lr} {upper}))")
            }
            Formula::RankAbove { atom, below } => {
                let hi = self.symbol(&self.symbols.resolve_rank(*atom)?, SmtSort::Int)?;
                let lo = self.symbol(&self.symbols.resolve_rank(*below)?, SmtSort::Int)?;
                format!("(> {hi} {lo})")
            }
            Formula::Linear(c) => self.linear(c)?,
        })
    }

    fn linear(&self, c: &LinearConstraint) -> Result<String, EmitError> {
        let real = c.has_real();
        let mut terms = Vec::with_capacity(c.terms.len());
        let rhs = if real {
            for t in &c.terms {
                let sym = self.symbol(&self.symbols.resolve_numeric(&t.var.name)?, t.var.sort.into())?;
                let var = match t.var.sort {
                    NumSort::Int => format!("(to_real {sym})"),
                    NumSort::Real => sym,
                };
                terms.push(if t.coeff.is_one() {
                    var
                } else {
                    format!("(* {} {var})", real_literal(&t.coeff))
                });
            }
            real_literal(&c.rhs)
        } else {
            // Clear denominators so everything stays in integer arithmetic.
            let scale = c
                .terms
                .iter()
                .map(|t| t.coeff.denom().clone())
                .fold(c.rhs.denom().clone(), |acc, d| acc.lcm(&d));
            let scale = Rational::from_integer(scale);
            for t in &c.terms {
                let sym = self.symbol(&self.symbols.resolve_numeric(&t.var.name)?, SmtSort::Int)?;
                let coeff = (&t.coeff * &scale).to_integer();
                terms.push(if coeff.is_one() {
                    sym
                } else {
                    format!("(* {} {sym})", int_literal(&coeff))
                });
            }
            int_literal(&(&c.rhs * &scale).to_integer())
        };
        let lhs = if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            format!("(+ {})", terms.join(" "))
        };
        Ok(format!("({} {lhs} {rhs})", c.relation.symbol()))
    }
}

fn int_literal(n: &BigInt) -> String {
    if n.sign() == Sign::Minus {
        format!("(- {})", n.abs())
    } else {
        n.to_string()
    }
}

fn real_literal(r: &Rational) -> String {
    let magnitude = r.abs();
    let body = if magnitude.denom().is_one() {
        format!("{}.0", magnitude.numer())
    } else {
        format!("(/ {}.0 {}.0)", magnitude.numer(), magnitude.denom())
    };
    if r.is_negative() {
        format!("(- {body})")
    } else if r.is_zero() {
        "0.0".into()
    } else {
        body
    }
}

impl EmissionUnit {
    /// Renders the unit as an SMT-LIB2 script. The `get-value` command is
    /// left out when nothing is queried, since an empty term list is not
    /// valid SMT-LIB.
    pub fn to_smtlib(&self) -> Result<String, EmitError> {
        let mut declared = BTreeMap::new();
        for d in &self.declarations {
            declared.insert(d.symbol.as_str(), d.sort);
        }
        let renderer = Renderer {
            symbols: &self.symbols,
            declared,
        };
        let mut out = String::new();
        let _ = writeln!(out, "(set-logic {})", self.logic.name());
        for d in &self.declarations {
            let _ = writeln!(out, "(declare-fun |{}| () {})", d.symbol, d.sort.name());
        }
        for a in &self.assertions {
            let _ = writeln!(out, "(assert {})", renderer.render(a)?);
        }
        out.push_str("(check-sat)\n");
        if !self.query.is_empty() {
            let names: BTreeSet<&str> = self.declarations.iter().map(|d| d.symbol.as_str()).collect();
            let mut q = Vec::with_capacity(self.query.len());
            for s in &self.query {
                if !names.contains(s.as_str()) {
                    return Err(EmitError::UndeclaredSymbol(format!("|{s}| in get-value")));
                }
                q.push(format!("|{s}|"));
            }
            let _ = writeln!(out, "(get-value ({}))", q.join(" "));
        }
        Ok(out)
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Renders `unit` as SMT-LIB2 text.
pub fn emit_smtlib(unit: &EmissionUnit) -> Result<String, EmitError> {
    unit.to_smtlib()
}
