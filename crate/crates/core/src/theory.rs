//! Theory atoms: program atoms bound to linear constraints over integer and
//! real variables.
//!
//! Side-file syntax, one statement per `;`, `%` starting a comment:
//!
//! ```text
//! var int x;
//! var real y;
//! constraint p: 2*y + -1*x <= 3.5;
//! ```

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::formula::Formula;
use crate::program::{AtomId, Program, Rule};
use crate::rational::{parse_decimal, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NumSort {
    Int,
    Real,
}

impl fmt::Display for NumSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NumSort::Int => "int",
            NumSort::Real => "real",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumVar {
    pub name: String,
    pub sort: NumSort,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Lt => lhs < rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearTerm {
    pub coeff: Rational,
    pub var: NumVar,
}

/// `sum(coeff * var) relation rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<LinearTerm>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn eval(&self, mut value: impl FnMut(&str) -> Option<Rational>) -> Option<bool> {
        let mut lhs = Rational::zero();
        for term in &self.terms {
            lhs += &term.coeff * value(&term.var.name)?;
        }
        Some(self.relation.holds(&lhs, &self.rhs))
    }

    pub fn has_real(&self) -> bool {
        self.terms.iter().any(|t| t.var.sort == NumSort::Real)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryAtomDef {
    pub atom: AtomId,
    pub atom_name: String,
    pub constraint: LinearConstraint,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    /// Declared variables in declaration order.
    pub vars: Vec<NumVar>,
    /// Definitions in file order.
    pub defs: Vec<TheoryAtomDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: `{name}` is not a visible atom of the program")]
    UnknownAtom { line: usize, name: String },
    #[error("line {line}: {what} defined more than once")]
    DuplicateDefinition { line: usize, what: String },
    #[error("line {line}: variable `{name}` is not declared")]
    UndeclaredVariable { line: usize, name: String },
    #[error("line {line}: variable `{name}` declared as both int and real")]
    SortClash { line: usize, name: String },
    #[error("line {line}: theory atom `{name}` occurs in a rule head")]
    AtomInHead { line: usize, name: String },
}

fn syntax(line: usize, reason: impl Into<String>) -> TheoryError {
    TheoryError::Syntax {
        line,
        reason: reason.into(),
    }
}

/// Splits the text into `;`-terminated statements with their starting line,
/// dropping `%` comments.
fn statements(text: &str) -> Result<Vec<(usize, String)>, TheoryError> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('%').next().unwrap_or_default();
        for ch in content.chars() {
            if current.trim().is_empty() {
                start = line;
            }
            if ch == ';' {
                let stmt = current.trim().to_string();
                if !stmt.is_empty() {
                    out.push((start, stmt));
                }
                current.clear();
            } else {
                current.push(ch);
            }
        }
        current.push(' ');
    }
    if !current.trim().is_empty() {
        return Err(syntax(start, "statement is missing its terminating `;`"));
    }
    Ok(out)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, PartialEq)]
enum Token<'a> {
    Num(&'a str),
    Ident(&'a str),
    Star,
    Plus,
    Minus,
    Rel(Relation),
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Token<'_>>, TheoryError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            b'+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            b'-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            b'<' | b'>' | b'=' => {
                let two = bytes.get(i + 1) == Some(&b'=');
                let rel = match (c, two) {
                    (b'<', true) => Relation::Le,
                    (b'<', false) => Relation::Lt,
                    (b'>', true) => Relation::Ge,
                    (b'>', false) => Relation::Gt,
                    (_, true) => {
                        return Err(syntax(line, "use `=` for equality"));
                    }
                    _ => Relation::Eq,
                };
                i += if two { 2 } else { 1 };
                tokens.push(Token::Rel(rel));
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                tokens.push(Token::Num(&text[start..i]));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(&text[start..i]));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(line, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(tokens)
}

fn number(line: usize, negative: bool, text: &str) -> Result<Rational, TheoryError> {
    let value = parse_decimal(text).ok_or_else(|| syntax(line, format!("bad number `{text}`")))?;
    Ok(if negative { -value } else { value })
}

/// Parses `LINEAR-EXPR REL CONST`.
fn parse_constraint(
    line: usize,
    text: &str,
    vars: &BTreeMap<String, NumSort>,
) -> Result<LinearConstraint, TheoryError> {
    let tokens = tokenize(line, text)?;
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut negate_next = false;
    let relation = loop {
        let mut negative = negate_next;
        negate_next = false;
        while let Some(Token::Minus) = tokens.get(pos) {
            negative = !negative;
            pos += 1;
        }
        let (coeff, name) = match (tokens.get(pos), tokens.get(pos + 1), tokens.get(pos + 2)) {
            (Some(Token::Num(n)), Some(Token::Star), Some(Token::Ident(v))) => {
                pos += 3;
                (number(line, negative, n)?, *v)
            }
            (Some(Token::Ident(v)), _, _) => {
                pos += 1;
                let one = Rational::from_integer(1.into());
                (if negative { -one } else { one }, *v)
            }
            (Some(Token::Num(_)), _, _) => {
                return Err(syntax(
                    line,
                    "constant terms are only allowed on the right-hand side",
                ));
            }
            _ => return Err(syntax(line, "expected a term `COEFF*VAR`")),
        };
        let sort = *vars
            .get(name)
            .ok_or_else(|| TheoryError::UndeclaredVariable {
                line,
                name: name.to_string(),
            })?;
        terms.push(LinearTerm {
            coeff,
            var: NumVar {
                name: name.to_string(),
                sort,
            },
        });
        match tokens.get(pos) {
            Some(Token::Plus) => pos += 1,
            Some(Token::Minus) => {
                pos += 1;
                negate_next = true;
            }
            Some(Token::Rel(r)) => {
                pos += 1;
                break *r;
            }
            _ => return Err(syntax(line, "expected `+` or a relation after a term")),
        }
    };
    let mut negative = false;
    while let Some(Token::Minus) = tokens.get(pos) {
        negative = !negative;
        pos += 1;
    }
    let rhs = match tokens.get(pos) {
        Some(Token::Num(n)) => number(line, negative, n)?,
        _ => return Err(syntax(line, "expected a constant after the relation")),
    };
    if pos + 1 != tokens.len() {
        return Err(syntax(line, "unexpected tokens after the constant"));
    }
    Ok(LinearConstraint {
        terms,
        relation,
        rhs,
    })
}

impl Theory {
    /// Reads a theory side file and binds its atoms to `program`.
    pub fn parse(text: &str, program: &Program) -> Result<Theory, TheoryError> {
        let stmts = statements(text)?;
        let mut sorts: BTreeMap<String, NumSort> = BTreeMap::new();
        let mut theory = Theory::default();
        let mut constraints = Vec::new();

        for (line, stmt) in &stmts {
            let line = *line;
            let (keyword, rest) = stmt
                .split_once(char::is_whitespace)
                .unwrap_or((stmt.as_str(), ""));
            match keyword {
                "var" => {
                    let mut parts = rest.split_whitespace();
                    let sort = match parts.next() {
                        Some("int") => NumSort::Int,
                        Some("real") => NumSort::Real,
                        other => {
                            return Err(syntax(
                                line,
                                format!("expected `int` or `real`, found `{}`", other.unwrap_or("")),
                            ))
                        }
                    };
                    let name = parts
                        .next()
                        .ok_or_else(|| syntax(line, "variable declaration without a name"))?;
                    if parts.next().is_some() || !is_identifier(name) {
                        return Err(syntax(line, format!("bad variable name in `{rest}`")));
                    }
                    match sorts.get(name) {
                        Some(s) if *s != sort => {
                            return Err(TheoryError::SortClash {
                                line,
                                name: name.to_string(),
                            })
                        }
                        Some(_) => {
                            return Err(TheoryError::DuplicateDefinition {
                                line,
                                what: format!("variable `{name}`"),
                            })
                        }
                        None => {
                            sorts.insert(name.to_string(), sort);
                            theory.vars.push(NumVar {
                                name: name.to_string(),
                                sort,
                            });
                        }
                    }
                }
                "constraint" => {
                    let (atom, expr) = rest
                        .rsplit_once(':')
                        .ok_or_else(|| syntax(line, "expected `constraint ATOM: EXPR`"))?;
                    constraints.push((line, atom.trim(), expr));
                }
                other => {
                    return Err(syntax(line, format!("unknown statement `{other}`")));
                }
            }
        }

        let heads = program.head_atoms();
        let mut defined = BTreeSet::new();
        for (line, name, expr) in constraints {
            let atom = program
                .atom_by_name(name)
                .ok_or_else(|| TheoryError::UnknownAtom {
                    line,
                    name: name.to_string(),
                })?;
            if !defined.insert(atom) {
                return Err(TheoryError::DuplicateDefinition {
                    line,
                    what: format!("theory atom `{name}`"),
                });
            }
            if heads.contains(&atom) {
                return Err(TheoryError::AtomInHead {
                    line,
                    name: name.to_string(),
                });
            }
            let constraint = parse_constraint(line, expr, &sorts)?;
            theory.defs.push(TheoryAtomDef {
                atom,
                atom_name: name.to_string(),
                constraint,
            });
        }
        Ok(theory)
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.defs.is_empty()
    }

    pub fn has_real(&self) -> bool {
        self.vars.iter().any(|v| v.sort == NumSort::Real)
    }

    /// Adds a bodiless choice rule `{ta}` for every theory atom so that its
    /// truth value is left to the constraint.
    pub fn inject_choices(&self, program: &Program) -> Program {
        let mut out = program.clone();
        for def in &self.defs {
            out.rules
                .push(Rule::choice(alloc::vec![def.atom], Vec::new(), Vec::new()));
        }
        out
    }

    /// `ta <-> constraint` for every definition.
    pub fn formulas(&self) -> Vec<Formula> {
        self.defs
            .iter()
            .map(|d| Formula::iff(Formula::atom(d.atom), Formula::Linear(d.constraint.clone())))
            .collect()
    }

    /// Checks that `value` agrees with the constraint for every definition
    /// whose atom is in `true_atoms`, and with its negation otherwise.
    pub fn agrees(
        &self,
        true_atoms: &BTreeSet<AtomId>,
        mut value: impl FnMut(&str) -> Option<Rational>,
    ) -> Option<bool> {
        for def in &self.defs {
            let holds = def.constraint.eval(&mut value)?;
            if holds != true_atoms.contains(&def.atom) {
                return Some(false);
            }
        }
        Some(true)
    }
}
