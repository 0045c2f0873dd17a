//! Assertion AST shared by the completion, ranking and theory translations.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::program::AtomId;
use crate::theory::LinearConstraint;
use crate::Rational;

/// Auxiliary Boolean standing for the body of the rule with this index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BodyAux(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolVar {
    Atom(AtomId),
    Body(BodyAux),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Var(BoolVar),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `1 <= lr(atom) <= upper`
    RankWithin { atom: AtomId, upper: u32 },
    /// `lr(atom) > lr(below)`
    RankAbove { atom: AtomId, below: AtomId },
    Linear(LinearConstraint),
}

impl Formula {
    pub fn atom(a: AtomId) -> Self {
        Formula::Var(BoolVar::Atom(a))
    }

    pub fn body(b: BodyAux) -> Self {
        Formula::Var(BoolVar::Body(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is `true` and a singleton is its
    /// only member.
    pub fn and(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::Const(true),
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; the empty disjunction is `false` and a singleton is its
    /// only member.
    pub fn or(mut parts: Vec<Formula>) -> Self {
        match parts.len() {
            0 => Formula::Const(false),
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    /// Evaluates the formula under three-valued logic: `None` means the
    /// value depends on symbols the valuation leaves unassigned.
    pub fn eval<V: Valuation + ?Sized>(&self, v: &V) -> Option<bool> {
        match self {
            Formula::Const(b) => Some(*b),
            Formula::Var(BoolVar::Atom(a)) => v.atom(*a),
            Formula::Var(BoolVar::Body(b)) => v.body(*b),
            Formula::Not(f) => f.eval(v).map(|b| !b),
            Formula::And(fs) => {
                let mut result = Some(true);
                for f in fs {
                    match f.eval(v) {
                        Some(false) => return Some(false),
                        None => result = None,
                        Some(true) => {}
                    }
                }
                result
            }
            Formula::Or(fs) => {
                let mut result = Some(false);
                for f in fs {
                    match f.eval(v) {
                        Some(true) => return Some(true),
                        None => result = None,
                        Some(false) => {}
                    }
                }
                result
            }
            Formula::Implies(l, r) => match (l.eval(v), r.eval(v)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Iff(l, r) => Some(l.eval(v)? == r.eval(v)?),
            Formula::RankWithin { atom, upper } => {
                let r = v.rank(*atom)?;
                Some(1 <= r && r <= i64::from(*upper))
            }
            Formula::RankAbove { atom, below } => Some(v.rank(*atom)? > v.rank(*below)?),
            Formula::Linear(c) => c.eval(|name| v.numeric(name)),
        }
    }

    /// Calls `f` on every subformula, including `self`.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            _ => {}
        }
    }
}

/// Source of symbol values for [`Formula::eval`].
pub trait Valuation {
    fn atom(&self, atom: AtomId) -> Option<bool>;

    fn body(&self, _aux: BodyAux) -> Option<bool> {
        None
    }

    fn rank(&self, _atom: AtomId) -> Option<i64> {
        None
    }

    fn numeric(&self, _name: &str) -> Option<Rational> {
        None
    }
}
