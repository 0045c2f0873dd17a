//! Clark completion of a normal program.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::formula::{BodyAux, Formula};
use crate::program::{AtomId, Program, Rule};

/// Defining equivalence `aux <-> body` of a rule with two or more literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyDefinition {
    pub aux: BodyAux,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    /// Body definitions (by rule index), then one equivalence per atom (by
    /// atom id), then the compute-statement units.
    pub formulas: Vec<Formula>,
    pub bodies: Vec<BodyDefinition>,
}

/// Conjunction of the literals of `rule`.
pub fn rule_body(rule: &Rule) -> Formula {
    Formula::and(
        rule.pos
            .iter()
            .map(|a| Formula::atom(*a))
            .chain(rule.neg.iter().map(|a| Formula::not(Formula::atom(*a))))
            .collect(),
    )
}

/// What stands for the body of rule `index` inside the completion: the body
/// auxiliary when the body has at least two literals, the body itself
/// otherwise.
pub fn rule_support(program: &Program, index: usize) -> Formula {
    let rule = &program.rules[index];
    if rule.body_len() >= 2 {
        Formula::body(BodyAux(index))
    } else {
        rule_body(rule)
    }
}

/// Builds `a <-> body(r1) | ... | body(rk)` for every atom of a program
/// made of basic rules only.
pub fn clark_completion(program: &Program) -> Completion {
    let mut bodies = Vec::new();
    let mut formulas = Vec::new();
    let mut supports: BTreeMap<AtomId, Vec<Formula>> = BTreeMap::new();

    for (index, rule) in program.rules.iter().enumerate() {
        if rule.body_len() >= 2 {
            let def = BodyDefinition {
                aux: BodyAux(index),
                body: rule_body(rule),
            };
            formulas.push(Formula::iff(Formula::body(def.aux), def.body.clone()));
            bodies.push(def);
        }
        for &head in &rule.heads {
            supports
                .entry(head)
                .or_default()
                .push(rule_support(program, index));
        }
    }

    for &atom in program.atoms.keys() {
        let disjuncts = supports.remove(&atom).unwrap_or_default();
        formulas.push(Formula::iff(Formula::atom(atom), Formula::or(disjuncts)));
    }

    formulas.extend(program.assume_true.iter().map(|a| Formula::atom(*a)));
    formulas.extend(
        program
            .assume_false
            .iter()
            .map(|a| Formula::not(Formula::atom(*a))),
    );

    Completion { formulas, bodies }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{BoolVar, Valuation};
    use crate::program::ProgramBuilder;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    struct Assignment<'a> {
        atoms: BTreeSet<AtomId>,
        completion: &'a Completion,
    }

    impl Valuation for Assignment<'_> {
        fn atom(&self, atom: AtomId) -> Option<bool> {
            Some(self.atoms.contains(&atom))
        }

        fn body(&self, aux: BodyAux) -> Option<bool> {
            let def = self.completion.bodies.iter().find(|d| d.aux == aux)?;
            def.body.eval(self)
        }
    }

    /// Enumerates every subset of the program's atoms satisfying the
    /// completion.
    fn models(p: &Program) -> Vec<BTreeSet<&str>> {
        let c = clark_completion(p);
        let atoms: Vec<AtomId> = p.atoms.keys().copied().collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << atoms.len()) {
            let set: BTreeSet<AtomId> = atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| *a)
                .collect();
            let v = Assignment {
                atoms: set.clone(),
                completion: &c,
            };
            if c.formulas.iter().all(|f| f.eval(&v) == Some(true)) {
                out.push(set.iter().map(|a| p.atom_name(*a).unwrap()).collect());
            }
        }
        out
    }

    #[test]
    fn chain_completion() {
        let mut b = ProgramBuilder::new();
        b.rule("a", &["b"], &[]).fact("b");
        let p = b.build();
        let (a, bb) = (p.atom_by_name("a").unwrap(), p.atom_by_name("b").unwrap());
        let c = clark_completion(&p);
        assert_eq!(
            c.formulas,
            vec![
                Formula::iff(Formula::atom(a), Formula::atom(bb)),
                Formula::iff(Formula::atom(bb), Formula::Const(true)),
            ]
        );
        assert_eq!(models(&p), vec![BTreeSet::from(["a", "b"])]);
    }

    #[test]
    fn positive_loop_has_spurious_model() {
        let mut b = ProgramBuilder::new();
        b.rule("a", &["b"], &[]).rule("b", &["a"], &[]);
        let p = b.build();
        assert_eq!(
            models(&p),
            vec![BTreeSet::new(), BTreeSet::from(["a", "b"])]
        );
    }

    #[test]
    fn ruleless_atom_is_false() {
        let mut b = ProgramBuilder::new();
        b.rule("a", &[], &["c"]);
        let p = b.build();
        let c_id = p.atom_by_name("c").unwrap();
        let c = clark_completion(&p);
        assert!(c
            .formulas
            .contains(&Formula::iff(Formula::atom(c_id), Formula::Const(false))));
    }

    #[test]
    fn long_bodies_get_auxiliaries() {
        let mut b = ProgramBuilder::new();
        b.rule("a", &["b"], &["c"]).rule("a", &["d"], &[]);
        let p = b.build();
        let c = clark_completion(&p);
        assert_eq!(c.bodies.len(), 1);
        assert_eq!(c.bodies[0].aux, BodyAux(0));
        let a = p.atom_by_name("a").unwrap();
        let d = p.atom_by_name("d").unwrap();
        assert!(c.formulas.contains(&Formula::iff(
            Formula::atom(a),
            Formula::Or(vec![Formula::Var(BoolVar::Body(BodyAux(0))), Formula::atom(d)])
        )));
    }

    #[test]
    fn compute_statements_become_units() {
        let mut b = ProgramBuilder::new();
        b.fact("a").assume_true("a").assume_false("z");
        let p = b.build();
        let c = clark_completion(&p);
        let a = p.atom_by_name("a").unwrap();
        let z = p.atom_by_name("z").unwrap();
        assert_eq!(
            c.formulas[c.formulas.len() - 2..],
            [Formula::atom(a), Formula::not(Formula::atom(z))]
        );
    }
}
