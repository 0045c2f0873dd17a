use std::collections::{BTreeMap, BTreeSet};

use lpsmt_core::completion::clark_completion;
use lpsmt_core::formula::{BodyAux, Valuation};
use lpsmt_core::gen::{random_program, Shape};
use lpsmt_core::oracle::{
    brute_force_answer_sets, brute_force_answer_sets_capped, brute_force_completion_models,
    find_level_ranking, positive_cycles,
};
use lpsmt_core::ranking::ranking_vars;
use lpsmt_core::{AtomId, DependencyInfo, Program, ProgramBuilder};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn program(seed: u64, shape: Shape) -> Program {
    random_program(&mut ChaCha8Rng::seed_from_u64(seed), &shape)
}

fn project(sets: Vec<BTreeSet<AtomId>>, onto: &Program) -> BTreeSet<BTreeSet<AtomId>> {
    sets.into_iter()
        .map(|s| s.into_iter().filter(|a| onto.atoms.contains_key(a)).collect())
        .collect()
}

#[test]
fn single_choice_elimination_matches_choice_semantics() {
    let mut b = ProgramBuilder::new();
    b.choice(&["a"], &[], &[]);
    let p = b.build();
    let q = p.eliminate_choice_rules();
    assert_eq!(q.atoms.len(), 2);
    let a = p.atom_by_name("a").unwrap();
    let expected = BTreeSet::from([BTreeSet::new(), BTreeSet::from([a])]);
    assert_eq!(project(brute_force_answer_sets(&q).unwrap(), &p), expected);
    assert_eq!(project(brute_force_answer_sets(&p).unwrap(), &p), expected);
}

#[test]
fn conditional_choice_elimination() {
    // {a; b} :- c. over every value of c
    for c_fact in [false, true] {
        let mut b = ProgramBuilder::new();
        b.choice(&["a", "b"], &["c"], &[]);
        if c_fact {
            b.fact("c");
        }
        let p = b.build();
        let q = p.eliminate_choice_rules();
        let direct = project(brute_force_answer_sets(&p).unwrap(), &p);
        assert_eq!(project(brute_force_answer_sets(&q).unwrap(), &p), direct);
        assert_eq!(direct.len(), if c_fact { 4 } else { 1 });
    }
}

#[test]
fn body_auxiliaries_are_forced() {
    // For every assignment to atoms and auxiliaries that satisfies the
    // completion, each auxiliary equals its body.
    struct Free<'a> {
        atoms: &'a BTreeSet<AtomId>,
        bodies: &'a BTreeMap<BodyAux, bool>,
    }
    impl Valuation for Free<'_> {
        fn atom(&self, a: AtomId) -> Option<bool> {
            Some(self.atoms.contains(&a))
        }
        fn body(&self, b: BodyAux) -> Option<bool> {
            self.bodies.get(&b).copied()
        }
    }
    for seed in 0..40 {
        let p = program(seed, Shape { max_body: 3, ..Shape::cyclic(5, 6) });
        let c = clark_completion(&p);
        let atoms: Vec<AtomId> = p.atoms.keys().copied().collect();
        let auxes: Vec<BodyAux> = c.bodies.iter().map(|d| d.aux).collect();
        for amask in 0u32..(1 << atoms.len()) {
            let set: BTreeSet<AtomId> = atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| amask & (1 << i) != 0)
                .map(|(_, a)| *a)
                .collect();
            for bmask in 0u32..(1 << auxes.len()) {
                let bodies: BTreeMap<BodyAux, bool> = auxes
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (*b, bmask & (1 << i) != 0))
                    .collect();
                let v = Free { atoms: &set, bodies: &bodies };
                if c.formulas.iter().all(|f| f.eval(&v) == Some(true)) {
                    for d in &c.bodies {
                        assert_eq!(Some(bodies[&d.aux]), d.body.eval(&v));
                    }
                }
            }
        }
    }
}

#[test]
fn ranking_bound_is_tight_for_rings() {
    for len in 1..=5 {
        let mut b = ProgramBuilder::new();
        for i in 0..len {
            b.rule(&format!("a{i}"), &[&format!("a{}", (i + len - 1) % len)], &[]);
        }
        b.rule("a0", &["e"], &[]).fact("e");
        let p = b.build();
        let d = DependencyInfo::compute(&p);
        assert_eq!(d.nontrivial.len(), 1);
        let scc = *d.nontrivial.iter().next().unwrap();
        assert_eq!(d.ranking_upper_bound(scc) as usize, len);
        let sets = brute_force_answer_sets(&p).unwrap();
        assert_eq!(sets.len(), 1);
        let bound = d.ranking_upper_bound(scc);
        assert!(find_level_ranking(&p, &sets[0], |_| bound).is_some());
        assert!(find_level_ranking(&p, &sets[0], |_| bound - 1).is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smodels_round_trip(seed in any::<u64>(), atoms in 1usize..10, rules in 0usize..15) {
        let shape = Shape { choice_rules: 3, denials: 2, ..Shape::cyclic(atoms, rules) };
        let p = program(seed, shape);
        let text = p.to_smodels();
        let q = Program::parse_smodels(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(q.to_smodels(), text);
    }

    #[test]
    fn choice_elimination_is_idempotent(seed in any::<u64>(), atoms in 1usize..10) {
        let p = program(seed, Shape { choice_rules: 4, ..Shape::cyclic(atoms, 12) });
        let once = p.eliminate_choice_rules();
        prop_assert!(!once.has_choice_rules());
        prop_assert_eq!(once.eliminate_choice_rules(), once);
    }

    #[test]
    fn choice_elimination_preserves_answer_sets(seed in any::<u64>(), atoms in 1usize..9) {
        let p = program(seed, Shape { choice_rules: 3, denials: 1, ..Shape::cyclic(atoms, 10) });
        let q = p.eliminate_choice_rules();
        let direct = project(brute_force_answer_sets(&p).unwrap(), &p);
        let eliminated = project(brute_force_answer_sets_capped(&q, 20).unwrap(), &p);
        prop_assert_eq!(eliminated, direct);
    }

    #[test]
    fn answer_sets_are_completion_models(seed in any::<u64>(), atoms in 1usize..=10, rules in 0usize..=15) {
        let p = program(seed, Shape { denials: 2, ..Shape::cyclic(atoms, rules) });
        let answers = brute_force_answer_sets(&p).unwrap();
        let models: BTreeSet<_> = brute_force_completion_models(&p).unwrap().into_iter().collect();
        for a in answers {
            prop_assert!(models.contains(&a));
        }
    }

    #[test]
    fn tight_completion_equals_answer_sets(seed in any::<u64>(), atoms in 1usize..=8, rules in 0usize..=15) {
        let p = program(seed, Shape { denials: 2, ..Shape::tight(atoms, rules) });
        let d = DependencyInfo::compute(&p);
        prop_assert!(d.is_tight());
        prop_assert_eq!(
            brute_force_completion_models(&p).unwrap(),
            brute_force_answer_sets(&p).unwrap()
        );
    }

    #[test]
    fn tightness_implies_fages(seed in any::<u64>(), atoms in 1usize..=8, rules in 0usize..=15) {
        let p = program(seed, Shape::cyclic(atoms, rules));
        if DependencyInfo::compute(&p).is_tight() {
            prop_assert_eq!(
                brute_force_completion_models(&p).unwrap(),
                brute_force_answer_sets(&p).unwrap()
            );
        }
    }

    #[test]
    fn components_are_consistent(seed in any::<u64>(), atoms in 1usize..=12, rules in 0usize..=20) {
        let p = program(seed, Shape::cyclic(atoms, rules));
        let d = DependencyInfo::compute(&p);
        prop_assert_eq!(&d, &DependencyInfo::compute(&p));
        // condensation is acyclic: every edge goes to an equal or lower index
        for (h, bodies) in &d.edges {
            for b in bodies {
                prop_assert!(d.component_of[b] <= d.component_of[h]);
            }
        }
        // every atom sits in exactly the component listing it
        for (i, members) in d.components.iter().enumerate() {
            for m in members {
                prop_assert_eq!(d.component_of[m], i);
            }
        }
        prop_assert_eq!(d.component_of.len(), p.atoms.len());
        // nontrivial components agree with the closure-based computation
        let tarjan: BTreeSet<BTreeSet<AtomId>> = d
            .nontrivial
            .iter()
            .map(|&c| d.components[c].iter().copied().collect())
            .collect();
        let closure: BTreeSet<BTreeSet<AtomId>> = positive_cycles(&p).into_iter().collect();
        prop_assert_eq!(tarjan, closure);
        // ranking variables exist exactly for atoms on positive cycles
        let ranked: BTreeSet<AtomId> = ranking_vars(&d).iter().map(|v| v.atom).collect();
        let cyclic: BTreeSet<AtomId> = positive_cycles(&p).into_iter().flatten().collect();
        prop_assert_eq!(ranked, cyclic);
    }

    #[test]
    fn answer_sets_admit_bounded_rankings(seed in any::<u64>(), atoms in 2usize..=10) {
        let p = program(seed, Shape::cyclic(atoms, 15));
        let cycles = positive_cycles(&p);
        prop_assume!(cycles.iter().all(|c| c.len() <= 5));
        for x in brute_force_answer_sets(&p).unwrap() {
            prop_assert!(find_level_ranking(&p, &x, |c| c.len() as u32).is_some());
        }
    }
}
