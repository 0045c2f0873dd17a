//! The full translate/enumerate loop, decided in-process by exhaustive
//! search and compared against the brute-force oracle.

use std::collections::BTreeSet;

use lpsmt_core::enumerate::{enumerate_translation, Completeness, Enumeration};
use lpsmt_core::exhaustive::ExhaustiveBackend;
use lpsmt_core::gen::{random_program, Shape};
use lpsmt_core::oracle::brute_force_answer_sets;
use lpsmt_core::{
    enumerate_answer_sets, translate, AtomId, EmissionUnit, Program, ProgramBuilder, SatOutcome,
    SmtBackend, Theory, TranslateOptions,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn enumerate(p: &Program, n: usize) -> Enumeration {
    enumerate_answer_sets(p, &Theory::default(), n, ExhaustiveBackend::default()).unwrap()
}

fn atom_sets(e: &Enumeration) -> Vec<Vec<&str>> {
    let mut v: Vec<Vec<&str>> = e
        .answer_sets
        .iter()
        .map(|a| a.atoms.iter().map(String::as_str).collect())
        .collect();
    v.sort();
    v
}

fn oracle_visible(p: &Program) -> BTreeSet<BTreeSet<AtomId>> {
    brute_force_answer_sets(p)
        .unwrap()
        .into_iter()
        .map(|s| s.into_iter().filter(|a| p.atom_name(*a).is_some()).collect())
        .collect()
}

#[test]
fn even_loop_has_two_answer_sets() {
    let mut b = ProgramBuilder::new();
    b.rule("p", &[], &["q"]).rule("q", &[], &["p"]);
    let e = enumerate(&b.build(), 0);
    assert_eq!(atom_sets(&e), vec![vec!["p"], vec!["q"]]);
    assert_eq!(e.completeness, Completeness::Exhausted);
}

#[test]
fn positive_loop_only_empty() {
    let mut b = ProgramBuilder::new();
    b.rule("a", &["b"], &[]).rule("b", &["a"], &[]);
    let e = enumerate(&b.build(), 0);
    assert_eq!(atom_sets(&e), vec![Vec::<&str>::new()]);
}

#[test]
fn limit_caps_enumeration() {
    let mut b = ProgramBuilder::new();
    b.choice(&["a"], &[], &[]).choice(&["b"], &[], &[]);
    let p = b.build();
    let e = enumerate(&p, 3);
    assert_eq!(e.answer_sets.len(), 3);
    assert_eq!(e.completeness, Completeness::LimitReached);
    let distinct: BTreeSet<_> = e.answer_sets.iter().map(|a| a.atoms.clone()).collect();
    assert_eq!(distinct.len(), 3);
    assert_eq!(enumerate(&p, 0).answer_sets.len(), 4);
}

#[test]
fn ranking_witness_is_a_level_ranking() {
    let mut b = ProgramBuilder::new();
    b.rule("a", &["b"], &[]).rule("b", &["a"], &[]).fact("a");
    let p = b.build();
    let t = translate(&p, &Theory::default(), TranslateOptions { query_ranks: true });
    let e = enumerate_translation(&t, 0, ExhaustiveBackend::default()).unwrap();
    assert_eq!(atom_sets(&e), vec![vec!["a", "b"]]);
    let ranks = e.answer_sets[0].ranking.as_ref().unwrap();
    assert_eq!(ranks["lr_a"], 1);
    assert_eq!(ranks["lr_b"], 2);
}

/// Counts the blocking assertions in every unit it is asked to decide.
struct Recording<B> {
    inner: B,
    blocking_seen: Vec<usize>,
    base: usize,
}

impl<B: SmtBackend> SmtBackend for Recording<B> {
    type Error = B::Error;

    fn check(&mut self, unit: &EmissionUnit) -> Result<SatOutcome, B::Error> {
        self.blocking_seen.push(unit.assertions.len() - self.base);
        self.inner.check(unit)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn pipeline_matches_oracle(seed in any::<u64>(), atoms in 1usize..=6, rules in 0usize..=10, tight in any::<bool>()) {
        let shape = Shape {
            choice_rules: 2,
            denials: 1,
            ..if tight { Shape::tight(atoms, rules) } else { Shape::cyclic(atoms, rules) }
        };
        let p = random_program(&mut ChaCha8Rng::seed_from_u64(seed), &shape);
        let e = enumerate(&p, 0);
        let got: Vec<BTreeSet<AtomId>> = e.answer_sets.iter().map(|a| a.atom_ids.clone()).collect();
        let unique: BTreeSet<_> = got.iter().cloned().collect();
        prop_assert_eq!(unique.len(), got.len());
        prop_assert_eq!(unique, oracle_visible(&p));
        prop_assert_eq!(e.blocking.len(), e.answer_sets.len());
    }

    #[test]
    fn blocking_is_monotone(seed in any::<u64>(), atoms in 1usize..=5) {
        let p = random_program(&mut ChaCha8Rng::seed_from_u64(seed), &Shape { choice_rules: 3, ..Shape::cyclic(atoms, 8) });
        let t = translate(&p, &Theory::default(), TranslateOptions::default());
        let mut rec = Recording { inner: ExhaustiveBackend::default(), blocking_seen: Vec::new(), base: t.unit.assertions.len() };
        let e = enumerate_translation(&t, 0, &mut rec).unwrap();
        let expected: Vec<usize> = (0..=e.answer_sets.len()).collect();
        prop_assert_eq!(rec.blocking_seen, expected);
    }
}
