//! Random ground programs for property tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::program::{Program, ProgramBuilder};

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    /// Named atoms; a denial adds one hidden atom on top.
    pub atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    /// Keep the positive dependency graph acyclic.
    pub tight: bool,
    /// Number of positive cycles planted on purpose (ignored when tight).
    pub planted_cycles: usize,
    pub max_cycle_len: usize,
    pub choice_rules: usize,
    pub denials: usize,
}

impl Shape {
    pub fn tight(atoms: usize, max_rules: usize) -> Self {
        Shape {
            atoms,
            max_rules,
            max_body: 3,
            tight: true,
            planted_cycles: 0,
            max_cycle_len: 0,
            choice_rules: 0,
            denials: 0,
        }
    }

    pub fn cyclic(atoms: usize, max_rules: usize) -> Self {
        Shape {
            tight: false,
            planted_cycles: 2,
            max_cycle_len: 4,
            ..Shape::tight(atoms, max_rules)
        }
    }
}

fn name(i: usize) -> String {
    format!("p{i}")
}

/// Draws a body. In tight mode, positive atoms are drawn below `limit`.
fn body<R: Rng>(rng: &mut R, shape: &Shape, limit: usize) -> (Vec<String>, Vec<String>) {
    let len = rng.gen_range(0..=shape.max_body);
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for _ in 0..len {
        let negative = rng.gen_bool(0.5);
        if negative || limit == 0 {
            neg.push(name(rng.gen_range(0..shape.atoms)));
        } else {
            pos.push(name(rng.gen_range(0..limit)));
        }
    }
    (pos, neg)
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn random_program<R: Rng>(rng: &mut R, shape: &Shape) -> Program {
    let mut b = ProgramBuilder::new();
    for i in 0..shape.atoms {
        b.atom(&name(i));
    }
    let mut rules = 0;
    if !shape.tight {
        for _ in 0..shape.planted_cycles {
            let len = rng.gen_range(1..=shape.max_cycle_len.clamp(1, shape.atoms));
            let mut members: Vec<usize> = (0..shape.atoms).collect();
            members.shuffle(rng);
            members.truncate(len);
            for k in 0..len {
                if rules >= shape.max_rules {
                    break;
                }
                let head = name(members[k]);
                let next = name(members[(k + 1) % len]);
                let (mut pos, neg) = body(rng, &Shape { max_body: 1, ..*shape }, shape.atoms);
                pos.push(next);
                b.rule(&head, &strs(&pos), &strs(&neg));
                rules += 1;
            }
        }
    }
    let mut choices = 0;
    let mut denials = 0;
    let target = rng.gen_range(rules..=shape.max_rules.max(rules));
    while rules < target {
        let head = rng.gen_range(0..shape.atoms);
        let limit = if shape.tight { head } else { shape.atoms };
        let (pos, neg) = body(rng, shape, limit);
        let roll = rng.gen_range(0..10);
        if roll == 0 && choices < shape.choice_rules {
            let mut heads = alloc::vec![name(head)];
            if head + 1 < shape.atoms && rng.gen_bool(0.5) {
                heads.push(name(head + 1));
            }
            b.choice(&strs(&heads), &strs(&pos), &strs(&neg));
            choices += 1;
        } else if roll == 1 && denials < shape.denials {
            let (pos, neg) = body(rng, shape, shape.atoms);
            b.denial(&strs(&pos), &strs(&neg));
            denials += 1;
        } else {
            b.rule(&name(head), &strs(&pos), &strs(&neg));
        }
        rules += 1;
    }
    b.build()
}
