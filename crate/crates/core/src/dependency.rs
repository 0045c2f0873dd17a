//! Positive dependency graph, strongly connected components and tightness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::program::{AtomId, Program};

/// Index of a strongly connected component.
///
/// Components are numbered so that dependencies come first: for every edge
/// `head -> body` of the positive dependency graph,
/// `component_of[body] <= component_of[head]`. Among components whose
/// dependencies are all numbered, the one with the smallest atom id is
/// numbered next.
pub type SccIndex = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyInfo {
    /// `head -> atoms in the positive body` of some rule with that head.
    pub edges: BTreeMap<AtomId, BTreeSet<AtomId>>,
    pub component_of: BTreeMap<AtomId, SccIndex>,
    /// Members of every component, sorted by id.
    pub components: Vec<Vec<AtomId>>,
    /// Components lying on a positive cycle: size > 1, or a self-loop.
    pub nontrivial: BTreeSet<SccIndex>,
}

impl DependencyInfo {
    pub fn compute(program: &Program) -> Self {
        let atoms: Vec<AtomId> = program.atoms.keys().copied().collect();
        let mut edges: BTreeMap<AtomId, BTreeSet<AtomId>> = BTreeMap::new();
        for rule in &program.rules {
            for &head in &rule.heads {
                edges.entry(head).or_default().extend(rule.pos.iter().copied());
            }
        }
        let index: BTreeMap<AtomId, usize> =
            atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let succ: Vec<Vec<usize>> = atoms
            .iter()
            .map(|a| {
                edges
                    .get(a)
                    .map(|bs| bs.iter().map(|b| index[b]).collect())
                    .unwrap_or_default()
            })
            .collect();

        let raw = tarjan(&succ);
        let comp_of_node = {
            let mut c = vec![0; atoms.len()];
            for (ci, members) in raw.iter().enumerate() {
                for &n in members {
                    c[n] = ci;
                }
            }
            c
        };

        // Number the condensation dependencies-first, smallest atom first.
        let mut pending: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); raw.len()];
        let mut dependents: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); raw.len()];
        for (n, targets) in succ.iter().enumerate() {
            for &t in targets {
                let (from, to) = (comp_of_node[n], comp_of_node[t]);
                if from != to {
                    pending[from].insert(to);
                    dependents[to].insert(from);
                }
            }
        }
        let min_node = |c: usize| raw[c].iter().copied().min().unwrap_or(usize::MAX);
        let mut ready: BTreeSet<(usize, usize)> = (0..raw.len())
            .filter(|&c| pending[c].is_empty())
            .map(|c| (min_node(c), c))
            .collect();
        let mut numbering = vec![0; raw.len()];
        let mut components = Vec::with_capacity(raw.len());
        while let Some((_, c)) = ready.pop_first() {
            numbering[c] = components.len();
            let mut members: Vec<AtomId> = raw[c].iter().map(|&n| atoms[n]).collect();
            members.sort();
            components.push(members);
            for &d in &dependents[c] {
                pending[d].remove(&c);
                if pending[d].is_empty() {
                    ready.insert((min_node(d), d));
                }
            }
        }

        let component_of: BTreeMap<AtomId, SccIndex> = atoms
            .iter()
            .enumerate()
            .map(|(n, a)| (*a, numbering[comp_of_node[n]]))
            .collect();
        let nontrivial = components
            .iter()
            .enumerate()
            .filter(|(_, members)| {
                members.len() > 1
                    || edges
                        .get(&members[0])
                        .is_some_and(|bs| bs.contains(&members[0]))
            })
            .map(|(i, _)| i)
            .collect();

        DependencyInfo {
            edges,
            component_of,
            components,
            nontrivial,
        }
    }

    /// A program is tight when its positive dependency graph is acyclic.
    pub fn is_tight(&self) -> bool {
        self.nontrivial.is_empty()
    }

    pub fn component_size(&self, scc: SccIndex) -> usize {
        self.components[scc].len()
    }

    /// Largest rank an atom of `scc` needs: the size of the component.
    pub fn ranking_upper_bound(&self, scc: SccIndex) -> u32 {
        self.components[scc].len() as u32
    }

    /// Component of `atom` if it lies on a positive cycle.
    pub fn nontrivial_component(&self, atom: AtomId) -> Option<SccIndex> {
        self.component_of
            .get(&atom)
            .copied()
            .filter(|c| self.nontrivial.contains(c))
    }

    pub fn largest_component(&self) -> usize {
        self.components.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Iterative Tarjan. Returns components in the order they are closed, which
/// is a reverse topological order of the condensation.
fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    // (node, position of the next successor to explore)
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut next)) = frames.last_mut() {
            if *next == 0 && index[v] == UNVISITED {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(*next) {
                *next += 1;
                if index[w] == UNVISITED {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components
}
