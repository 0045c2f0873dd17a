//! Ground programs: atoms, basic and choice rules, compute statements.
//!
//! Programs are read from (and written back to) the numeric smodels format
//! produced by lparse-style grounders. Only basic rules (type 1) and choice
//! rules (type 3) are accepted.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// Identifier of a ground atom. Always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(u32);

impl AtomId {
    pub fn new(id: u32) -> Option<Self> {
        (id > 0).then_some(AtomId(id))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A symbol table entry. Atoms without a name are hidden: they never show
/// up in printed answer sets or blocking formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub id: AtomId,
    pub name: Option<String>,
    /// Set on the auxiliary atoms introduced by choice-rule elimination.
    pub choice_aux_of: Option<AtomId>,
}

impl Atom {
    pub fn is_visible(&self) -> bool {
        self.name.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Basic,
    Choice,
}

/// `heads :- pos, not neg`. Basic rules have exactly one head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub kind: RuleKind,
    pub heads: Vec<AtomId>,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
}

impl Rule {
    pub fn basic(head: AtomId, pos: Vec<AtomId>, neg: Vec<AtomId>) -> Self {
        Rule {
            kind: RuleKind::Basic,
            heads: alloc::vec![head],
            pos,
            neg,
        }
    }

    pub fn choice(heads: Vec<AtomId>, pos: Vec<AtomId>, neg: Vec<AtomId>) -> Self {
        Rule {
            kind: RuleKind::Choice,
            heads,
            pos,
            neg,
        }
    }

    /// Head of a basic rule.
    pub fn head(&self) -> AtomId {
        self.heads[0]
    }

    pub fn body_len(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    /// Removes duplicate literals and returns `false` if the rule can never
    /// fire because some atom occurs both positively and negatively.
    fn normalize(&mut self) -> bool {
        dedup_in_order(&mut self.heads);
        dedup_in_order(&mut self.pos);
        dedup_in_order(&mut self.neg);
        !self.pos.iter().any(|a| self.neg.contains(a))
    }
}

fn dedup_in_order(ids: &mut Vec<AtomId>) {
    let mut seen = BTreeSet::new();
    ids.retain(|a| seen.insert(*a));
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub atoms: BTreeMap<AtomId, Atom>,
    /// Compute statement `B+`: atoms that must be true.
    pub assume_true: BTreeSet<AtomId>,
    /// Compute statement `B-`: atoms that must be false.
    pub assume_false: BTreeSet<AtomId>,
    /// Number of models requested in the input footer, 0 meaning all.
    pub models_requested: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: unsupported rule type {code} (only basic rules (1) and choice rules (3) are accepted)")]
    UnsupportedRuleType { line: usize, code: u64 },
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("atom {atom} occurs in both B+ and B- of the compute statement")]
    ContradictoryCompute { atom: AtomId },
}

fn malformed(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        reason: reason.into(),
    }
}

struct Lines<'a> {
    inner: core::iter::Enumerate<core::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line with its 1-based number.
    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        for (idx, line) in self.inner.by_ref() {
            self.last = idx + 1;
            let trimmed = line.trim();
            if !trimmed.is_empty() {
                return Ok((idx + 1, trimmed));
            }
        }
        Err(malformed(self.last + 1, format!("unexpected end of input, expected {what}")))
    }
}

fn number(line: usize, token: &str) -> Result<u64, ParseError> {
    token
        .parse::<u64>()
        .map_err(|_| malformed(line, format!("expected a non-negative integer, found `{token}`")))
}

fn atom_id(line: usize, token: &str) -> Result<AtomId, ParseError> {
    let n = number(line, token)?;
    u32::try_from(n)
        .ok()
        .and_then(AtomId::new)
        .ok_or_else(|| malformed(line, format!("invalid atom id `{token}`")))
}

/// Parses a rule line after its type code. `count_heads` is set for
/// choice rules, whose heads are preceded by their number.
fn parse_rule_body<'a>(
    line: usize,
    mut tokens: impl Iterator<Item = &'a str>,
    kind: RuleKind,
) -> Result<Rule, ParseError> {
    let mut next = |what: &str| -> Result<&'a str, ParseError> {
        tokens
            .next()
            .ok_or_else(|| malformed(line, format!("rule ends early, expected {what}")))
    };
    let heads = match kind {
        RuleKind::Basic => alloc::vec![atom_id(line, next("head")?)?],
        RuleKind::Choice => {
            let k = number(line, next("head count")?)?;
            if k == 0 {
                return Err(malformed(line, "choice rule without heads"));
            }
            (0..k)
                .map(|_| atom_id(line, next("head atom")?))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let n = number(line, next("body literal count")?)?;
    let m = number(line, next("negative literal count")?)?;
    if m > n {
        return Err(malformed(
            line,
            format!("negative literal count {m} exceeds body size {n}"),
        ));
    }
    let neg = (0..m)
        .map(|_| atom_id(line, next("negative body atom")?))
        .collect::<Result<Vec<_>, _>>()?;
    let pos = (m..n)
        .map(|_| atom_id(line, next("positive body atom")?))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(extra) = tokens.next() {
        return Err(malformed(
            line,
            format!("trailing token `{extra}` after {n} body literals"),
        ));
    }
    Ok(Rule {
        kind,
        heads,
        pos,
        neg,
    })
}

fn parse_compute_section(
    lines: &mut Lines<'_>,
    marker: &str,
) -> Result<BTreeSet<AtomId>, ParseError> {
    let (line, text) = lines.next_line(marker)?;
    if text != marker {
        return Err(malformed(line, format!("expected `{marker}`, found `{text}`")));
    }
    let mut atoms = BTreeSet::new();
    loop {
        let (line, text) = lines.next_line("compute atom or 0")?;
        if text == "0" {
            return Ok(atoms);
        }
        atoms.insert(atom_id(line, text)?);
    }
}

impl Program {
    /// Reads a program in smodels numeric format.
    pub fn parse_smodels(text: &str) -> Result<Program, ParseError> {
        let mut lines = Lines::new(text);
        let mut program = Program::default();

        loop {
            let (line, text) = lines.next_line("rule or 0")?;
            let mut tokens = text.split_whitespace();
            let code = number(line, tokens.next().unwrap_or_default())?;
            let kind = match code {
                0 => {
                    if let Some(extra) = tokens.next() {
                        return Err(malformed(line, format!("trailing token `{extra}`")));
                    }
                    break;
                }
                1 => RuleKind::Basic,
                3 => RuleKind::Choice,
                other => return Err(ParseError::UnsupportedRuleType { line, code: other }),
            };
            let mut rule = parse_rule_body(line, tokens, kind)?;
            if rule.normalize() {
                program.rules.push(rule);
            }
        }

        let mut names: BTreeMap<AtomId, String> = BTreeMap::new();
        let mut seen_names = BTreeSet::new();
        loop {
            let (line, text) = lines.next_line("symbol table entry or 0")?;
            if text == "0" {
                break;
            }
            let (id, name) = text
                .split_once(char::is_whitespace)
                .ok_or_else(|| malformed(line, "symbol table entry without a name"))?;
            let id = atom_id(line, id)?;
            let name = name.trim();
            if !seen_names.insert(name.to_string()) {
                return Err(malformed(line, format!("duplicate atom name `{name}`")));
            }
            if names.insert(id, name.to_string()).is_some() {
                return Err(malformed(line, format!("atom {id} named twice")));
            }
        }

        program.assume_true = parse_compute_section(&mut lines, "B+")?;
        program.assume_false = parse_compute_section(&mut lines, "B-")?;
        if let Some(atom) = program.assume_true.intersection(&program.assume_false).next() {
            return Err(ParseError::ContradictoryCompute { atom: *atom });
        }

        let (line, text) = lines.next_line("number of models")?;
        program.models_requested = number(line, text)?;
        if let Ok((line, extra)) = lines.next_line("") {
            return Err(malformed(line, format!("unexpected trailing content `{extra}`")));
        }

        for (id, name) in names {
            program.atoms.insert(
                id,
                Atom {
                    id,
                    name: Some(name),
                    choice_aux_of: None,
                },
            );
        }
        let referenced: Vec<AtomId> = program
            .rules
            .iter()
            .flat_map(|r| r.heads.iter().chain(&r.pos).chain(&r.neg))
            .chain(&program.assume_true)
            .chain(&program.assume_false)
            .copied()
            .collect();
        for id in referenced {
            program.ensure_atom(id);
        }
        Ok(program)
    }

    /// Writes the program in smodels numeric format. Atoms that are in the
    /// table but never referenced are only preserved if they have a name.
    pub fn to_smodels(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            let mut fields: Vec<String> = Vec::new();
            match rule.kind {
                RuleKind::Basic => {
                    fields.push("1".into());
                    fields.push(rule.head().to_string());
                }
                RuleKind::Choice => {
                    fields.push("3".into());
                    fields.push(rule.heads.len().to_string());
                    fields.extend(rule.heads.iter().map(|h| h.to_string()));
                }
            }
            fields.push(rule.body_len().to_string());
            fields.push(rule.neg.len().to_string());
            fields.extend(rule.neg.iter().chain(&rule.pos).map(|a| a.to_string()));
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        out.push_str("0\n");
        for atom in self.atoms.values() {
            if let Some(name) = &atom.name {
                out.push_str(&format!("{} {}\n", atom.id, name));
            }
        }
        out.push_str("0\nB+\n");
        for a in &self.assume_true {
            out.push_str(&format!("{a}\n"));
        }
        out.push_str("0\nB-\n");
        for a in &self.assume_false {
            out.push_str(&format!("{a}\n"));
        }
        out.push_str(&format!("0\n{}\n", self.models_requested));
        out
    }

    pub(crate) fn ensure_atom(&mut self, id: AtomId) {
        self.atoms.entry(id).or_insert(Atom {
            id,
            name: None,
            choice_aux_of: None,
        });
    }

    pub fn atom_name(&self, id: AtomId) -> Option<&str> {
        self.atoms.get(&id).and_then(|a| a.name.as_deref())
    }

    pub fn atom_by_name(&self, name: &str) -> Option<AtomId> {
        self.atoms
            .values()
            .find(|a| a.name.as_deref() == Some(name))
            .map(|a| a.id)
    }

    /// Visible (named) atoms in id order.
    pub fn visible_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values().filter(|a| a.is_visible())
    }

    pub fn max_atom_id(&self) -> u32 {
        self.atoms.keys().next_back().map_or(0, |a| a.get())
    }

    pub fn has_choice_rules(&self) -> bool {
        self.rules.iter().any(|r| r.kind == RuleKind::Choice)
    }

    /// Atoms occurring in the head of some rule.
    pub fn head_atoms(&self) -> BTreeSet<AtomId> {
        self.rules.iter().flat_map(|r| r.heads.iter().copied()).collect()
    }

    /// Rewrites every choice rule `{a1..ak} :- B` into basic rules
    /// `ai :- B, not ai'` and `ai' :- not ai`. The auxiliary `ai'` is hidden
    /// and has id `max_id + ai`, so it is shared by all choice rules with
    /// head `ai`. A program without choice rules is returned unchanged.
    pub fn eliminate_choice_rules(&self) -> Program {
        if !self.has_choice_rules() {
            return self.clone();
        }
        let offset = self.max_atom_id();
        let mut out = Program {
            rules: Vec::with_capacity(self.rules.len()),
            atoms: self.atoms.clone(),
            assume_true: self.assume_true.clone(),
            assume_false: self.assume_false.clone(),
            models_requested: self.models_requested,
        };
        let mut complemented = BTreeSet::new();
        for rule in &self.rules {
            if rule.kind == RuleKind::Basic {
                out.rules.push(rule.clone());
                continue;
            }
            for &head in &rule.heads {
                let aux = AtomId(offset + head.get());
                let mut neg = rule.neg.clone();
                neg.push(aux);
                let mut basic = Rule::basic(head, rule.pos.clone(), neg);
                if basic.normalize() {
                    out.rules.push(basic);
                }
                if complemented.insert(head) {
                    out.atoms.insert(
                        aux,
                        Atom {
                            id: aux,
                            name: None,
                            choice_aux_of: Some(head),
                        },
                    );
                    out.rules
                        .push(Rule::basic(aux, Vec::new(), alloc::vec![head]));
                }
            }
        }
        out
    }
}

/// Convenience constructor for programs over named atoms.
#[derive(Clone, Debug, Default)]
pub struct ProgramBuilder {
    program: Program,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of the atom called `name`, allocating it if needed.
    pub fn atom(&mut self, name: &str) -> AtomId {
        if let Some(id) = self.program.atom_by_name(name) {
            return id;
        }
        let id = AtomId(self.program.max_atom_id() + 1);
        self.program.atoms.insert(
            id,
            Atom {
                id,
                name: Some(name.to_string()),
                choice_aux_of: None,
            },
        );
        id
    }

    /// Allocates a fresh hidden atom.
    pub fn hidden(&mut self) -> AtomId {
        let id = AtomId(self.program.max_atom_id() + 1);
        self.program.ensure_atom(id);
        id
    }

    fn ids(&mut self, names: &[&str]) -> Vec<AtomId> {
        names.iter().map(|n| self.atom(n)).collect()
    }

    pub fn rule(&mut self, head: &str, pos: &[&str], neg: &[&str]) -> &mut Self {
        let head = self.atom(head);
        let pos = self.ids(pos);
        let neg = self.ids(neg);
        self.push(Rule::basic(head, pos, neg))
    }

    pub fn fact(&mut self, head: &str) -> &mut Self {
        self.rule(head, &[], &[])
    }

    pub fn choice(&mut self, heads: &[&str], pos: &[&str], neg: &[&str]) -> &mut Self {
        let heads = self.ids(heads);
        let pos = self.ids(pos);
        let neg = self.ids(neg);
        self.push(Rule::choice(heads, pos, neg))
    }

    /// Integrity constraint `:- pos, not neg`, encoded lparse-style through a
    /// hidden head atom assumed false.
    pub fn denial(&mut self, pos: &[&str], neg: &[&str]) -> &mut Self {
        let pos = self.ids(pos);
        let neg = self.ids(neg);
        let head = match self
            .program
            .assume_false
            .iter()
            .find(|a| self.program.atom_name(**a).is_none())
        {
            Some(h) => *h,
            None => {
                let h = self.hidden();
                self.program.assume_false.insert(h);
                h
            }
        };
        self.push(Rule::basic(head, pos, neg))
    }

    pub fn push(&mut self, mut rule: Rule) -> &mut Self {
        for id in rule.heads.iter().chain(&rule.pos).chain(&rule.neg) {
            self.program.ensure_atom(*id);
        }
        if rule.normalize() {
            self.program.rules.push(rule);
        }
        self
    }

    pub fn assume_true(&mut self, name: &str) -> &mut Self {
        let id = self.atom(name);
        self.program.assume_true.insert(id);
        self
    }

    pub fn assume_false(&mut self, name: &str) -> &mut Self {
        let id = self.atom(name);
        self.program.assume_false.insert(id);
        self
    }

    pub fn build(&self) -> Program {
        self.program.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn id(n: u32) -> AtomId {
        AtomId::new(n).unwrap()
    }

    #[test]
    fn parses_basic_rule() {
        let p = Program::parse_smodels("1 2 1 0 1\n0\n2 a\n1 b\n0\nB+\n0\nB-\n0\n1\n").unwrap();
        assert_eq!(p.rules, vec![Rule::basic(id(2), vec![id(1)], vec![])]);
        assert_eq!(p.atom_name(id(1)), Some("b"));
        assert_eq!(p.atom_name(id(2)), Some("a"));
        assert_eq!(p.models_requested, 1);
    }

    #[test]
    fn parses_choice_rule() {
        let p = Program::parse_smodels("3 1 2 0 0\n0\n2 a\n0\nB+\n0\nB-\n0\n1\n").unwrap();
        assert_eq!(p.rules, vec![Rule::choice(vec![id(2)], vec![], vec![])]);
        assert_eq!(p.atoms.len(), 1);
    }

    #[test]
    fn negative_literals_come_first() {
        let p = Program::parse_smodels("1 1 3 1 2 3 4\n0\n0\nB+\n0\nB-\n0\n0\n").unwrap();
        assert_eq!(p.rules[0].neg, vec![id(2)]);
        assert_eq!(p.rules[0].pos, vec![id(3), id(4)]);
        assert_eq!(p.models_requested, 0);
    }

    #[test]
    fn rejects_weight_rules() {
        let err = Program::parse_smodels("5 1 2 2 0 2 3 1 1\n0\n0\nB+\n0\nB-\n0\n1\n").unwrap_err();
        assert_eq!(err, ParseError::UnsupportedRuleType { line: 1, code: 5 });
        assert!(err.to_string().contains("rule type 5"));
        for code in [2, 6] {
            let text = format!("{code} 1 0 0\n0\n0\nB+\n0\nB-\n0\n1\n");
            assert!(matches!(
                Program::parse_smodels(&text),
                Err(ParseError::UnsupportedRuleType { code: c, .. }) if c == code
            ));
        }
    }

    #[test]
    fn rejects_malformed_input() {
        for text in [
            "1 2 1 0\n0\n0\nB+\n0\nB-\n0\n1\n",   // missing body atom
            "1 2 1 2 1\n0\n0\nB+\n0\nB-\n0\n1\n", // m > n
            "1 x 0 0\n0\n0\nB+\n0\nB-\n0\n1\n",   // non-numeric
            "1 2 0 0\n0\n0\nB+\n0\n",             // truncated
            "1 0 0 0\n0\n0\nB+\n0\nB-\n0\n1\n",   // atom id 0
            "1 2 0 0 7\n0\n0\nB+\n0\nB-\n0\n1\n", // extra literal
            "0\n1 a\n2 a\n0\nB+\n0\nB-\n0\n1\n",  // duplicate name
        ] {
            assert!(
                matches!(Program::parse_smodels(text), Err(ParseError::Malformed { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn rejects_contradictory_compute() {
        let err = Program::parse_smodels("0\n1 a\n0\nB+\n1\n0\nB-\n1\n0\n1\n").unwrap_err();
        assert_eq!(err, ParseError::ContradictoryCompute { atom: id(1) });
    }

    #[test]
    fn drops_self_contradicting_rules_and_duplicates() {
        let p = Program::parse_smodels("1 1 2 1 2 2\n1 1 3 0 2 2 3\n0\n0\nB+\n0\nB-\n0\n1\n")
            .unwrap();
        assert_eq!(p.rules, vec![Rule::basic(id(1), vec![id(2), id(3)], vec![])]);
    }

    #[test]
    fn eliminates_single_choice() {
        let mut b = ProgramBuilder::new();
        b.choice(&["a"], &[], &[]);
        let p = b.build().eliminate_choice_rules();
        let a = id(1);
        let aux = id(2);
        assert_eq!(
            p.rules,
            vec![Rule::basic(a, vec![], vec![aux]), Rule::basic(aux, vec![], vec![a])]
        );
        assert_eq!(p.atoms[&aux].name, None);
        assert_eq!(p.atoms[&aux].choice_aux_of, Some(a));
    }

    #[test]
    fn eliminates_multi_head_choice() {
        let mut b = ProgramBuilder::new();
        b.choice(&["a", "b"], &["c"], &[]);
        let p = b.build().eliminate_choice_rules();
        let (a, bb, c) = (id(1), id(2), id(3));
        let (a2, b2) = (id(4), id(5));
        assert_eq!(
            p.rules,
            vec![
                Rule::basic(a, vec![c], vec![a2]),
                Rule::basic(a2, vec![], vec![a]),
                Rule::basic(bb, vec![c], vec![b2]),
                Rule::basic(b2, vec![], vec![bb]),
            ]
        );
    }

    #[test]
    fn elimination_is_identity_without_choices() {
        let mut b = ProgramBuilder::new();
        b.rule("a", &["b"], &[]).fact("b");
        let p = b.build();
        assert_eq!(p.eliminate_choice_rules(), p);
    }

    #[test]
    fn serializes_back() {
        let text = "1 2 2 1 3 1\n3 2 1 3 0 0\n0\n1 b\n2 a\n3 c\n0\nB+\n2\n0\nB-\n3\n0\n0\n";
        let p = Program::parse_smodels(text).unwrap();
        assert_eq!(p.to_smodels(), text);
    }
}
