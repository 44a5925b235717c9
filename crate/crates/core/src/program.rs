//! Ground disjunctive rules and programs.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::atom::{Atom, AtomKind, Literal};

/// A total interpretation, given by its set of true atoms.
pub type Model = BTreeSet<Atom>;

/// `a1 | ... | ak :- b1, ..., bm, not c1, ..., not cn.`
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rule {
    pub head: BTreeSet<Atom>,
    pub pos: BTreeSet<Atom>,
    pub neg: BTreeSet<Atom>,
}

impl Rule {
    /// Builds a rule. Panics when `head` is empty; use [`Rule::constraint`]
    /// for headless rules.
    pub fn new(
        head: impl IntoIterator<Item = Atom>,
        pos: impl IntoIterator<Item = Atom>,
        neg: impl IntoIterator<Item = Atom>,
    ) -> Rule {
        let rule = Rule {
            head: head.into_iter().collect(),
            pos: pos.into_iter().collect(),
            neg: neg.into_iter().collect(),
        };
        assert!(!rule.head.is_empty(), "rule head must be nonempty");
        rule
    }

    pub fn fact(atom: Atom) -> Rule {
        Rule::new([atom], [], [])
    }

    /// `:- body.` desugared to `__f :- not __f, body.`
    pub fn constraint(
        pos: impl IntoIterator<Item = Atom>,
        neg: impl IntoIterator<Item = Atom>,
    ) -> Rule {
        let f = Atom::falsum();
        let mut neg: BTreeSet<Atom> = neg.into_iter().collect();
        neg.insert(f.clone());
        Rule {
            head: BTreeSet::from([f]),
            pos: pos.into_iter().collect(),
            neg,
        }
    }

    pub fn is_normal(&self) -> bool {
        self.head.len() == 1
    }

    pub fn is_positive(&self) -> bool {
        self.neg.is_empty()
    }

    /// True for rules of the shape `__f :- not __f, ...`.
    pub fn is_constraint(&self) -> bool {
        self.head.len() == 1
            && self.head.iter().all(Atom::is_falsum)
            && self.neg.contains(&Atom::falsum())
    }

    /// The single head atom of a normal rule.
    pub fn head_atom(&self) -> Option<&Atom> {
        if self.is_normal() {
            self.head.iter().next()
        } else {
            None
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().chain(&self.pos).chain(&self.neg)
    }

    /// Positive literals first, then negative ones, each in atom order.
    pub fn body(&self) -> impl Iterator<Item = Literal> + '_ {
        self.pos
            .iter()
            .cloned()
            .map(Literal::pos)
            .chain(self.neg.iter().cloned().map(Literal::neg))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(items: impl Iterator<Item = T>, sep: &str) -> String {
            items.map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
        }
        let falsum = Atom::falsum();
        let is_sugared = self.is_constraint() && (self.neg.len() > 1 || !self.pos.is_empty());
        if is_sugared {
            let body = self.body().filter(|l| !(l.atom == falsum && !l.positive));
            return write!(f, ":- {}.", join(body, ", "));
        }
        write!(f, "{}", join(self.head.iter(), " | "))?;
        if self.pos.is_empty() && self.neg.is_empty() {
            f.write_str(".")
        } else {
            write!(f, " :- {}.", join(self.body(), ", "))
        }
    }
}

/// An ordered list of rules together with its Herbrand base.
///
/// The base always contains every atom occurring in a rule; it may also
/// contain declared atoms that occur in no rule.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Program {
    rules: Vec<Rule>,
    base: BTreeSet<Atom>,
}

impl Program {
    pub fn new(rules: impl IntoIterator<Item = Rule>) -> Program {
        let mut program = Program::default();
        program.extend(rules);
        program
    }

    /// A program whose base additionally contains `atoms`.
    pub fn with_base(
        rules: impl IntoIterator<Item = Rule>,
        atoms: impl IntoIterator<Item = Atom>,
    ) -> Program {
        let mut program = Program::new(rules);
        program.base.extend(atoms);
        program
    }

    pub fn push(&mut self, rule: Rule) {
        self.base.extend(rule.atoms().cloned());
        self.rules.push(rule);
    }

    pub fn declare(&mut self, atom: Atom) {
        self.base.insert(atom);
    }

    pub fn extend(&mut self, rules: impl IntoIterator<Item = Rule>) {
        for rule in rules {
            self.push(rule);
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn base(&self) -> &BTreeSet<Atom> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn is_normal(&self) -> bool {
        self.rules.iter().all(Rule::is_normal)
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(Rule::is_positive)
    }

    /// Drops structurally repeated rules, keeping first occurrences.
    pub fn dedup(self) -> Program {
        let mut seen = HashSet::new();
        let Program { rules, base } = self;
        let rules = rules
            .into_iter()
            .filter(|r| seen.insert(r.clone()))
            .collect();
        Program { rules, base }
    }

    /// The first base atom of one of the given kinds, if any.
    pub fn find_kind(&self, kinds: &[AtomKind]) -> Option<&Atom> {
        self.base.iter().find(|a| kinds.contains(&a.kind()))
    }

    /// Atoms appearing in the heads of proper disjunctive rules.
    pub fn disjunctive_heads(&self) -> BTreeSet<Atom> {
        self.rules
            .iter()
            .filter(|r| !r.is_normal())
            .flat_map(|r| r.head.iter().cloned())
            .collect()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

impl FromIterator<Rule> for Program {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        Program::new(iter)
    }
}

/// Renders one rule per line.
pub fn render_program(program: &Program) -> String {
    program.to_string()
}

/// The normal rules, the proper disjunctive rules, and the atoms in the
/// heads of the latter.
pub fn split_program(program: &Program) -> (Program, Program, BTreeSet<Atom>) {
    let (normal, disjunctive): (Vec<_>, Vec<_>) =
        program.rules().iter().cloned().partition(Rule::is_normal);
    let disjunctive = Program::new(disjunctive);
    let heads = disjunctive.disjunctive_heads();
    (Program::new(normal), disjunctive, heads)
}
