//! Generator and tester programs that reduce disjunctive stable-model
//! search to normal programs.
//!
//! A generator's stable models, restricted to the base of the input, are
//! the model candidates; a candidate `M` is stable iff the tester
//! `test_program(P, M)` has no stable model.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::atom::{Atom, AtomKind};
use crate::program::{split_program, Model, Program, Rule};

/// A candidate model: base atoms of a generator's stable model.
pub type CandidateModel = Model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("atom `{0}` collides with generated complement or support atoms")]
    Marked(Atom),
    #[error("candidate atom `{0}` is not in the program's base")]
    NotInBase(Atom),
}

fn check_unmarked(p: &Program) -> Result<(), GenError> {
    match p.find_kind(&[AtomKind::Complement, AtomKind::Support]) {
        Some(a) => Err(GenError::Marked(a.clone())),
        None => Ok(()),
    }
}

/// True when `__f` only heads integrity constraints, so it is false in
/// every stable model and can double as the generator's integrity atom.
fn falsum_is_pure(p: &Program) -> bool {
    let f = Atom::falsum();
    p.rules()
        .iter()
        .filter(|r| r.head.contains(&f))
        .all(Rule::is_constraint)
}

/// The atom used by generated integrity constraints: `__f` unless the
/// program derives `__f` by ordinary rules, then the first unused `__fK`.
pub fn integrity_atom(p: &Program) -> Atom {
    if falsum_is_pure(p) {
        return Atom::falsum();
    }
    (1..)
        .map(Atom::falsum_variant)
        .find(|a| !p.base().contains(a))
        .expect("finite base")
}

/// `f :- not f, pos, not neg.`
fn constraint_on(
    f: &Atom,
    pos: impl IntoIterator<Item = Atom>,
    neg: impl IntoIterator<Item = Atom>,
) -> Rule {
    let mut neg: BTreeSet<Atom> = neg.into_iter().collect();
    neg.insert(f.clone());
    Rule {
        head: BTreeSet::from([f.clone()]),
        pos: pos.into_iter().collect(),
        neg,
    }
}

fn complement_rules(heads: &BTreeSet<Atom>) -> impl Iterator<Item = Rule> + '_ {
    heads
        .iter()
        .map(|a| Rule::new([a.complement()], [], [a.clone()]))
}

fn with_base_of(rules: Vec<Rule>, p: &Program) -> Program {
    Program::with_base(rules, p.base().iter().cloned())
}

/// A free choice over every base atom, constrained to the models of `P`.
pub fn gen_naive(p: &Program) -> Result<Program, GenError> {
    check_unmarked(p)?;
    let f = integrity_atom(p);
    let mut rules = Vec::new();
    for a in p.base().iter().filter(|a| **a != f) {
        rules.push(Rule::new([a.clone()], [], [a.complement()]));
        rules.push(Rule::new([a.complement()], [], [a.clone()]));
    }
    for r in p.rules() {
        let neg = r.head.iter().chain(&r.neg).cloned();
        rules.push(constraint_on(&f, r.pos.iter().cloned(), neg));
    }
    Ok(with_base_of(rules, p).dedup())
}

/// Choices only for the heads of proper disjunctive rules; normal rules
/// are kept verbatim.
pub fn gen_basic(p: &Program) -> Result<Program, GenError> {
    check_unmarked(p)?;
    let f = integrity_atom(p);
    let (normal, disjunctive, heads) = split_program(p);
    let mut rules = Vec::new();
    for r in disjunctive.rules() {
        for a in &r.head {
            let mut neg = r.neg.clone();
            neg.insert(a.complement());
            rules.push(Rule::new([a.clone()], r.pos.iter().cloned(), neg));
        }
    }
    rules.extend(complement_rules(&heads));
    for r in disjunctive.rules() {
        let neg = r.head.iter().chain(&r.neg).cloned();
        rules.push(constraint_on(&f, r.pos.iter().cloned(), neg));
    }
    rules.extend(normal.rules().iter().cloned());
    Ok(with_base_of(rules, p))
}

/// Requires every true disjunctive head atom to have a rule supporting it
/// alone.
pub fn support_program(p: &Program) -> Result<Program, GenError> {
    check_unmarked(p)?;
    let f = integrity_atom(p);
    let heads = p.disjunctive_heads();
    let mut rules = Vec::new();
    for r in p.rules() {
        for a in r.head.intersection(&heads) {
            let others = r.head.iter().filter(|b| *b != a).cloned();
            let neg: BTreeSet<Atom> = others.chain(r.neg.iter().cloned()).collect();
            rules.push(Rule::new([a.support()], r.pos.iter().cloned(), neg));
        }
    }
    for a in &heads {
        rules.push(constraint_on(&f, [a.clone()], [a.support()]));
    }
    Ok(Program::new(rules))
}

/// The basic generator joined with the support rules, without duplicates.
pub fn gen_program(p: &Program) -> Result<Program, GenError> {
    let mut g = gen_basic(p)?;
    g.extend(support_program(p)?.rules().iter().cloned());
    Ok(g.dedup())
}

/// A normal program with a stable model iff the GL-reduct of `P` w.r.t.
/// `M` has a model strictly inside `M`.
///
/// Reduct rules are built first and those whose positive body leaves `M`
/// are dropped afterwards.
pub fn test_program(p: &Program, m: &CandidateModel) -> Result<Program, GenError> {
    check_unmarked(p)?;
    if let Some(a) = m.iter().find(|a| !p.base().contains(*a)) {
        return Err(GenError::NotInBase(a.clone()));
    }
    let f = integrity_atom(p);
    let (normal, disjunctive, heads) = split_program(p);
    let reduct = |q: &Program| -> Vec<Rule> {
        q.rules()
            .iter()
            .filter(|r| r.neg.is_disjoint(m))
            .map(|r| Rule {
                head: r.head.clone(),
                pos: r.pos.clone(),
                neg: BTreeSet::new(),
            })
            .filter(|r| r.pos.is_subset(m))
            .collect()
    };
    let dlp = reduct(&disjunctive);
    let mut rules = Vec::new();
    for r in &dlp {
        for a in r.head.intersection(m) {
            rules.push(Rule::new(
                [a.clone()],
                r.pos.iter().cloned(),
                [a.complement()],
            ));
        }
    }
    rules.extend(complement_rules(&heads));
    for r in &dlp {
        rules.push(constraint_on(
            &f,
            r.pos.iter().cloned(),
            r.head.iter().cloned(),
        ));
    }
    rules.extend(reduct(&normal).into_iter().filter(|r| r.head.is_subset(m)));
    rules.push(constraint_on(&f, m.iter().cloned(), []));
    Ok(Program::new(rules))
}
