//! Three-valued interpretations, evaluation, reducts and unfounded sets.
//!
//! Everything here works directly on atom sets and has no size limit. The
//! exhaustive searches live in [`crate::oracle`].

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::atom::{Atom, Literal};
use crate::program::{Model, Program, Rule};

/// Truth values ordered `False < Undefined < True`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    False,
    Undefined,
    True,
}

impl TruthValue {
    pub fn negate(self) -> TruthValue {
        match self {
            TruthValue::False => TruthValue::True,
            TruthValue::Undefined => TruthValue::Undefined,
            TruthValue::True => TruthValue::False,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::False => "f",
            TruthValue::Undefined => "u",
            TruthValue::True => "t",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpretationError {
    #[error("atom `{0}` is both true and false")]
    Overlap(Atom),
    #[error("atom `{0}` is not in the base")]
    UnknownAtom(Atom),
}

/// A pair of disjoint true and false sets over a base; the remaining base
/// atoms are undefined.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PartialInterpretation {
    base: BTreeSet<Atom>,
    true_set: BTreeSet<Atom>,
    false_set: BTreeSet<Atom>,
}

impl PartialInterpretation {
    pub fn new(
        base: BTreeSet<Atom>,
        true_set: BTreeSet<Atom>,
        false_set: BTreeSet<Atom>,
    ) -> Result<Self, InterpretationError> {
        if let Some(a) = true_set.intersection(&false_set).next() {
            return Err(InterpretationError::Overlap(a.clone()));
        }
        if let Some(a) = true_set
            .iter()
            .chain(&false_set)
            .find(|a| !base.contains(*a))
        {
            return Err(InterpretationError::UnknownAtom(a.clone()));
        }
        Ok(PartialInterpretation {
            base,
            true_set,
            false_set,
        })
    }

    /// The total interpretation making exactly `true_set` true. Atoms of
    /// `true_set` outside `base` are added to the base.
    pub fn total(base: &BTreeSet<Atom>, true_set: &Model) -> Self {
        let base: BTreeSet<Atom> = base.union(true_set).cloned().collect();
        let false_set = base.difference(true_set).cloned().collect();
        PartialInterpretation {
            base,
            true_set: true_set.clone(),
            false_set,
        }
    }

    /// Every base atom undefined.
    pub fn undefined(base: &BTreeSet<Atom>) -> Self {
        PartialInterpretation {
            base: base.clone(),
            ..Default::default()
        }
    }

    pub fn base(&self) -> &BTreeSet<Atom> {
        &self.base
    }

    pub fn true_set(&self) -> &BTreeSet<Atom> {
        &self.true_set
    }

    pub fn false_set(&self) -> &BTreeSet<Atom> {
        &self.false_set
    }

    pub fn undefined_set(&self) -> BTreeSet<Atom> {
        self.base
            .iter()
            .filter(|a| !self.true_set.contains(*a) && !self.false_set.contains(*a))
            .cloned()
            .collect()
    }

    pub fn is_total(&self) -> bool {
        self.true_set.len() + self.false_set.len() == self.base.len()
    }

    /// The value of an atom; atoms outside the base read as false.
    pub fn value(&self, atom: &Atom) -> TruthValue {
        if self.true_set.contains(atom) {
            TruthValue::True
        } else if self.false_set.contains(atom) || !self.base.contains(atom) {
            TruthValue::False
        } else {
            TruthValue::Undefined
        }
    }

    pub fn literal_value(&self, lit: &Literal) -> TruthValue {
        let v = self.value(&lit.atom);
        if lit.positive {
            v
        } else {
            v.negate()
        }
    }

    /// `self ≤ other` in the truth ordering: fewer true, more false atoms.
    pub fn truth_le(&self, other: &Self) -> bool {
        self.true_set.is_subset(&other.true_set) && self.false_set.is_superset(&other.false_set)
    }

    /// Componentwise inclusion of both the true and the false sets.
    pub fn knowledge_le(&self, other: &Self) -> bool {
        self.true_set.is_subset(&other.true_set) && self.false_set.is_subset(&other.false_set)
    }
}

fn check_known(i: &PartialInterpretation, atom: &Atom) -> Result<(), InterpretationError> {
    if i.base.contains(atom) {
        Ok(())
    } else {
        Err(InterpretationError::UnknownAtom(atom.clone()))
    }
}

/// Value of a conjunction: the minimum, `True` when empty.
pub fn eval<'a>(
    i: &PartialInterpretation,
    conj: impl IntoIterator<Item = &'a Literal>,
) -> Result<TruthValue, InterpretationError> {
    let mut value = TruthValue::True;
    for lit in conj {
        check_known(i, &lit.atom)?;
        value = value.min(i.literal_value(lit));
    }
    Ok(value)
}

/// Value of a disjunction of atoms: the maximum, `False` when empty.
pub fn eval_disj<'a>(
    i: &PartialInterpretation,
    atoms: impl IntoIterator<Item = &'a Atom>,
) -> Result<TruthValue, InterpretationError> {
    let mut value = TruthValue::False;
    for a in atoms {
        check_known(i, a)?;
        value = value.max(i.value(a));
    }
    Ok(value)
}

fn head_value(i: &PartialInterpretation, rule: &Rule) -> TruthValue {
    rule.head
        .iter()
        .map(|a| i.value(a))
        .max()
        .unwrap_or(TruthValue::False)
}

fn body_value(i: &PartialInterpretation, rule: &Rule) -> TruthValue {
    let pos = rule.pos.iter().map(|a| i.value(a));
    let neg = rule.neg.iter().map(|a| i.value(a).negate());
    pos.chain(neg).min().unwrap_or(TruthValue::True)
}

pub fn satisfies(i: &PartialInterpretation, rule: &Rule) -> bool {
    head_value(i, rule) >= body_value(i, rule)
}

pub fn is_partial_model(i: &PartialInterpretation, p: &Program) -> bool {
    p.rules().iter().all(|r| satisfies(i, r))
}

pub fn is_total_model(i: &PartialInterpretation, p: &Program) -> bool {
    i.is_total() && is_partial_model(i, p)
}

/// `{ A ← B : A ← B, not C ∈ P, C ⊆ F(I) }`, keeping the base of `P`.
pub fn gl_reduct(p: &Program, i: &PartialInterpretation) -> Program {
    let rules = p
        .rules()
        .iter()
        .filter(|r| r.neg.iter().all(|c| i.false_set.contains(c)))
        .map(|r| Rule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            neg: BTreeSet::new(),
        });
    Program::with_base(rules, p.base().iter().cloned())
}

/// A rule of the three-valued reduct: the negative body folded to a constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedRule {
    pub head: BTreeSet<Atom>,
    pub pos: BTreeSet<Atom>,
    pub const_body: TruthValue,
}

impl ReducedRule {
    /// Rules whose constant is `False` never constrain a model.
    pub fn is_inert(&self) -> bool {
        self.const_body == TruthValue::False
    }

    pub fn satisfied_by(&self, i: &PartialInterpretation) -> bool {
        if self.is_inert() {
            return true;
        }
        let head = self
            .head
            .iter()
            .map(|a| i.value(a))
            .max()
            .unwrap_or(TruthValue::False);
        let body = self
            .pos
            .iter()
            .map(|a| i.value(a))
            .min()
            .unwrap_or(TruthValue::True)
            .min(self.const_body);
        head >= body
    }
}

impl fmt::Display for ReducedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<_> = self.head.iter().map(Atom::to_string).collect();
        let mut body: Vec<_> = self.pos.iter().map(Atom::to_string).collect();
        if self.const_body != TruthValue::True {
            body.push(self.const_body.to_string());
        }
        write!(f, "{}", head.join(" | "))?;
        if !body.is_empty() {
            write!(f, " :- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

/// The three-valued reduct: every `not c` replaced by its value under `m`.
pub fn tv_reduct(p: &Program, m: &PartialInterpretation) -> Vec<ReducedRule> {
    p.rules()
        .iter()
        .map(|r| ReducedRule {
            head: r.head.clone(),
            pos: r.pos.clone(),
            const_body: r
                .neg
                .iter()
                .map(|c| m.value(c).negate())
                .min()
                .unwrap_or(TruthValue::True),
        })
        .collect()
}

/// Checks the per-rule unfoundedness conditions for `u` w.r.t. `i`.
pub fn is_unfounded_set(p: &Program, i: &PartialInterpretation, u: &BTreeSet<Atom>) -> bool {
    p.rules().iter().all(|r| {
        if r.head.is_disjoint(u) {
            return true;
        }
        let uf1 = r.pos.iter().any(|b| i.false_set.contains(b))
            || r.neg.iter().any(|c| i.true_set.contains(c));
        let uf2 = !r.pos.is_disjoint(u);
        let uf3 = r
            .head
            .iter()
            .any(|a| !u.contains(a) && i.value(a) != TruthValue::False);
        uf1 || uf2 || uf3
    })
}

pub fn is_consistent_unfounded(u: &BTreeSet<Atom>, i: &PartialInterpretation) -> bool {
    u.is_disjoint(&i.true_set)
}

/// A propositional clause `pos1 ∨ … ∨ ¬neg1 ∨ …`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Clause {
    pub pos: BTreeSet<Atom>,
    pub neg: BTreeSet<Atom>,
}

impl Clause {
    pub fn satisfied_by(&self, model: &Model) -> bool {
        !self.pos.is_disjoint(model) || !self.neg.is_subset(model)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.pos.iter().chain(&self.neg)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lits: Vec<String> = self
            .pos
            .iter()
            .map(Atom::to_string)
            .chain(self.neg.iter().map(|a| format!("-{a}")))
            .collect();
        f.write_str(&lits.join(" | "))
    }
}
