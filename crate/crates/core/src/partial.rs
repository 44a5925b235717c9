//! Partial stable models as total stable models of a translated program.
//!
//! Every atom `a` gets a potential copy `p__a`. In a stable model `N` of
//! the translation, `a` is true when `a` and `p__a` are both in `N`, false
//! when neither is, and undefined when only `p__a` is.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::atom::{Atom, AtomKind, Literal};
use crate::gnt::{solve_program, GntConfig, GntError};
use crate::program::{Model, Program, Rule};
use crate::semantics::PartialInterpretation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartialError {
    #[error("atom `{0}` is already marked")]
    Marked(Atom),
    #[error("`{0}` is true while its potential copy is false")]
    Inconsistent(Atom),
    #[error("query contains both `{0}` and `not {0}`")]
    Complementary(Atom),
    #[error("query atom `{0}` is not in the program's base")]
    UnknownAtom(Atom),
    #[error("`__f` already occurs in the program")]
    FalsumInBase,
    #[error(transparent)]
    Solve(#[from] GntError),
}

fn check_unmarked(p: &Program) -> Result<(), PartialError> {
    match p.find_kind(&[AtomKind::Potential]) {
        Some(a) => Err(PartialError::Marked(a.clone())),
        None => Ok(()),
    }
}

fn potentials<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> BTreeSet<Atom> {
    atoms.into_iter().map(Atom::potential).collect()
}

/// The translation: `A :- B, not C°` and `A° :- B°, not C` per rule, then
/// `a° :- a` per base atom.
pub fn unfold_partiality(p: &Program) -> Result<Program, PartialError> {
    check_unmarked(p)?;
    let unmarked = p.rules().iter().map(|r| Rule {
        head: r.head.clone(),
        pos: r.pos.clone(),
        neg: potentials(&r.neg),
    });
    let marked = p.rules().iter().map(|r| Rule {
        head: potentials(&r.head),
        pos: potentials(&r.pos),
        neg: r.neg.clone(),
    });
    let consistency = p
        .base()
        .iter()
        .map(|a| Rule::new([a.potential()], [a.clone()], []));
    Ok(unmarked.chain(marked).chain(consistency).collect())
}

/// `T ∪ (T ∪ U)°`.
pub fn expand_psm(m: &PartialInterpretation) -> Model {
    let potentially: BTreeSet<Atom> = m
        .true_set()
        .iter()
        .cloned()
        .chain(m.undefined_set())
        .collect();
    m.true_set()
        .iter()
        .cloned()
        .chain(potentials(&potentially))
        .collect()
}

/// Reads a total interpretation of the translation back over `base`.
pub fn project_sm(n: &Model, base: &BTreeSet<Atom>) -> Result<PartialInterpretation, PartialError> {
    let mut t = BTreeSet::new();
    let mut f = BTreeSet::new();
    for a in base {
        match (n.contains(a), n.contains(&a.potential())) {
            (true, true) => {
                t.insert(a.clone());
            }
            (true, false) => return Err(PartialError::Inconsistent(a.clone())),
            (false, false) => {
                f.insert(a.clone());
            }
            (false, true) => {}
        }
    }
    Ok(PartialInterpretation::new(base.clone(), t, f).expect("disjoint by construction"))
}

/// A consistent set of query literals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryLiterals {
    literals: BTreeSet<Literal>,
}

impl QueryLiterals {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<QueryLiterals, PartialError> {
        let literals: BTreeSet<Literal> = literals.into_iter().collect();
        if let Some(l) = literals
            .iter()
            .find(|l| l.positive && literals.contains(&l.negate()))
        {
            return Err(PartialError::Complementary(l.atom.clone()));
        }
        Ok(QueryLiterals { literals })
    }

    pub fn literals(&self) -> &BTreeSet<Literal> {
        &self.literals
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.literals.iter().map(|l| &l.atom)
    }

    /// Is every literal true in `m`?
    pub fn holds_in(&self, m: &PartialInterpretation) -> bool {
        use crate::semantics::TruthValue;
        self.literals
            .iter()
            .all(|l| m.literal_value(l) == TruthValue::True)
    }
}

/// `Q ∪ Q°`, with `not a` marked as `not p__a`.
pub fn translate_query(q: &QueryLiterals) -> QueryLiterals {
    let marked = q.literals.iter().map(|l| Literal {
        atom: l.atom.potential(),
        positive: l.positive,
    });
    QueryLiterals {
        literals: q.literals.iter().cloned().chain(marked).collect(),
    }
}

/// The translation plus `__f :- p__a, not a` for every base atom, so that
/// `__f` is false exactly in the models coding total interpretations.
pub fn tr2_program(p: &Program) -> Result<Program, PartialError> {
    if p.base().contains(&Atom::falsum()) {
        return Err(PartialError::FalsumInBase);
    }
    let mut tr = unfold_partiality(p)?;
    for a in p.base() {
        tr.push(Rule::new([Atom::falsum()], [a.potential()], [a.clone()]));
    }
    Ok(tr)
}

/// `Q ∪ {not __f}`.
pub fn tr2_query(q: &QueryLiterals) -> QueryLiterals {
    let mut literals = q.literals.clone();
    literals.insert(Literal::neg(Atom::falsum()));
    QueryLiterals { literals }
}

fn check_query_atoms(p: &Program, q: &QueryLiterals) -> Result<(), PartialError> {
    match q.atoms().find(|a| !p.base().contains(*a)) {
        Some(a) => Err(PartialError::UnknownAtom(a.clone())),
        None => Ok(()),
    }
}

/// Constraints forcing every literal of `q` true.
fn query_constraints(q: &QueryLiterals) -> impl Iterator<Item = Rule> + '_ {
    q.literals.iter().map(|l| {
        if l.positive {
            Rule::constraint([], [l.atom.clone()])
        } else {
            Rule::constraint([l.atom.clone()], [])
        }
    })
}

fn first_model(p: &Program, config: GntConfig) -> Result<Option<Model>, PartialError> {
    let config = GntConfig {
        enumerate: false,
        ..config
    };
    Ok(solve_program(p, config)?.models.into_iter().next())
}

/// A partial stable model of `P` in which every literal of `q` is true.
pub fn possibility_query(
    p: &Program,
    q: &QueryLiterals,
    config: GntConfig,
) -> Result<Option<PartialInterpretation>, PartialError> {
    check_query_atoms(p, q)?;
    let mut tr = unfold_partiality(p)?;
    tr.extend(query_constraints(&translate_query(q)));
    first_model(&tr, config)?
        .map(|n| project_sm(&n, p.base()))
        .transpose()
}

/// All partial stable models of `P`, through the translation.
pub fn partial_stable_models(
    p: &Program,
    config: GntConfig,
) -> Result<BTreeSet<PartialInterpretation>, PartialError> {
    let tr = unfold_partiality(p)?;
    let config = GntConfig {
        enumerate: true,
        ..config
    };
    solve_program(&tr, config)?
        .models
        .iter()
        .map(|n| project_sm(n, p.base()))
        .collect()
}

/// [`possibility_query`] by enumerating every partial stable model and
/// filtering; returns the smallest witness.
pub fn possibility_query_by_filter(
    p: &Program,
    q: &QueryLiterals,
    config: GntConfig,
) -> Result<Option<PartialInterpretation>, PartialError> {
    check_query_atoms(p, q)?;
    Ok(partial_stable_models(p, config)?
        .into_iter()
        .find(|m| q.holds_in(m)))
}

/// A total stable model of `P` satisfying `q`, if any.
pub fn total_query(
    p: &Program,
    q: &QueryLiterals,
    config: GntConfig,
) -> Result<Option<Model>, PartialError> {
    check_query_atoms(p, q)?;
    let mut constrained = p.clone();
    constrained.extend(query_constraints(q));
    first_model(&constrained, config)
}
