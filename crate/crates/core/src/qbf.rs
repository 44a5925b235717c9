//! Formulas `∃X ∀Y φ` with `φ` in DNF, and their disjunctive encoding.
//!
//! The textual format is
//!
//! ```text
//! e x1 x2
//! a y1 y2
//! x1 -y1
//! x2 y2
//! ```
//!
//! with one conjunction of `φ` per line after the two quantifier lines.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::atom::{Atom, Literal};
use crate::program::{Program, Rule};

pub const DEFAULT_QBF_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("variable `{0}` is quantified both existentially and universally")]
    BothBlocks(Atom),
    #[error("missing the universal quantifier line `a ...`")]
    MissingUniversal,
    #[error("line {line}: empty conjunction")]
    EmptyTerm { line: usize },
    #[error("line {line}: conjunction contains `{var}` and `-{var}`")]
    Contradictory { line: usize, var: Atom },
    #[error("line {line}: variable `{var}` is not quantified")]
    Unquantified { line: usize, var: Atom },
    #[error("{vars} variables exceed the evaluation cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
}

/// `∃ x_vars ∀ y_vars (term1 ∨ … ∨ termd)`; each term is a conjunction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qbf2E {
    pub x_vars: BTreeSet<Atom>,
    pub y_vars: BTreeSet<Atom>,
    pub terms: Vec<BTreeSet<Literal>>,
}

impl fmt::Display for Qbf2E {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |vs: &BTreeSet<Atom>| vs.iter().map(|v| format!(" {v}")).collect::<String>();
        writeln!(f, "e{}", names(&self.x_vars))?;
        writeln!(f, "a{}", names(&self.y_vars))?;
        for term in &self.terms {
            let lits: Vec<String> = term
                .iter()
                .map(|l| {
                    if l.positive {
                        l.atom.to_string()
                    } else {
                        format!("-{}", l.atom)
                    }
                })
                .collect();
            writeln!(f, "{}", lits.join(" "))?;
        }
        Ok(())
    }
}

fn variables(line: usize, words: &[&str]) -> Result<BTreeSet<Atom>, QbfError> {
    words
        .iter()
        .map(|w| {
            Atom::plain(w).map_err(|e| QbfError::Syntax {
                line,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn parse_qbf(text: &str) -> Result<Qbf2E, QbfError> {
    // Comments are stripped; blank lines count only between terms.
    let mut lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('%').next().unwrap_or("").trim()))
        .collect();
    while matches!(lines.last(), Some((_, l)) if l.is_empty()) {
        lines.pop();
    }
    let mut rest = lines.into_iter().skip_while(|(_, l)| l.is_empty());
    let mut header = |tag: &str| -> Result<Option<BTreeSet<Atom>>, QbfError> {
        let Some((n, l)) = rest.next() else {
            return Ok(None);
        };
        let words: Vec<&str> = l.split_whitespace().collect();
        if words.first() != Some(&tag) {
            return Ok(None);
        }
        variables(n, &words[1..]).map(Some)
    };
    let x_vars = header("e")?.ok_or_else(|| QbfError::Syntax {
        line: 1,
        message: "expected an `e` line".to_string(),
    })?;
    let y_vars = header("a")?.ok_or(QbfError::MissingUniversal)?;
    if let Some(v) = x_vars.intersection(&y_vars).next() {
        return Err(QbfError::BothBlocks(v.clone()));
    }
    let mut terms = Vec::new();
    for (n, l) in rest {
        if l.is_empty() {
            return Err(QbfError::EmptyTerm { line: n });
        }
        let mut term = BTreeSet::new();
        for w in l.split_whitespace() {
            let (name, positive) = match w.strip_prefix('-') {
                Some(name) => (name, false),
                None => (w, true),
            };
            let var = variables(n, &[name])?.into_iter().next().expect("one word");
            if !x_vars.contains(&var) && !y_vars.contains(&var) {
                return Err(QbfError::Unquantified { line: n, var });
            }
            let lit = Literal {
                atom: var,
                positive,
            };
            if term.contains(&lit.negate()) {
                return Err(QbfError::Contradictory {
                    line: n,
                    var: lit.atom,
                });
            }
            term.insert(lit);
        }
        terms.push(term);
    }
    Ok(Qbf2E {
        x_vars,
        y_vars,
        terms,
    })
}

/// A clause `X1 ∨ ¬X2 ∨ Y1 ∨ ¬Y2` of `¬φ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NegClause {
    pub x_pos: BTreeSet<Atom>,
    pub x_neg: BTreeSet<Atom>,
    pub y_pos: BTreeSet<Atom>,
    pub y_neg: BTreeSet<Atom>,
}

/// One clause per term, every literal complemented.
pub fn negate_dnf(q: &Qbf2E) -> Vec<NegClause> {
    q.terms
        .iter()
        .map(|term| {
            let mut c = NegClause::default();
            for l in term {
                let universal = q.y_vars.contains(&l.atom);
                let set = match (universal, l.positive) {
                    (false, true) => &mut c.x_neg,
                    (false, false) => &mut c.x_pos,
                    (true, true) => &mut c.y_neg,
                    (true, false) => &mut c.y_pos,
                };
                set.insert(l.atom.clone());
            }
            c
        })
        .collect()
}

/// The choice, explanation and unsatisfiability rules of one clause.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseRules {
    pub choice: Vec<Rule>,
    pub explain: Vec<Rule>,
    pub unsat: Vec<Rule>,
}

/// Rules for clause number `index` (1-based), with atoms `cl__index` and
/// `ncl__index`.
pub fn translate_clause(index: usize, c: &NegClause) -> ClauseRules {
    let cl = Atom::clause(index);
    let ncl = Atom::clause_complement(index);
    let f = Atom::falsum();
    let u = Atom::saturation();
    let choice = vec![
        Rule::new([cl.clone()], [], [ncl.clone()]),
        Rule::new([ncl.clone()], [], [cl.clone()]),
    ];
    let mut explain: Vec<Rule> = c
        .x_pos
        .iter()
        .map(|x| Rule::constraint([x.clone()], [ncl.clone()]))
        .collect();
    explain.extend(
        c.x_neg
            .iter()
            .map(|x| Rule::new([x.clone()], [], [ncl.clone()])),
    );
    let neg: BTreeSet<Atom> = c.x_pos.iter().cloned().chain([cl.clone(), f]).collect();
    explain.push(Rule {
        head: BTreeSet::from([Atom::falsum()]),
        pos: c.x_neg.clone(),
        neg,
    });
    let mut unsat: Vec<Rule> = c
        .y_pos
        .union(&c.y_neg)
        .map(|y| Rule::new([y.clone()], [u.clone()], []))
        .collect();
    let head = c.y_pos.iter().cloned().chain([u]);
    unsat.push(Rule::new(head, c.y_neg.iter().cloned(), [ncl]));
    ClauseRules {
        choice,
        explain,
        unsat,
    }
}

/// A program with a stable model iff `q` is valid.
pub fn qbf_to_program(q: &Qbf2E) -> Program {
    let mut p = Program::default();
    for (i, c) in negate_dnf(q).iter().enumerate() {
        let rules = translate_clause(i + 1, c);
        p.extend(rules.choice);
        p.extend(rules.explain);
        p.extend(rules.unsat);
    }
    let u = Atom::saturation();
    p.push(Rule::new([u.clone()], [], [u]));
    p
}

/// Validity by enumeration over the variables occurring in `φ`; the
/// others cannot affect it.
pub fn qbf_valid_oracle(q: &Qbf2E, cap: usize) -> Result<bool, QbfError> {
    let occurring: BTreeSet<&Atom> = q.terms.iter().flatten().map(|l| &l.atom).collect();
    let xs: Vec<&Atom> = occurring
        .iter()
        .copied()
        .filter(|v| q.x_vars.contains(*v))
        .collect();
    let ys: Vec<&Atom> = occurring
        .iter()
        .copied()
        .filter(|v| q.y_vars.contains(*v))
        .collect();
    if xs.len() + ys.len() > cap {
        return Err(QbfError::CapExceeded {
            vars: xs.len() + ys.len(),
            cap,
        });
    }
    let position = |v: &Atom| -> (bool, usize) {
        match xs.iter().position(|x| *x == v) {
            Some(i) => (false, i),
            None => (
                true,
                ys.iter().position(|y| *y == v).expect("occurring variable"),
            ),
        }
    };
    // (universal, index, positive) per literal
    let terms: Vec<Vec<(bool, usize, bool)>> = q
        .terms
        .iter()
        .map(|t| {
            t.iter()
                .map(|l| {
                    let (universal, i) = position(&l.atom);
                    (universal, i, l.positive)
                })
                .collect()
        })
        .collect();
    let holds = |xm: u64, ym: u64| {
        terms.iter().any(|t| {
            t.iter().all(|&(universal, i, positive)| {
                let m = if universal { ym } else { xm };
                (m >> i & 1 == 1) == positive
            })
        })
    };
    Ok((0..1u64 << xs.len()).any(|xm| (0..1u64 << ys.len()).all(|ym| holds(xm, ym))))
}
