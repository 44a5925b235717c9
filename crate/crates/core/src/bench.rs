//! Seeded random instances: 3-SAT clause sets with specified atoms, 2-QBFs
//! and small logic programs.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with `seed_from_u64`,
//! so an instance is a pure function of its parameters.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::atom::{Atom, Literal};
use crate::program::{Program, Rule};
use crate::qbf::Qbf2E;
use crate::semantics::Clause;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("{vars} variables are too few, the scheme needs at least {need}")]
    TooFewVariables { vars: usize, need: usize },
    #[error("the gw scheme needs an even variable count, got {0}")]
    OddVariables(usize),
    #[error("the clause ratio must be positive, got {0}")]
    BadRatio(f64),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `2v` conjunctions of five literals, at least two universal.
    #[default]
    Gw,
    /// `⌊√(v/2)⌋` conjunctions of three literals.
    Sqrt,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Gw => "gw",
            Scheme::Sqrt => "sqrt",
        })
    }
}

impl FromStr for Scheme {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gw" => Ok(Scheme::Gw),
            "sqrt" => Ok(Scheme::Sqrt),
            other => Err(BenchError::UnknownScheme(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchParams {
    /// Atoms for 3-SAT, variables for QBF.
    pub size: usize,
    pub ratio: f64,
    pub scheme: Scheme,
    pub seed: u64,
}

impl Default for BenchParams {
    fn default() -> Self {
        BenchParams {
            size: 20,
            ratio: 4.258,
            scheme: Scheme::Gw,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D3SatInstance {
    pub atoms: Vec<Atom>,
    pub clauses: Vec<Clause>,
    /// Atoms every accepted minimal model must contain.
    pub specified: Vec<Atom>,
}

impl D3SatInstance {
    /// One rule per clause, negative literals moved to the body, and one
    /// constraint `:- not c` per specified atom.
    pub fn program(&self) -> Program {
        let mut p = Program::with_base([], self.atoms.iter().cloned());
        for c in &self.clauses {
            if c.pos.is_empty() {
                p.push(Rule::constraint(c.neg.iter().cloned(), []));
            } else {
                p.push(Rule::new(c.pos.iter().cloned(), c.neg.iter().cloned(), []));
            }
        }
        for c in &self.specified {
            p.push(Rule::constraint([], [c.clone()]));
        }
        p
    }
}

fn numbered(prefix: &str, i: usize) -> Atom {
    Atom::plain(&format!("{prefix}{i}")).expect("generated names are plain")
}

/// `⌊ratio·n⌋` clauses over three distinct atoms each, with duplicates
/// across clauses kept, and `⌊2n/100⌋` specified atoms.
pub fn gen_random_d3sat_instance(
    n: usize,
    ratio: f64,
    seed: u64,
) -> Result<D3SatInstance, BenchError> {
    if n < 3 {
        return Err(BenchError::TooFewVariables { vars: n, need: 3 });
    }
    if ratio.is_nan() || ratio <= 0.0 {
        return Err(BenchError::BadRatio(ratio));
    }
    let mut rng = rng(seed);
    let atoms: Vec<Atom> = (1..=n).map(|i| numbered("a", i)).collect();
    let count = (ratio * n as f64).floor() as usize;
    let clauses = (0..count)
        .map(|_| {
            let mut c = Clause::default();
            for i in sample(&mut rng, n, 3) {
                let set = if rng.gen_bool(0.5) {
                    &mut c.pos
                } else {
                    &mut c.neg
                };
                set.insert(atoms[i].clone());
            }
            c
        })
        .collect();
    let specified = sample(&mut rng, n, 2 * n / 100)
        .into_iter()
        .map(|i| atoms[i].clone())
        .collect();
    Ok(D3SatInstance {
        atoms,
        clauses,
        specified,
    })
}

pub fn gen_random_d3sat(n: usize, ratio: f64, seed: u64) -> Result<Program, BenchError> {
    Ok(gen_random_d3sat_instance(n, ratio, seed)?.program())
}

/// Variables `x1..` and `y1..`; `|X| = ⌊v/2⌋`.
pub fn gen_random_qbf(params: &BenchParams) -> Result<Qbf2E, BenchError> {
    let v = params.size;
    let (terms, width, min_universal) = match params.scheme {
        Scheme::Gw => {
            if v % 2 == 1 {
                return Err(BenchError::OddVariables(v));
            }
            (2 * v, 5, 2)
        }
        Scheme::Sqrt => (((v / 2) as f64).sqrt().floor() as usize, 3, 0),
    };
    let nx = v / 2;
    if v < width || v - nx < min_universal {
        return Err(BenchError::TooFewVariables {
            vars: v,
            need: width.max(2 * min_universal),
        });
    }
    let vars: Vec<Atom> = (1..=nx)
        .map(|i| numbered("x", i))
        .chain((1..=v - nx).map(|i| numbered("y", i)))
        .collect();
    let mut rng = rng(params.seed);
    let mut out = Vec::with_capacity(terms);
    while out.len() < terms {
        let picked = sample(&mut rng, v, width).into_vec();
        let polarity: Vec<bool> = (0..width).map(|_| rng.gen_bool(0.5)).collect();
        if picked.iter().filter(|&&i| i >= nx).count() < min_universal {
            continue;
        }
        let term: BTreeSet<Literal> = picked
            .iter()
            .zip(polarity)
            .map(|(&i, positive)| Literal {
                atom: vars[i].clone(),
                positive,
            })
            .collect();
        out.push(term);
    }
    Ok(Qbf2E {
        x_vars: vars[..nx].iter().cloned().collect(),
        y_vars: vars[nx..].iter().cloned().collect(),
        terms: out,
    })
}

/// Shape of [`random_program`] output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgramShape {
    pub max_atoms: usize,
    pub max_rules: usize,
    /// 1 keeps the program normal.
    pub max_head: usize,
    pub max_body: usize,
    /// Allow `:- body` rules.
    pub constraints: bool,
}

impl ProgramShape {
    pub fn normal(max_atoms: usize, max_rules: usize) -> Self {
        ProgramShape {
            max_atoms,
            max_rules,
            max_head: 1,
            max_body: 3,
            constraints: false,
        }
    }

    pub fn disjunctive(max_atoms: usize, max_rules: usize) -> Self {
        ProgramShape {
            max_head: 3,
            ..ProgramShape::normal(max_atoms, max_rules)
        }
    }
}

/// A program over `p1..pk`, `k ≤ max_atoms`, all declared in the base.
/// Disjunctive shapes put a proper disjunction in the first rule when
/// there are two atoms to choose from.
pub fn random_program(shape: &ProgramShape, seed: u64) -> Program {
    let mut rng = rng(seed);
    let k = rng.gen_range(1..=shape.max_atoms.max(1));
    let atoms: Vec<Atom> = (1..=k).map(|i| numbered("p", i)).collect();
    let mut p = Program::with_base([], atoms.iter().cloned());
    let rules = rng.gen_range(1..=shape.max_rules.max(1));
    for r in 0..rules {
        let body_len = rng.gen_range(0..=shape.max_body.min(k));
        let body = sample(&mut rng, k, body_len).into_vec();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for i in body {
            if rng.gen_bool(0.5) {
                pos.push(atoms[i].clone());
            } else {
                neg.push(atoms[i].clone());
            }
        }
        if shape.constraints && body_len > 0 && rng.gen_ratio(1, 8) {
            p.push(Rule::constraint(pos, neg));
            continue;
        }
        let widest = shape.max_head.clamp(1, k);
        let head_len = if r == 0 && widest > 1 {
            rng.gen_range(2..=widest)
        } else {
            rng.gen_range(1..=widest)
        };
        let head: Vec<Atom> = sample(&mut rng, k, head_len)
            .into_iter()
            .map(|i| atoms[i].clone())
            .collect();
        p.push(Rule::new(head, pos, neg));
    }
    p
}
