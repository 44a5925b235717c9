//! Total and partial stable models of ground disjunctive logic programs.
//!
//! Partiality is unfolded into total stable models of a translated program
//! ([`partial`]), disjunctions into a generate-and-test pair of normal
//! programs ([`disjunctive`], [`gnt`]), and normal programs are searched by
//! a propagation-based backtracking engine ([`solver`]). The exhaustive
//! definitions in [`oracle`] serve as ground truth.

pub mod atom;
pub mod bench;
pub mod disjunctive;
pub mod gnt;
pub mod oracle;
pub mod parse;
pub mod partial;
pub mod program;
pub mod qbf;
pub mod semantics;
pub mod solver;

pub use atom::{Atom, AtomError, AtomKind, Literal};
pub use oracle::{Oracle, OracleError};
pub use parse::{parse_program, parse_program_with, ParseError, ParseOptions};
pub use program::{render_program, split_program, Model, Program, Rule};
pub use semantics::{Clause, PartialInterpretation, TruthValue};
