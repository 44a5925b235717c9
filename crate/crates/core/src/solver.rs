//! Backtracking stable-model search for normal programs.
//!
//! Propagation combines forward and backward rule inference with
//! falsification of the atoms that can no longer be derived. The search is
//! chronological and tries the negative phase of each choice first.
//!
//! ```
//! use gnt_core::{parse_program, solver::{Solver, SolverConfig}};
//!
//! let p = parse_program("a :- not b.\nb :- not a.").unwrap();
//! let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
//! let first = s.next_stable_model().unwrap();
//! assert_eq!(first.iter().map(|a| a.as_str()).collect::<Vec<_>>(), ["b"]);
//! assert!(s.next_stable_model().is_some());
//! assert!(s.next_stable_model().is_none());
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::atom::{Atom, Literal};
use crate::program::{Model, Program};
use crate::semantics::PartialInterpretation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("rule `{0}` has a disjunctive head")]
    NotNormal(String),
    #[error("atom `{0}` is not in the program's base")]
    UnknownAtom(Atom),
    #[error("every atom is already assigned")]
    NothingUndefined,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverConfig {
    /// Run failed-literal lookahead after each expansion.
    pub lookahead: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub choices: u64,
    pub conflicts: u64,
    pub expansions: u64,
}

impl std::ops::AddAssign for SolverStats {
    fn add_assign(&mut self, other: SolverStats) {
        self.choices += other.choices;
        self.conflicts += other.conflicts;
        self.expansions += other.expansions;
    }
}

/// Result of closing a partial interpretation under propagation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    Consistent(PartialInterpretation),
    Conflict,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Value {
    Undef,
    True,
    False,
}

struct CompiledRule {
    head: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

/// Propagation state over a fixed normal program.
///
/// Between public operations the assignment is closed under propagation
/// unless [`Engine::in_conflict`] holds; [`Engine::rollback`] restores the
/// exact state of a checkpoint.
pub(crate) struct Engine {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
    rules: Vec<CompiledRule>,
    head_of: Vec<Vec<usize>>,
    pos_occ: Vec<Vec<usize>>,
    neg_occ: Vec<Vec<usize>>,
    value: Vec<Value>,
    /// Body literals not yet assigned.
    undef_lits: Vec<u32>,
    /// Body literals assigned false.
    false_lits: Vec<u32>,
    /// Rules for the atom whose body is not false.
    head_live: Vec<u32>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    conflict: bool,
    pub(crate) stats: SolverStats,
}

impl Engine {
    pub(crate) fn new(program: &Program) -> Result<Engine, SolverError> {
        if let Some(r) = program.rules().iter().find(|r| !r.is_normal()) {
            return Err(SolverError::NotNormal(r.to_string()));
        }
        let atoms: Vec<Atom> = program.base().iter().cloned().collect();
        let index: BTreeMap<Atom, usize> = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let n = atoms.len();
        let mut engine = Engine {
            atoms,
            rules: Vec::with_capacity(program.len()),
            head_of: vec![Vec::new(); n],
            pos_occ: vec![Vec::new(); n],
            neg_occ: vec![Vec::new(); n],
            value: vec![Value::Undef; n],
            undef_lits: Vec::with_capacity(program.len()),
            false_lits: vec![0; program.len()],
            head_live: vec![0; n],
            trail: Vec::with_capacity(n),
            queue: Vec::new(),
            conflict: false,
            stats: SolverStats::default(),
            index,
        };
        for (r, rule) in program.rules().iter().enumerate() {
            let head = engine.index[rule.head_atom().expect("normal rule")];
            let pos: Vec<usize> = rule.pos.iter().map(|a| engine.index[a]).collect();
            let neg: Vec<usize> = rule.neg.iter().map(|a| engine.index[a]).collect();
            engine.head_of[head].push(r);
            engine.head_live[head] += 1;
            pos.iter().for_each(|&a| engine.pos_occ[a].push(r));
            neg.iter().for_each(|&a| engine.neg_occ[a].push(r));
            engine.undef_lits.push((pos.len() + neg.len()) as u32);
            engine.rules.push(CompiledRule { head, pos, neg });
        }
        for r in 0..engine.rules.len() {
            engine.check_rule(r);
        }
        for a in 0..n {
            engine.check_atom(a);
        }
        Ok(engine)
    }

    pub(crate) fn atom_index(&self, atom: &Atom) -> Result<usize, SolverError> {
        self.index
            .get(atom)
            .copied()
            .ok_or_else(|| SolverError::UnknownAtom(atom.clone()))
    }

    pub(crate) fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub(crate) fn in_conflict(&self) -> bool {
        self.conflict
    }

    pub(crate) fn checkpoint(&self) -> usize {
        debug_assert!(self.queue.is_empty());
        self.trail.len()
    }

    pub(crate) fn rollback(&mut self, checkpoint: usize) {
        while self.trail.len() > checkpoint {
            let a = self.trail.pop().expect("nonempty trail");
            let truth = self.value[a] == Value::True;
            for i in 0..self.pos_occ[a].len() {
                let r = self.pos_occ[a][i];
                self.unset_literal(r, !truth);
            }
            for i in 0..self.neg_occ[a].len() {
                let r = self.neg_occ[a][i];
                self.unset_literal(r, truth);
            }
            self.value[a] = Value::Undef;
        }
        self.queue.clear();
        self.conflict = false;
    }

    fn unset_literal(&mut self, r: usize, was_false: bool) {
        self.undef_lits[r] += 1;
        if was_false {
            if self.false_lits[r] == 1 {
                self.head_live[self.rules[r].head] += 1;
            }
            self.false_lits[r] -= 1;
        }
    }

    fn set_literal(&mut self, r: usize, is_false: bool) {
        self.undef_lits[r] -= 1;
        if is_false {
            self.false_lits[r] += 1;
            if self.false_lits[r] == 1 {
                self.head_live[self.rules[r].head] -= 1;
            }
        }
    }

    /// Records `atom = truth`; a contradiction sets the conflict flag.
    pub(crate) fn assign(&mut self, atom: usize, truth: bool) {
        let want = if truth { Value::True } else { Value::False };
        match self.value[atom] {
            Value::Undef => {}
            v if v == want => return,
            _ => {
                self.conflict = true;
                return;
            }
        }
        self.value[atom] = want;
        self.trail.push(atom);
        for i in 0..self.pos_occ[atom].len() {
            let r = self.pos_occ[atom][i];
            self.set_literal(r, !truth);
        }
        for i in 0..self.neg_occ[atom].len() {
            let r = self.neg_occ[atom][i];
            self.set_literal(r, truth);
        }
        self.queue.push(atom);
    }

    fn check_rule(&mut self, r: usize) {
        if self.false_lits[r] > 0 {
            return;
        }
        let head = self.rules[r].head;
        match (self.undef_lits[r], self.value[head]) {
            (0, _) => self.assign(head, true),
            (1, Value::False) => {
                let rule = &self.rules[r];
                let pos = rule.pos.iter().find(|&&a| self.value[a] == Value::Undef);
                let neg = rule.neg.iter().find(|&&a| self.value[a] == Value::Undef);
                match (pos, neg) {
                    (Some(&a), _) => self.assign(a, false),
                    (None, Some(&a)) => self.assign(a, true),
                    (None, None) => unreachable!("counter says one literal is open"),
                }
            }
            _ => {}
        }
    }

    fn check_atom(&mut self, a: usize) {
        match (self.head_live[a], self.value[a]) {
            (0, _) => self.assign(a, false),
            (1, Value::True) => {
                let Some(&r) = self.head_of[a].iter().find(|&&r| self.false_lits[r] == 0) else {
                    return;
                };
                if self.undef_lits[r] == 0 {
                    return;
                }
                for i in 0..self.rules[r].pos.len() {
                    let b = self.rules[r].pos[i];
                    self.assign(b, true);
                }
                for i in 0..self.rules[r].neg.len() {
                    let c = self.rules[r].neg[i];
                    self.assign(c, false);
                }
            }
            _ => {}
        }
    }

    /// Forward and backward inference to a fixpoint.
    fn propagate(&mut self) -> bool {
        while let Some(a) = self.queue.pop() {
            if self.conflict {
                break;
            }
            self.check_atom(a);
            for i in 0..self.head_of[a].len() {
                let r = self.head_of[a][i];
                self.check_rule(r);
            }
            for i in 0..self.pos_occ[a].len() + self.neg_occ[a].len() {
                let r = if i < self.pos_occ[a].len() {
                    self.pos_occ[a][i]
                } else {
                    self.neg_occ[a][i - self.pos_occ[a].len()]
                };
                self.check_rule(r);
                let head = self.rules[r].head;
                self.check_atom(head);
            }
        }
        if self.conflict {
            self.queue.clear();
        }
        !self.conflict
    }

    /// Falsifies every atom outside the least fixpoint of rules whose body
    /// is not yet false. Returns whether anything new was assigned.
    fn falsify_unfounded(&mut self) -> bool {
        let n = self.atoms.len();
        let mut derived = vec![false; n];
        let mut missing: Vec<u32> = self.rules.iter().map(|r| r.pos.len() as u32).collect();
        let mut stack = Vec::new();
        let usable = |e: &Engine, r: usize| e.false_lits[r] == 0;
        for r in 0..self.rules.len() {
            if missing[r] == 0 && usable(self, r) {
                let h = self.rules[r].head;
                if !derived[h] {
                    derived[h] = true;
                    stack.push(h);
                }
            }
        }
        while let Some(a) = stack.pop() {
            for &r in &self.pos_occ[a] {
                missing[r] -= 1;
                if missing[r] == 0 && usable(self, r) {
                    let h = self.rules[r].head;
                    if !derived[h] {
                        derived[h] = true;
                        stack.push(h);
                    }
                }
            }
        }
        let mut changed = false;
        for a in 0..n {
            if !derived[a] && self.value[a] != Value::False {
                changed = true;
                self.assign(a, false);
                if self.conflict {
                    break;
                }
            }
        }
        changed
    }

    /// Closes the assignment; false on conflict.
    pub(crate) fn expand(&mut self) -> bool {
        self.stats.expansions += 1;
        loop {
            if !self.propagate() {
                self.stats.conflicts += 1;
                return false;
            }
            if !self.falsify_unfounded() {
                return true;
            }
            if self.conflict {
                self.queue.clear();
                self.stats.conflicts += 1;
                return false;
            }
        }
    }

    /// Expansion followed by failed-literal lookahead, to a fixpoint.
    pub(crate) fn extend(&mut self, lookahead: bool) -> bool {
        if !self.expand() {
            return false;
        }
        if !lookahead {
            return true;
        }
        loop {
            let mut changed = false;
            for a in 0..self.atoms.len() {
                if self.value[a] != Value::Undef {
                    continue;
                }
                for truth in [true, false] {
                    let cp = self.checkpoint();
                    self.assign(a, truth);
                    let ok = self.expand();
                    self.rollback(cp);
                    if !ok {
                        self.assign(a, !truth);
                        if !self.expand() {
                            return false;
                        }
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// The undefined atom occurring most often in rules that are neither
    /// blocked nor satisfied by their head; ties go to the smallest atom.
    pub(crate) fn heuristic(&self) -> Option<usize> {
        let mut count = vec![0u32; self.atoms.len()];
        for (r, rule) in self.rules.iter().enumerate() {
            if self.false_lits[r] > 0 || self.value[rule.head] == Value::True {
                continue;
            }
            for &a in std::iter::once(&rule.head)
                .chain(&rule.pos)
                .chain(&rule.neg)
            {
                count[a] += 1;
            }
        }
        (0..self.atoms.len())
            .filter(|&a| self.value[a] == Value::Undef)
            .min_by_key(|&a| (std::cmp::Reverse(count[a]), a))
    }

    pub(crate) fn true_atoms(&self) -> Model {
        self.trail
            .iter()
            .filter(|&&a| self.value[a] == Value::True)
            .map(|&a| self.atoms[a].clone())
            .collect()
    }

    pub(crate) fn interpretation(&self) -> PartialInterpretation {
        let pick = |v: Value| -> BTreeSet<Atom> {
            (0..self.atoms.len())
                .filter(|&a| self.value[a] == v)
                .map(|a| self.atoms[a].clone())
                .collect()
        };
        PartialInterpretation::new(
            self.atoms.iter().cloned().collect(),
            pick(Value::True),
            pick(Value::False),
        )
        .expect("values are disjoint")
    }

    /// Assigns every literal of `i` over this engine's atoms.
    pub(crate) fn assign_interpretation(
        &mut self,
        i: &PartialInterpretation,
    ) -> Result<(), SolverError> {
        for (set, truth) in [(i.true_set(), true), (i.false_set(), false)] {
            for atom in set {
                let a = self.atom_index(atom)?;
                self.assign(a, truth);
            }
        }
        Ok(())
    }
}

/// Resumable enumeration of the stable models of a normal program.
pub struct Solver {
    engine: Engine,
    config: SolverConfig,
    /// `(atom, phase, trail length before the choice)`
    decisions: Vec<(usize, bool, usize)>,
    started: bool,
    exhausted: bool,
}

impl Solver {
    pub fn new(program: &Program, config: SolverConfig) -> Result<Solver, SolverError> {
        Ok(Solver {
            engine: Engine::new(program)?,
            config,
            decisions: Vec::new(),
            started: false,
            exhausted: false,
        })
    }

    /// Restricts the search to models agreeing with `lit`. Only effective
    /// before the first call to [`Solver::next_stable_model`].
    pub fn assume(&mut self, lit: &Literal) -> Result<(), SolverError> {
        assert!(!self.started, "assumptions must precede the search");
        let a = self.engine.atom_index(&lit.atom)?;
        self.engine.assign(a, lit.positive);
        Ok(())
    }

    pub fn stats(&self) -> SolverStats {
        self.engine.stats
    }

    /// Flips the deepest negative-phase choice. False when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some((atom, phase, cp)) = self.decisions.pop() {
            if phase {
                continue;
            }
            self.engine.rollback(cp);
            self.decisions.push((atom, true, cp));
            self.engine.assign(atom, true);
            if self.engine.extend(self.config.lookahead) {
                return true;
            }
        }
        false
    }

    pub fn next_stable_model(&mut self) -> Option<Model> {
        if self.exhausted {
            return None;
        }
        let mut consistent = if self.started {
            self.backtrack()
        } else {
            self.started = true;
            !self.engine.in_conflict() && self.engine.extend(self.config.lookahead)
        };
        loop {
            if !consistent {
                if !self.decisions.is_empty() && self.backtrack() {
                    consistent = true;
                    continue;
                }
                self.exhausted = true;
                return None;
            }
            let Some(x) = self.engine.heuristic() else {
                return Some(self.engine.true_atoms());
            };
            self.engine.stats.choices += 1;
            let cp = self.engine.checkpoint();
            self.decisions.push((x, false, cp));
            self.engine.assign(x, false);
            consistent = self.engine.extend(self.config.lookahead);
        }
    }

    /// Drains the enumeration.
    pub fn all_stable_models(&mut self) -> BTreeSet<Model> {
        std::iter::from_fn(|| self.next_stable_model()).collect()
    }
}

fn run_closure(
    g: &Program,
    a: &PartialInterpretation,
    lookahead: bool,
) -> Result<Expansion, SolverError> {
    let mut engine = Engine::new(g)?;
    engine.assign_interpretation(a)?;
    if engine.in_conflict() || !engine.extend(lookahead) {
        return Ok(Expansion::Conflict);
    }
    Ok(Expansion::Consistent(engine.interpretation()))
}

/// Closes `a` under propagation in `g`.
pub fn expand(g: &Program, a: &PartialInterpretation) -> Result<Expansion, SolverError> {
    run_closure(g, a, false)
}

/// [`expand`] strengthened with failed-literal lookahead.
pub fn lookahead(g: &Program, a: &PartialInterpretation) -> Result<Expansion, SolverError> {
    run_closure(g, a, true)
}

/// The next choice atom for `a` in `g`, without expanding `a` first.
pub fn heuristic(g: &Program, a: &PartialInterpretation) -> Result<Atom, SolverError> {
    let mut engine = Engine::new(g)?;
    // Only the literals of `a` count, not what the constructor derived.
    engine.rollback(0);
    engine.assign_interpretation(a)?;
    engine.queue.clear();
    engine
        .heuristic()
        .map(|i| engine.atom(i).clone())
        .ok_or(SolverError::NothingUndefined)
}

/// Does the literal set contain a complementary pair?
pub fn conflict(literals: &[Literal]) -> bool {
    let set: BTreeSet<&Literal> = literals.iter().collect();
    literals.iter().any(|l| set.contains(&l.negate()))
}

/// Every stable model of a normal program.
pub fn stable_models(
    program: &Program,
    config: SolverConfig,
) -> Result<BTreeSet<Model>, SolverError> {
    Ok(Solver::new(program, config)?.all_stable_models())
}
