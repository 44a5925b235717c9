//! Generate-and-test search for stable models of disjunctive programs.
//!
//! One engine searches the stable models of a generator program; every
//! covered candidate is certified minimal by a second solver run on the
//! tester program. After a candidate has been covered, the first positive
//! branch taken while backtracking runs an early test on its partial
//! assignment and prunes the subtree when a smaller reduct model exists.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::disjunctive::{
    gen_basic, gen_naive, gen_program, test_program, CandidateModel, GenError,
};
use crate::oracle::{Oracle, OracleError};
use crate::program::{Model, Program};
use crate::semantics::PartialInterpretation;
use crate::solver::{Engine, Solver, SolverConfig, SolverError, SolverStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GntError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Which generator drives the search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Choices for disjunctive heads only.
    Gnt1,
    /// Choices plus support rules.
    #[default]
    Gnt2,
    /// A free choice over the whole base.
    Naive,
    /// Exhaustive enumeration by the oracle.
    Brute,
}

/// Policy for the early minimality test on backtracking.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EarlyTest {
    Off,
    /// Test once per covered candidate, whatever the outcome.
    #[default]
    Once,
    /// Keep testing at each backtracking level until a test passes.
    Repeat,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GntConfig {
    pub mode: Mode,
    pub early_test: EarlyTest,
    pub lookahead: bool,
    /// Continue past the first accepted model.
    pub enumerate: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GntStats {
    /// Total stable models of the generator reached.
    pub candidates_covered: u64,
    /// Tester solver runs, early ones included.
    pub minimal_tests: u64,
    pub early_tests: u64,
    /// Early tests that pruned a subtree.
    pub early_prunes: u64,
    pub choices: u64,
    pub conflicts: u64,
    pub expansions: u64,
}

impl GntStats {
    fn absorb(&mut self, s: SolverStats) {
        self.choices += s.choices;
        self.conflicts += s.conflicts;
        self.expansions += s.expansions;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub models: BTreeSet<Model>,
    pub stats: GntStats,
}

/// The generator program for `mode`; `None` for [`Mode::Brute`].
pub fn generator(p: &Program, mode: Mode) -> Result<Option<Program>, GenError> {
    Ok(Some(match mode {
        Mode::Gnt1 => gen_basic(p)?,
        Mode::Gnt2 => gen_program(p)?,
        Mode::Naive => gen_naive(p)?,
        Mode::Brute => return Ok(None),
    }))
}

/// True iff `m` is a minimal model of the GL-reduct `P^m`, assuming `m`
/// is a model of `P`.
pub fn minimal_model_test(p: &Program, m: &CandidateModel) -> Result<bool, GntError> {
    let test = test_program(p, m)?;
    Ok(Solver::new(&test, SolverConfig::default())?
        .next_stable_model()
        .is_none())
}

/// The minimality test read off a partial assignment: undefined and
/// foreign atoms are taken false.
pub fn minimal_test(p: &Program, a: &PartialInterpretation) -> Result<bool, GntError> {
    let m: Model = a.true_set().intersection(p.base()).cloned().collect();
    minimal_model_test(p, &m)
}

/// Refuting `m` refutes every superset only when `m` satisfies the normal
/// rules of `P^m` whose bodies it contains; the tester omits those rules.
pub fn early_test_applies(p: &Program, m: &Model) -> bool {
    p.rules()
        .iter()
        .filter(|r| r.is_normal())
        .all(|r| !r.neg.is_disjoint(m) || !r.pos.is_subset(m) || !r.head.is_disjoint(m))
}

struct Search<'a, F> {
    engine: Engine,
    p: &'a Program,
    config: GntConfig,
    was_covered: bool,
    stats: GntStats,
    emit: F,
}

impl<F: FnMut(Model) -> bool> Search<'_, F> {
    fn candidate(&self) -> Model {
        self.engine
            .true_atoms()
            .intersection(self.p.base())
            .cloned()
            .collect()
    }

    /// True when the search should stop.
    fn gnt(&mut self) -> Result<bool, GntError> {
        if !self.engine.extend(self.config.lookahead) {
            return Ok(false);
        }
        let Some(x) = self.engine.heuristic() else {
            self.was_covered = true;
            self.stats.candidates_covered += 1;
            self.stats.minimal_tests += 1;
            let m = self.candidate();
            if minimal_model_test(self.p, &m)? {
                return Ok((self.emit)(m));
            }
            return Ok(false);
        };
        self.engine.stats.choices += 1;
        let cp = self.engine.checkpoint();
        self.engine.assign(x, false);
        if self.gnt()? {
            return Ok(true);
        }
        self.engine.rollback(cp);
        self.engine.assign(x, true);
        if !self.engine.expand() {
            return Ok(false);
        }
        let m = self.candidate();
        if self.was_covered
            && self.config.early_test != EarlyTest::Off
            && early_test_applies(self.p, &m)
        {
            self.stats.early_tests += 1;
            self.stats.minimal_tests += 1;
            if !minimal_model_test(self.p, &m)? {
                self.stats.early_prunes += 1;
                if self.config.early_test == EarlyTest::Once {
                    self.was_covered = false;
                }
                return Ok(false);
            }
        }
        self.was_covered = false;
        self.gnt()
    }
}

/// Runs the generate-and-test recursion on generator `g` from `a0`,
/// calling `emit` on each accepted candidate until it returns true.
pub fn gnt_search_with(
    g: &Program,
    p: &Program,
    a0: &PartialInterpretation,
    config: GntConfig,
    emit: impl FnMut(Model) -> bool,
) -> Result<GntStats, GntError> {
    let mut engine = Engine::new(g)?;
    engine.assign_interpretation(a0)?;
    let mut search = Search {
        engine,
        p,
        config,
        was_covered: false,
        stats: GntStats::default(),
        emit,
    };
    if !search.engine.in_conflict() {
        search.gnt()?;
    }
    let mut stats = search.stats;
    stats.absorb(search.engine.stats);
    Ok(stats)
}

/// The first accepted candidate, if any.
pub fn gnt_search(
    g: &Program,
    p: &Program,
    a0: &PartialInterpretation,
    config: GntConfig,
) -> Result<(Option<CandidateModel>, GntStats), GntError> {
    let mut found = None;
    let stats = gnt_search_with(g, p, a0, config, |m| {
        found = Some(m);
        true
    })?;
    Ok((found, stats))
}

/// Stable models of a disjunctive program by the configured mode.
pub fn solve_disjunctive(p: &Program, config: GntConfig) -> Result<Solution, GntError> {
    let Some(g) = generator(p, config.mode)? else {
        let oracle = Oracle::default();
        let mut models = oracle.enumerate_stable_models(p)?;
        if !config.enumerate {
            models = models.into_iter().take(1).collect();
        }
        return Ok(Solution {
            models,
            stats: GntStats::default(),
        });
    };
    let mut models = BTreeSet::new();
    let enumerate = config.enumerate;
    let stats = gnt_search_with(&g, p, &PartialInterpretation::default(), config, |m| {
        models.insert(m);
        !enumerate
    })?;
    Ok(Solution { models, stats })
}

/// Normal programs go straight to the engine, except in the naive and
/// brute modes; everything else through [`solve_disjunctive`].
pub fn solve_program(p: &Program, config: GntConfig) -> Result<Solution, GntError> {
    if !p.is_normal() || matches!(config.mode, Mode::Naive | Mode::Brute) {
        return solve_disjunctive(p, config);
    }
    let mut solver = Solver::new(
        p,
        SolverConfig {
            lookahead: config.lookahead,
        },
    )?;
    let mut models = BTreeSet::new();
    while let Some(m) = solver.next_stable_model() {
        models.insert(m);
        if !config.enumerate {
            break;
        }
    }
    let mut stats = GntStats {
        candidates_covered: models.len() as u64,
        ..GntStats::default()
    };
    stats.absorb(solver.stats());
    Ok(Solution { models, stats })
}
