//! Seeded checks shared by the property suites and the acceptance runner.
//!
//! Each `check_*` builds its instance from a seed and returns a
//! description of the counterexample on failure.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gnt_core::bench::{
    gen_random_d3sat_instance, gen_random_qbf, random_program, rng, BenchParams, ProgramShape,
    Scheme,
};
use gnt_core::disjunctive::{gen_basic, gen_program, test_program};
use gnt_core::gnt::{
    early_test_applies, solve_disjunctive, solve_program, EarlyTest, GntConfig, Mode,
};
use gnt_core::oracle::remove_unfounded;
use gnt_core::partial::{expand_psm, project_sm, unfold_partiality};
use gnt_core::qbf::{
    negate_dnf, qbf_to_program, qbf_valid_oracle, translate_clause, Qbf2E, DEFAULT_QBF_CAP,
};
use gnt_core::semantics::{
    gl_reduct, is_partial_model, is_total_model, is_unfounded_set, satisfies,
};
use gnt_core::solver::{expand, stable_models, Expansion, SolverConfig};
use gnt_core::{
    parse_program, parse_program_with, split_program, Atom, Clause, Literal, Model, Oracle,
    ParseOptions, PartialInterpretation, Program, Rule,
};
use rand::seq::index::sample;
use rand::Rng;

pub type Check = Result<(), String>;

pub fn prog(text: &str) -> Program {
    parse_program(text).unwrap()
}

pub fn set(names: &[&str]) -> BTreeSet<Atom> {
    names
        .iter()
        .map(|s| Atom::from_rendered(s).unwrap())
        .collect()
}

pub fn pi(base: &[&str], t: &[&str], f: &[&str]) -> PartialInterpretation {
    PartialInterpretation::new(set(base), set(t), set(f)).unwrap()
}

pub fn normal_program(seed: u64) -> Program {
    random_program(&ProgramShape::normal(6, 10), seed)
}

pub fn disjunctive_program(seed: u64, atoms: usize, rules: usize) -> Program {
    random_program(&ProgramShape::disjunctive(atoms, rules), seed)
}

/// Disjunctive with occasional `:- body` rules.
pub fn constrained_program(seed: u64, atoms: usize, rules: usize) -> Program {
    let shape = ProgramShape {
        constraints: true,
        ..ProgramShape::disjunctive(atoms, rules)
    };
    random_program(&shape, seed)
}

/// Drops negative bodies.
pub fn positive_program(seed: u64) -> Program {
    let p = disjunctive_program(seed, 6, 8);
    let rules = p.rules().iter().map(|r| Rule {
        neg: BTreeSet::new(),
        ..r.clone()
    });
    Program::with_base(rules, p.base().iter().cloned())
}

pub fn subsets(atoms: &BTreeSet<Atom>) -> Vec<BTreeSet<Atom>> {
    let v: Vec<&Atom> = atoms.iter().collect();
    (0..1u64 << v.len())
        .map(|m| {
            v.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, a)| (*a).clone())
                .collect()
        })
        .collect()
}

pub fn all_partials(base: &BTreeSet<Atom>) -> Vec<PartialInterpretation> {
    let mut out = Vec::new();
    for t in subsets(base) {
        let rest: BTreeSet<Atom> = base.difference(&t).cloned().collect();
        for f in subsets(&rest) {
            out.push(PartialInterpretation::new(base.clone(), t.clone(), f).unwrap());
        }
    }
    out
}

pub fn random_partial(r: &mut impl Rng, base: &BTreeSet<Atom>) -> PartialInterpretation {
    let (mut t, mut f) = (BTreeSet::new(), BTreeSet::new());
    for a in base {
        match r.gen_range(0..3) {
            0 => t.insert(a.clone()),
            1 => f.insert(a.clone()),
            _ => false,
        };
    }
    PartialInterpretation::new(base.clone(), t, f).unwrap()
}

fn enumerate(mode: Mode) -> GntConfig {
    GntConfig {
        mode,
        enumerate: true,
        ..GntConfig::default()
    }
}

fn fail(what: &str, p: &Program, detail: impl std::fmt::Debug) -> Check {
    Err(format!("{what}\nprogram:\n{p}detail: {detail:?}"))
}

// Program core.

pub fn check_round_trip(seed: u64) -> Check {
    let generated = constrained_program(seed, 6, 10);
    let p = Program::new(generated.rules().to_vec());
    let options = ParseOptions {
        allow_reserved: true,
    };
    let back = parse_program_with(&p.to_string(), options).map_err(|e| e.to_string())?;
    if back != p {
        return fail("parse(render(p)) differs", &p, back.to_string());
    }
    Ok(())
}

pub fn check_split(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 10);
    let (normal, disjunctive, heads) = split_program(&p);
    let mut rules: Vec<Rule> = normal.rules().to_vec();
    rules.extend(disjunctive.rules().iter().cloned());
    let ok = normal.rules().iter().all(Rule::is_normal)
        && disjunctive.rules().iter().all(|r| !r.is_normal())
        && normal.len() + disjunctive.len() == p.len()
        && rules.iter().all(|r| p.rules().contains(r))
        && p.rules().iter().all(|r| rules.contains(r))
        && heads
            == disjunctive
                .rules()
                .iter()
                .flat_map(|r| r.head.iter().cloned())
                .collect();
    if ok {
        Ok(())
    } else {
        fail(
            "split is not a partition",
            &p,
            (normal.to_string(), disjunctive.to_string()),
        )
    }
}

// Semantics and unfounded sets, with the test-side definitions built from
// the three-valued evaluator only.

fn test_side_unfounded_free(p: &Program, n: &PartialInterpretation) -> bool {
    subsets(p.base())
        .iter()
        .filter(|u| !u.is_disjoint(n.true_set()))
        .all(|u| !is_unfounded_set(p, n, u))
}

fn test_side_greatest_unfounded(p: &Program, i: &PartialInterpretation) -> Option<BTreeSet<Atom>> {
    let union: BTreeSet<Atom> = subsets(p.base())
        .into_iter()
        .filter(|u| is_unfounded_set(p, i, u))
        .flatten()
        .collect();
    is_unfounded_set(p, i, &union).then_some(union)
}

/// `t` is a minimal model of the positive program `q`.
fn minimal_total_model(q: &Program, t: &BTreeSet<Atom>) -> bool {
    let base = q.base();
    let models = |s: &BTreeSet<Atom>| {
        let i = PartialInterpretation::total(base, s);
        q.rules().iter().all(|r| satisfies(&i, r))
    };
    models(t) && subsets(t).iter().all(|s| s == t || !models(s))
}

pub fn check_unfounded_reduct_invariance(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let mut r = rng(seed ^ 0x9e37);
    let n = PartialInterpretation::total(
        p.base(),
        &random_partial(&mut r, p.base()).true_set().clone(),
    );
    let reduct = gl_reduct(&p, &n);
    for u in subsets(p.base()) {
        if is_unfounded_set(&p, &n, &u) != is_unfounded_set(&reduct, &n, &u) {
            return fail("unfoundedness differs under the reduct", &p, (n, u));
        }
    }
    Ok(())
}

pub fn check_stable_iff_unfounded_free(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let oracle = Oracle::default();
    for t in subsets(p.base()) {
        let n = PartialInterpretation::total(p.base(), &t);
        let stable = oracle.is_stable_model(&p, &n).map_err(|e| e.to_string())?;
        let free = oracle
            .is_unfounded_free(&p, &n)
            .map_err(|e| e.to_string())?;
        let test_free = test_side_unfounded_free(&p, &n);
        let gus = test_side_greatest_unfounded(&p, &n);
        let oracle_gus = oracle
            .greatest_unfounded_set(&p, &n)
            .map_err(|e| e.to_string())?;
        let gus_is_false = gus.as_ref() == Some(n.false_set());
        // unfounded-freeness is vacuous off the models of P
        let model = is_total_model(&n, &p);
        if (model && stable != free)
            || free != test_free
            || stable != gus_is_false
            || gus != oracle_gus
        {
            return fail(
                "stable, unfounded-free and greatest-unfounded disagree",
                &p,
                (t, stable, free, test_free, gus, oracle_gus),
            );
        }
    }
    Ok(())
}

pub fn check_founded_and_maximal(seed: u64) -> Check {
    let p = constrained_program(seed, 5, 8);
    let oracle = Oracle::default();
    let mut r = rng(seed ^ 0x51ed);
    let mut ms: Vec<PartialInterpretation> = oracle
        .enumerate_partial_stable_models(&p)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    ms.extend((0..30).map(|_| random_partial(&mut r, p.base())));
    for m in ms {
        let psm = oracle
            .is_partial_stable_model(&p, &m)
            .map_err(|e| e.to_string())?;
        let founded = minimal_total_model(&gl_reduct(&p, &m), m.true_set());
        let undefined = m.undefined_set();
        let maximal = is_unfounded_set(&p, &m, m.false_set())
            && subsets(&undefined).iter().all(|s| {
                s.is_empty()
                    || !is_unfounded_set(&p, &m, &m.false_set().union(s).cloned().collect())
            });
        let by_unfounded = oracle
            .is_partial_stable_by_unfounded(&p, &m)
            .map_err(|e| e.to_string())?;
        if psm != (founded && maximal) || psm != by_unfounded {
            return fail(
                "partial stability characterization fails",
                &p,
                (m, psm, founded, maximal),
            );
        }
    }
    Ok(())
}

pub fn check_remove_unfounded(seed: u64) -> Check {
    let p = positive_program(seed);
    let mut r = rng(seed ^ 0x1e44);
    let mut ms: Vec<PartialInterpretation> =
        (0..20).map(|_| random_partial(&mut r, p.base())).collect();
    ms.extend(
        subsets(p.base())
            .iter()
            .take(16)
            .map(|t| PartialInterpretation::total(p.base(), t)),
    );
    for m in ms.into_iter().filter(|m| is_partial_model(m, &p)) {
        for u in subsets(p.base()) {
            if !is_unfounded_set(&p, &m, &u) || !(m.is_total() || u.is_disjoint(m.true_set())) {
                continue;
            }
            let reduced = remove_unfounded(&p, &m, &u).map_err(|e| e.to_string())?;
            if !is_partial_model(&reduced, &p) {
                return fail("removing an unfounded set broke the model", &p, (m, u));
            }
        }
    }
    Ok(())
}

pub fn check_total_psm_are_stable(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let oracle = Oracle::default();
    let stable = oracle
        .enumerate_stable_models(&p)
        .map_err(|e| e.to_string())?;
    let total: BTreeSet<Model> = oracle
        .enumerate_partial_stable_models(&p)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(PartialInterpretation::is_total)
        .map(|m| m.true_set().clone())
        .collect();
    if stable != total {
        return fail(
            "total partial stable models differ from stable models",
            &p,
            (stable, total),
        );
    }
    Ok(())
}

// The potential-atom translation.

fn translation(p: &Program) -> Result<Program, String> {
    unfold_partiality(p).map_err(|e| e.to_string())
}

pub fn check_translated_stability(seed: u64) -> Check {
    let p = disjunctive_program(seed, 5, 8);
    let tr = translation(&p)?;
    let oracle = Oracle::default();
    let mut r = rng(seed ^ 0x7a4);
    let mut ms: Vec<PartialInterpretation> = oracle
        .enumerate_partial_stable_models(&p)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    ms.extend((0..30).map(|_| random_partial(&mut r, p.base())));
    for m in ms {
        let n = PartialInterpretation::total(tr.base(), &expand_psm(&m));
        let left = oracle
            .is_partial_stable_model(&p, &m)
            .map_err(|e| e.to_string())?;
        let right = oracle.is_stable_model(&tr, &n).map_err(|e| e.to_string())?;
        if left != right {
            return fail(
                "partial stability is not stability of the translation",
                &p,
                (m, left, right),
            );
        }
    }
    Ok(())
}

/// Oracle partial stable models against the solver's stable models of the
/// translation, and the two maps between them.
pub fn check_bijection(seed: u64, with_oracle_on_translation: bool) -> Check {
    let p = disjunctive_program(seed, 5, 8);
    let tr = translation(&p)?;
    let oracle = Oracle::default();
    let psm = oracle
        .enumerate_partial_stable_models(&p)
        .map_err(|e| e.to_string())?;
    let sm = solve_program(&tr, enumerate(Mode::Gnt2))
        .map_err(|e| e.to_string())?
        .models;
    if with_oracle_on_translation {
        let brute = oracle
            .enumerate_stable_models(&tr)
            .map_err(|e| e.to_string())?;
        if brute != sm {
            return fail(
                "solver and oracle differ on the translation",
                &p,
                (sm, brute),
            );
        }
    }
    if psm.len() != sm.len() {
        return fail("model counts differ", &p, (psm.len(), sm.len()));
    }
    for m in &psm {
        let n = expand_psm(m);
        if !sm.contains(&n) || project_sm(&n, p.base()).as_ref() != Ok(m) {
            return fail("expansion is not inverted by projection", &p, m);
        }
    }
    for n in &sm {
        let m = project_sm(n, p.base()).map_err(|e| e.to_string())?;
        if expand_psm(&m) != *n || !psm.contains(&m) {
            return fail("projection is not inverted by expansion", &p, n);
        }
    }
    Ok(())
}

pub fn check_translation_models(seed: u64) -> Check {
    let p = constrained_program(seed, 5, 8);
    let tr = translation(&p)?;
    for m in all_partials(p.base()) {
        let n = PartialInterpretation::total(tr.base(), &expand_psm(&m));
        if is_partial_model(&m, &p) != is_total_model(&n, &tr) {
            return fail(
                "partial model of P is not a total model of the translation",
                &p,
                m,
            );
        }
    }
    Ok(())
}

fn unmarked_of(x: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    x.iter().filter_map(Atom::unmark_potential).collect()
}

pub fn check_unfounded_projection(seed: u64) -> Check {
    let p = disjunctive_program(seed, 5, 6);
    let tr = translation(&p)?;
    let mut r = rng(seed ^ 0x2e2);
    for _ in 0..3 {
        let m = random_partial(&mut r, p.base());
        let n = PartialInterpretation::total(tr.base(), &expand_psm(&m));
        for x in subsets(tr.base()) {
            if !is_unfounded_set(&tr, &n, &x) {
                continue;
            }
            let y = unmarked_of(&x);
            if !is_unfounded_set(&p, &m, &y) {
                return fail(
                    "unmarked part of a translation unfounded set is not unfounded",
                    &p,
                    (m, x),
                );
            }
            if x.is_disjoint(n.true_set()) && !y.is_disjoint(m.true_set()) {
                return fail("consistency is not preserved", &p, (m, x));
            }
        }
    }
    Ok(())
}

pub fn check_unfounded_lift(seed: u64) -> Check {
    let p = disjunctive_program(seed, 5, 6);
    let tr = translation(&p)?;
    let mut r = rng(seed ^ 0x3e3);
    let ms: Vec<PartialInterpretation> =
        (0..20).map(|_| random_partial(&mut r, p.base())).collect();
    for m in ms.iter().filter(|m| is_partial_model(m, &p)) {
        let n = PartialInterpretation::total(tr.base(), &expand_psm(m));
        let undefined: BTreeSet<Atom> = m.undefined_set();
        for x in subsets(p.base()) {
            if !x.is_disjoint(m.true_set()) || !is_unfounded_set(&p, m, &x) {
                continue;
            }
            for extra in subsets(&undefined) {
                let y: BTreeSet<Atom> = x
                    .iter()
                    .flat_map(|a| [a.clone(), a.potential()])
                    .chain(extra)
                    .collect();
                if !is_unfounded_set(&tr, &n, &y) {
                    return fail(
                        "lifted unfounded set is not unfounded for the translation",
                        &p,
                        (m, y),
                    );
                }
            }
        }
    }
    Ok(())
}

pub fn check_translation_size(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 10);
    let tr = translation(&p)?;
    if tr.len() != 2 * p.len() + p.base().len() {
        return fail("translation size", &p, tr.len());
    }
    Ok(())
}

// Generate and test.

fn solver_models(p: &Program) -> Result<BTreeSet<Model>, String> {
    stable_models(p, SolverConfig::default()).map_err(|e| e.to_string())
}

pub fn check_gen_completeness(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let sms = Oracle::default()
        .enumerate_stable_models(&p)
        .map_err(|e| e.to_string())?;
    let candidates: BTreeSet<Model> = solver_models(&gen_program(&p).map_err(|e| e.to_string())?)?
        .into_iter()
        .map(|n| n.intersection(p.base()).cloned().collect())
        .collect();
    match sms.iter().find(|m| !candidates.contains(*m)) {
        Some(m) => fail("a stable model has no generator model", &p, m),
        None => Ok(()),
    }
}

pub fn check_min_test(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let oracle = Oracle::default();
    for m in subsets(p.base()) {
        let total = PartialInterpretation::total(p.base(), &m);
        if !is_total_model(&total, &p) {
            continue;
        }
        let stable = oracle
            .is_stable_model(&p, &total)
            .map_err(|e| e.to_string())?;
        let test = test_program(&p, &m).map_err(|e| e.to_string())?;
        let none = solver_models(&test)?.is_empty();
        if stable != none {
            return fail("tester disagrees with the oracle", &p, (m, stable));
        }
    }
    Ok(())
}

/// Refutation by the tester, for `m` satisfying the normal rules of `P^m`
/// whose bodies it contains. `literal` drops that precondition.
fn early_test_property(seed: u64, literal: bool) -> Check {
    let p = constrained_program(seed, 6, 8);
    let sms = Oracle::default()
        .enumerate_stable_models(&p)
        .map_err(|e| e.to_string())?;
    for m in subsets(p.base()) {
        if !literal && !early_test_applies(&p, &m) {
            continue;
        }
        let test = test_program(&p, &m).map_err(|e| e.to_string())?;
        if !solver_models(&test)?.is_empty() && sms.iter().any(|s| m.is_subset(s)) {
            return fail("a model extends a refuted interpretation", &p, m);
        }
    }
    Ok(())
}

pub fn check_early_test(seed: u64) -> Check {
    early_test_property(seed, false)
}

pub fn check_early_test_literal(seed: u64) -> Check {
    early_test_property(seed, true)
}

/// Stable iff unfounded-free over every total `N` rather
/// than the models of `P` only.
pub fn check_unfounded_free_any_total(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let oracle = Oracle::default();
    for t in subsets(p.base()) {
        let n = PartialInterpretation::total(p.base(), &t);
        let stable = oracle.is_stable_model(&p, &n).map_err(|e| e.to_string())?;
        if stable != test_side_unfounded_free(&p, &n) {
            return fail("unfounded-free but not stable", &p, t);
        }
    }
    Ok(())
}

/// The reduct as clauses, `¬a` off `m`, and `¬m`, by truth table.
fn min_test_clauses_unsat(p: &Program, m: &Model) -> bool {
    let total = PartialInterpretation::total(p.base(), m);
    let mut clauses: Vec<Clause> = gl_reduct(p, &total)
        .rules()
        .iter()
        .map(|r| Clause {
            pos: r.head.clone(),
            neg: r.pos.clone(),
        })
        .collect();
    clauses.extend(p.base().difference(m).map(|a| Clause {
        pos: BTreeSet::new(),
        neg: BTreeSet::from([a.clone()]),
    }));
    clauses.push(Clause {
        pos: BTreeSet::new(),
        neg: m.clone(),
    });
    !subsets(p.base())
        .iter()
        .any(|s| clauses.iter().all(|c| c.satisfied_by(s)))
}

pub fn check_min_test_clauses(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    for m in subsets(p.base()) {
        if !is_total_model(&PartialInterpretation::total(p.base(), &m), &p) {
            continue;
        }
        let test = test_program(&p, &m).map_err(|e| e.to_string())?;
        if solver_models(&test)?.is_empty() != min_test_clauses_unsat(&p, &m) {
            return fail("tester disagrees with the clause set", &p, m);
        }
    }
    Ok(())
}

pub fn check_candidate_soundness(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    for g in [gen_basic(&p), gen_program(&p)] {
        for n in solver_models(&g.map_err(|e| e.to_string())?)? {
            let m: Model = n.intersection(p.base()).cloned().collect();
            if !is_total_model(&PartialInterpretation::total(p.base(), &m), &p) {
                return fail("a candidate is not a model", &p, m);
            }
        }
    }
    Ok(())
}

// Solver engine.

pub fn check_solver_oracle(seed: u64) -> Check {
    let p = normal_program(seed);
    let expected = Oracle::default()
        .enumerate_stable_models(&p)
        .map_err(|e| e.to_string())?;
    for lookahead in [false, true] {
        let got = stable_models(&p, SolverConfig { lookahead }).map_err(|e| e.to_string())?;
        if got != expected {
            return fail(
                "solver enumeration differs from the oracle",
                &p,
                (lookahead, got, expected),
            );
        }
    }
    Ok(())
}

fn extends(s: &Model, a: &PartialInterpretation) -> bool {
    a.true_set().is_subset(s) && a.false_set().is_disjoint(s)
}

pub fn check_expand_sound(seed: u64) -> Check {
    let p = normal_program(seed);
    let sms = Oracle::default()
        .enumerate_stable_models(&p)
        .map_err(|e| e.to_string())?;
    let mut r = rng(seed ^ 0xe4a);
    let mut assumptions = vec![PartialInterpretation::default()];
    for _ in 0..4 {
        let (mut t, mut f) = (BTreeSet::new(), BTreeSet::new());
        for a in p.base() {
            match r.gen_range(0..6) {
                0 => t.insert(a.clone()),
                1 => f.insert(a.clone()),
                _ => false,
            };
        }
        assumptions.push(PartialInterpretation::new(p.base().clone(), t, f).unwrap());
    }
    for a in assumptions {
        let matching: Vec<&Model> = sms.iter().filter(|s| extends(s, &a)).collect();
        match expand(&p, &a).map_err(|e| e.to_string())? {
            Expansion::Conflict => {
                if !matching.is_empty() {
                    return fail(
                        "conflict reported although a model extends the assumptions",
                        &p,
                        a,
                    );
                }
            }
            Expansion::Consistent(b) => {
                if !a.true_set().is_subset(b.true_set()) || !a.false_set().is_subset(b.false_set())
                {
                    return fail("expansion dropped an assumption", &p, (a, b));
                }
                if let Some(s) = matching.iter().find(|s| !extends(s, &b)) {
                    return fail("expansion contradicts a stable model", &p, (a, b, s));
                }
            }
        }
    }
    Ok(())
}

// Generate-and-test driver.

pub fn check_modes_agree(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    let expected = solve_disjunctive(&p, enumerate(Mode::Brute))
        .map_err(|e| e.to_string())?
        .models;
    for mode in [Mode::Gnt1, Mode::Gnt2, Mode::Naive] {
        let got = solve_disjunctive(&p, enumerate(mode))
            .map_err(|e| e.to_string())?
            .models;
        if got != expected {
            return fail("mode differs from brute force", &p, (mode, got, expected));
        }
    }
    Ok(())
}

pub fn check_early_test_safety(seed: u64) -> Check {
    let p = constrained_program(seed, 6, 8);
    for mode in [Mode::Gnt1, Mode::Gnt2, Mode::Naive] {
        let mut sets = Vec::new();
        for early_test in [EarlyTest::Off, EarlyTest::Once, EarlyTest::Repeat] {
            for lookahead in [false, true] {
                let config = GntConfig {
                    early_test,
                    lookahead,
                    ..enumerate(mode)
                };
                let s = solve_disjunctive(&p, config).map_err(|e| e.to_string())?;
                if s.stats.early_tests > 0 && s.stats.candidates_covered == 0 {
                    return fail(
                        "early test before any covered candidate",
                        &p,
                        (mode, s.stats),
                    );
                }
                if early_test == EarlyTest::Off && s.stats.early_tests > 0 {
                    return fail("early test ran while disabled", &p, (mode, s.stats));
                }
                sets.push(s.models);
            }
        }
        if sets.windows(2).any(|w| w[0] != w[1]) {
            return fail("early-test policy changed the models", &p, (mode, sets));
        }
    }
    Ok(())
}

// QBF and 3-SAT benchmarks.

/// `|X| = |Y| ≤ 5`, alternating the two schemes.
pub fn small_qbf_params(seed: u64) -> BenchParams {
    let (scheme, size) = if seed.is_multiple_of(2) {
        (Scheme::Gw, [6, 8, 10][(seed / 2 % 3) as usize])
    } else {
        (Scheme::Sqrt, [4, 6, 8, 10][(seed / 2 % 4) as usize])
    };
    BenchParams {
        size,
        scheme,
        seed,
        ..BenchParams::default()
    }
}

/// Up to five variables per block and up to twelve terms of one to three
/// literals, so that valid and invalid formulas both occur.
pub fn mixed_qbf(seed: u64) -> Qbf2E {
    let mut r = rng(seed ^ 0x0bf);
    let nx = r.gen_range(1..=5);
    let ny = r.gen_range(1..=5);
    let vars: Vec<Atom> = (1..=nx)
        .map(|i| Atom::plain(&format!("x{i}")).unwrap())
        .chain((1..=ny).map(|i| Atom::plain(&format!("y{i}")).unwrap()))
        .collect();
    let terms = (0..r.gen_range(1..=12))
        .map(|_| {
            let width = r.gen_range(1..=3.min(nx + ny));
            sample(&mut r, nx + ny, width)
                .into_iter()
                .map(|i| Literal {
                    atom: vars[i].clone(),
                    positive: r.gen_bool(0.5),
                })
                .collect()
        })
        .collect();
    Qbf2E {
        x_vars: vars[..nx].iter().cloned().collect(),
        y_vars: vars[nx..].iter().cloned().collect(),
        terms,
    }
}

/// Naive search and brute force only run on translations small enough
/// for them.
pub const NAIVE_ATOMS: usize = 16;
pub const BRUTE_ATOMS: usize = 12;

/// Validity of `q` against model existence of its translation, per mode.
pub fn check_qbf_instance(q: &Qbf2E) -> Result<bool, String> {
    let p = qbf_to_program(q);
    let valid = qbf_valid_oracle(q, DEFAULT_QBF_CAP).map_err(|e| e.to_string())?;
    let mut modes = vec![Mode::Gnt1, Mode::Gnt2];
    if p.base().len() <= NAIVE_ATOMS {
        modes.push(Mode::Naive);
    }
    if p.base().len() <= BRUTE_ATOMS {
        modes.push(Mode::Brute);
    }
    for mode in modes {
        let config = GntConfig {
            mode,
            ..GntConfig::default()
        };
        let found = !solve_program(&p, config)
            .map_err(|e| e.to_string())?
            .models
            .is_empty();
        if found != valid {
            fail(
                "translation disagrees with validity",
                &p,
                (mode, q.to_string(), valid),
            )?;
        }
    }
    Ok(valid)
}

pub fn check_qbf(seed: u64) -> Check {
    let q = gen_random_qbf(&small_qbf_params(seed)).map_err(|e| e.to_string())?;
    check_qbf_instance(&q).map(|_| ())
}

pub fn check_mixed_qbf(seed: u64) -> Check {
    check_qbf_instance(&mixed_qbf(seed)).map(|_| ())
}

/// Structure of the reduct under interpretations meeting conditions
/// (i)-(ii): exact membership conditions, and the forward implications.
pub fn check_qbf_reduct_structure(seed: u64) -> Check {
    let q = gen_random_qbf(&small_qbf_params(seed)).map_err(|e| e.to_string())?;
    let p = qbf_to_program(&q);
    let mut r = rng(seed ^ 0x8e7);
    let f = Atom::falsum();
    let u = Atom::saturation();
    let mut m: Model = BTreeSet::new();
    for v in q.x_vars.iter().chain(&q.y_vars).chain([&f, &u]) {
        if r.gen_bool(0.5) {
            m.insert(v.clone());
        }
    }
    let clauses = negate_dnf(&q);
    for (i, c) in clauses.iter().enumerate() {
        let satisfied = c.x_pos.is_disjoint(&m) && c.x_neg.is_subset(&m);
        m.insert(if satisfied {
            Atom::clause(i + 1)
        } else {
            Atom::clause_complement(i + 1)
        });
    }
    let n = PartialInterpretation::total(p.base(), &m.intersection(p.base()).cloned().collect());
    let has = |rules: &[Rule], head: &[Atom], pos: &BTreeSet<Atom>| {
        let program = Program::with_base(rules.to_vec(), p.base().iter().cloned());
        let want = Rule::new(head.iter().cloned(), pos.iter().cloned(), []);
        gl_reduct(&program, &n).rules().contains(&want)
    };
    let fin = m.contains(&f);
    for (i, c) in clauses.iter().enumerate() {
        let rules = translate_clause(i + 1, c);
        let (cl, ncl) = (Atom::clause(i + 1), Atom::clause_complement(i + 1));
        let cin = m.contains(&cl);
        let empty = BTreeSet::new();
        let mut bad = Vec::new();
        if has(&rules.choice, std::slice::from_ref(&cl), &empty) != cin {
            bad.push("R1");
        }
        if has(&rules.choice, std::slice::from_ref(&ncl), &empty) != m.contains(&ncl) {
            bad.push("R2");
        }
        for x in &c.x_pos {
            let kept = has(
                &rules.explain,
                std::slice::from_ref(&f),
                &BTreeSet::from([x.clone()]),
            );
            if kept != (cin && !fin) || (kept && (m.contains(x) || fin)) {
                bad.push("R3");
            }
        }
        for x in &c.x_neg {
            let kept = has(&rules.explain, std::slice::from_ref(x), &empty);
            if kept != cin || (kept && !m.contains(x)) {
                bad.push("R4");
            }
        }
        let kept = has(&rules.explain, std::slice::from_ref(&f), &c.x_neg);
        let x2_in = c.x_neg.is_subset(&m);
        if kept != (c.x_pos.is_disjoint(&m) && !x2_in && !fin) || (kept && (x2_in || fin)) {
            bad.push("R5");
        }
        for y in c.y_pos.union(&c.y_neg) {
            if !has(
                &rules.unsat,
                std::slice::from_ref(y),
                &BTreeSet::from([u.clone()]),
            ) {
                bad.push("R6");
            }
        }
        let head: Vec<Atom> = c.y_pos.iter().cloned().chain([u.clone()]).collect();
        if has(&rules.unsat, &head, &c.y_neg) != cin {
            bad.push("R7");
        }
        if !bad.is_empty() {
            return fail("reduct structure", &p, (i + 1, bad, m));
        }
    }
    Ok(())
}

pub fn check_qbf_size(seed: u64) -> Check {
    let q = gen_random_qbf(&small_qbf_params(seed)).map_err(|e| e.to_string())?;
    let p = qbf_to_program(&q);
    let occurring: BTreeSet<Atom> = q.terms.iter().flatten().map(|l| l.atom.clone()).collect();
    let silent = q
        .x_vars
        .iter()
        .chain(&q.y_vars)
        .filter(|v| !occurring.contains(*v));
    if p.base().len() > occurring.len() + 2 * q.terms.len() + 2 {
        return fail("translation has too many atoms", &p, p.base().len());
    }
    if let Some(v) = silent.into_iter().find(|v| p.base().contains(*v)) {
        return fail("an absent variable contributes rules", &p, v);
    }
    Ok(())
}

/// 3-SAT at `ratio` with up to two extra specified atoms, since
/// `⌊2n/100⌋` is zero at this size.
pub fn check_d3sat(seed: u64, ratio: f64) -> Check {
    let mut r = rng(seed ^ 0xd35);
    let n = r.gen_range(3..=12);
    let mut inst = gen_random_d3sat_instance(n, ratio, seed).map_err(|e| e.to_string())?;
    let k = r.gen_range(0..=2);
    inst.specified = sample(&mut r, n, k)
        .into_iter()
        .map(|i| inst.atoms[i].clone())
        .collect();
    let p = inst.program();
    let has_model = !solve_program(&p, GntConfig::default())
        .map_err(|e| e.to_string())?
        .models
        .is_empty();
    let specified: BTreeSet<Atom> = inst.specified.iter().cloned().collect();
    let minimal = Oracle::default()
        .minimal_models_containing(&inst.clauses, &specified)
        .map_err(|e| e.to_string())?;
    if has_model != minimal {
        return fail(
            "encoding disagrees with minimal models",
            &p,
            (has_model, minimal),
        );
    }
    Ok(())
}

/// Runs `check` on `count` consecutive seeds; the first failure wins.
pub fn run_suite(count: u64, check: impl Fn(u64) -> Check) -> Result<u64, (u64, String)> {
    for seed in 0..count {
        check(seed).map_err(|e| (seed, e))?;
    }
    Ok(count)
}
