//! Brute-force reference semantics.
//!
//! Every query here is answered by exhaustive enumeration over bitmask
//! encodings of interpretations, so the atom count is capped. These are the
//! definitions themselves, used as ground truth for the transformations and
//! the search engine.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::atom::Atom;
use crate::program::{Model, Program};
use crate::semantics::{Clause, PartialInterpretation};

pub const DEFAULT_CAP: usize = 12;
/// Masks are `u64` and enumeration is at least `2^n`.
pub const MAX_CAP: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{atoms} atoms exceed the enumeration cap of {cap}")]
    CapExceeded { atoms: usize, cap: usize },
    #[error("interpretation is not total")]
    NotTotal,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

/// Which ordering decides maximality among partial stable models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// `T1 ⊆ T2` and `F1 ⊇ F2`.
    Truth,
    /// `T1 ⊆ T2` and `F1 ⊆ F2`.
    Knowledge,
}

#[derive(Clone, Copy, Debug)]
struct MaskRule {
    head: u64,
    pos: u64,
    neg: u64,
}

/// A program over atom indices `0..n`, with atoms in lexicographic order.
struct Indexed {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
    rules: Vec<MaskRule>,
}

impl Indexed {
    fn new<'a>(p: &Program, extra: impl IntoIterator<Item = &'a Atom>) -> Indexed {
        let mut all: BTreeSet<Atom> = p.base().clone();
        all.extend(extra.into_iter().cloned());
        let atoms: Vec<Atom> = all.into_iter().collect();
        let index: BTreeMap<Atom, usize> = atoms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let mut ix = Indexed {
            atoms,
            index,
            rules: Vec::new(),
        };
        ix.rules = p
            .rules()
            .iter()
            .map(|r| MaskRule {
                head: ix.mask(&r.head),
                pos: ix.mask(&r.pos),
                neg: ix.mask(&r.neg),
            })
            .collect();
        ix
    }

    fn mask<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> u64 {
        atoms
            .into_iter()
            .filter_map(|a| self.index.get(a))
            .fold(0, |m, &i| m | (1 << i))
    }

    fn full(&self) -> u64 {
        if self.atoms.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    fn set(&self, mask: u64) -> BTreeSet<Atom> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }

    fn interp(&self, t: u64, f: u64) -> PartialInterpretation {
        let base = self.atoms.iter().cloned().collect();
        PartialInterpretation::new(base, self.set(t), self.set(f))
            .expect("disjoint masks over the index")
    }
}

/// Iterates every submask of `mask`, including `0` and `mask` itself.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            Some((current - 1) & mask)
        };
        Some(current)
    })
}

// Truth values as 0 = f, 1 = u, 2 = t.
fn body_tv(t: u64, f: u64, pos: u64, neg: u64) -> u8 {
    if pos & f != 0 || neg & t != 0 {
        0
    } else if pos & !t == 0 && neg & !f == 0 {
        2
    } else {
        1
    }
}

fn head_tv(t: u64, f: u64, head: u64) -> u8 {
    if head & t != 0 {
        2
    } else if head & !f == 0 {
        0
    } else {
        1
    }
}

fn neg_const(t: u64, f: u64, neg: u64) -> u8 {
    body_tv(t, f, 0, neg)
}

/// Does total `t` satisfy the GL-reduct of `rules` w.r.t. total `reduct_t`?
fn models_gl_reduct(rules: &[MaskRule], reduct_t: u64, t: u64) -> bool {
    rules
        .iter()
        .filter(|r| r.neg & reduct_t == 0)
        .all(|r| r.head & t != 0 || r.pos & !t != 0)
}

fn stable_mask(rules: &[MaskRule], t: u64) -> bool {
    models_gl_reduct(rules, t, t) && submasks(t).skip(1).all(|s| !models_gl_reduct(rules, t, s))
}

/// Is `(t', f')` a partial model of the three-valued reduct with constants `consts`?
fn models_tv_reduct(rules: &[MaskRule], consts: &[u8], t: u64, f: u64) -> bool {
    rules
        .iter()
        .zip(consts)
        .all(|(r, &c)| c == 0 || head_tv(t, f, r.head) >= body_tv(t, f, r.pos, 0).min(c))
}

fn partial_stable_mask(rules: &[MaskRule], full: u64, t: u64, f: u64) -> bool {
    let consts: Vec<u8> = rules.iter().map(|r| neg_const(t, f, r.neg)).collect();
    if !models_tv_reduct(rules, &consts, t, f) {
        return false;
    }
    let undef = full & !t & !f;
    // every M' < M: T' ⊆ T, F' = F ∪ S with S ⊆ (T − T') ∪ U
    for t2 in submasks(t) {
        for s in submasks((t & !t2) | undef) {
            if t2 == t && s == 0 {
                continue;
            }
            if models_tv_reduct(rules, &consts, t2, f | s) {
                return false;
            }
        }
    }
    true
}

fn unfounded_mask(rules: &[MaskRule], t: u64, f: u64, u: u64) -> bool {
    rules.iter().all(|r| {
        r.head & u == 0
            || r.pos & f != 0
            || r.neg & t != 0
            || r.pos & u != 0
            || r.head & !u & !f != 0
    })
}

/// Exhaustive semantics with an explicit atom cap.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Oracle {
        assert!(cap <= MAX_CAP, "oracle cap {cap} above {MAX_CAP}");
        Oracle { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn index<'a>(
        &self,
        p: &Program,
        extra: impl IntoIterator<Item = &'a Atom>,
    ) -> Result<Indexed, OracleError> {
        let ix = Indexed::new(p, extra);
        if ix.atoms.len() > self.cap {
            return Err(OracleError::CapExceeded {
                atoms: ix.atoms.len(),
                cap: self.cap,
            });
        }
        Ok(ix)
    }

    /// `n` is a minimal total model of its own GL-reduct.
    pub fn is_stable_model(
        &self,
        p: &Program,
        n: &PartialInterpretation,
    ) -> Result<bool, OracleError> {
        if !n.is_total() {
            return Err(OracleError::NotTotal);
        }
        let ix = self.index(p, n.base())?;
        Ok(stable_mask(&ix.rules, ix.mask(n.true_set())))
    }

    /// `m` is a minimal partial model (truth ordering) of its three-valued reduct.
    pub fn is_partial_stable_model(
        &self,
        p: &Program,
        m: &PartialInterpretation,
    ) -> Result<bool, OracleError> {
        let ix = self.index(p, m.base())?;
        let (t, f) = (ix.mask(m.true_set()), ix.mask(m.false_set()));
        // atoms outside m's base read as false
        let f = f | (ix.full() & !ix.mask(m.base()));
        Ok(partial_stable_mask(&ix.rules, ix.full(), t, f))
    }

    pub fn enumerate_stable_models(&self, p: &Program) -> Result<BTreeSet<Model>, OracleError> {
        let ix = self.index(p, [])?;
        Ok(submasks(ix.full())
            .filter(|&t| stable_mask(&ix.rules, t))
            .map(|t| ix.set(t))
            .collect())
    }

    pub fn enumerate_partial_stable_models(
        &self,
        p: &Program,
    ) -> Result<BTreeSet<PartialInterpretation>, OracleError> {
        let ix = self.index(p, [])?;
        let full = ix.full();
        let mut out = BTreeSet::new();
        for t in submasks(full) {
            for f in submasks(full & !t) {
                if partial_stable_mask(&ix.rules, full, t, f) {
                    out.insert(ix.interp(t, f));
                }
            }
        }
        Ok(out)
    }

    /// The union of all unfounded sets, if that union is itself unfounded.
    pub fn greatest_unfounded_set(
        &self,
        p: &Program,
        i: &PartialInterpretation,
    ) -> Result<Option<BTreeSet<Atom>>, OracleError> {
        let ix = self.index(p, i.base())?;
        let (t, f) = (ix.mask(i.true_set()), ix.mask(i.false_set()));
        let union = submasks(ix.full())
            .filter(|&u| unfounded_mask(&ix.rules, t, f, u))
            .fold(0, |acc, u| acc | u);
        Ok(unfounded_mask(&ix.rules, t, f, union).then(|| ix.set(union)))
    }

    /// No unfounded set meets the true atoms of the total interpretation `n`.
    pub fn is_unfounded_free(
        &self,
        p: &Program,
        n: &PartialInterpretation,
    ) -> Result<bool, OracleError> {
        if !n.is_total() {
            return Err(OracleError::NotTotal);
        }
        let ix = self.index(p, n.base())?;
        let (t, f) = (ix.mask(n.true_set()), ix.mask(n.false_set()));
        Ok(submasks(ix.full())
            .filter(|u| u & t != 0)
            .all(|u| !unfounded_mask(&ix.rules, t, f, u)))
    }

    /// `false_set(m)` is a ⊆-maximal `m`-consistent unfounded set.
    pub fn is_maximal_consistent_unfounded(
        &self,
        p: &Program,
        m: &PartialInterpretation,
    ) -> Result<bool, OracleError> {
        let ix = self.index(p, m.base())?;
        let (t, f) = (ix.mask(m.true_set()), ix.mask(m.false_set()));
        if !unfounded_mask(&ix.rules, t, f, f) {
            return Ok(false);
        }
        let free = ix.full() & !t & !f;
        Ok(submasks(free)
            .filter(|&s| s != 0)
            .all(|s| !unfounded_mask(&ix.rules, t, f, f | s)))
    }

    /// `true_set(m)`, read as a total interpretation, is a minimal total
    /// model of the GL-reduct of `p` w.r.t. `m`.
    pub fn is_founded(&self, p: &Program, m: &PartialInterpretation) -> Result<bool, OracleError> {
        let ix = self.index(p, m.base())?;
        let (t, f) = (ix.mask(m.true_set()), ix.mask(m.false_set()));
        // reduct keeps rules with C ⊆ F(m)
        let kept: Vec<MaskRule> = ix
            .rules
            .iter()
            .copied()
            .filter(|r| r.neg & !f == 0)
            .collect();
        let models = |s: u64| kept.iter().all(|r| r.head & s != 0 || r.pos & !s != 0);
        Ok(models(t) && submasks(t).skip(1).all(|s| !models(s)))
    }

    /// The unfounded-set characterization of partial stability: founded, and
    /// the false atoms form a maximal consistent unfounded set.
    pub fn is_partial_stable_by_unfounded(
        &self,
        p: &Program,
        m: &PartialInterpretation,
    ) -> Result<bool, OracleError> {
        Ok(self.is_founded(p, m)? && self.is_maximal_consistent_unfounded(p, m)?)
    }

    /// Does some ⊆-minimal model of `clauses` contain every `specified` atom?
    pub fn minimal_models_containing(
        &self,
        clauses: &[Clause],
        specified: &BTreeSet<Atom>,
    ) -> Result<bool, OracleError> {
        let mut atoms: BTreeSet<Atom> = specified.clone();
        atoms.extend(clauses.iter().flat_map(|c| c.atoms().cloned()));
        let ix = self.index(&Program::with_base([], atoms), [])?;
        let masks: Vec<(u64, u64)> = clauses
            .iter()
            .map(|c| (ix.mask(&c.pos), ix.mask(&c.neg)))
            .collect();
        let models = |m: u64| masks.iter().all(|&(p, n)| p & m != 0 || n & !m != 0);
        let want = ix.mask(specified);
        Ok(submasks(ix.full())
            .filter(|&m| m & want == want)
            .any(|m| models(m) && submasks(m).skip(1).all(|s| !models(s))))
    }
}

/// Removal of an unfounded set: `⟨T − U, F ∪ U⟩`, checked against its preconditions.
pub fn remove_unfounded(
    p: &Program,
    m: &PartialInterpretation,
    u: &BTreeSet<Atom>,
) -> Result<PartialInterpretation, OracleError> {
    use crate::semantics::{is_consistent_unfounded, is_partial_model, is_unfounded_set};
    if !p.is_positive() {
        return Err(OracleError::Precondition("program is not positive"));
    }
    if !is_partial_model(m, p) {
        return Err(OracleError::Precondition("not a partial model"));
    }
    if !u.is_subset(m.base()) || !is_unfounded_set(p, m, u) {
        return Err(OracleError::Precondition("not an unfounded set"));
    }
    if !m.is_total() && !is_consistent_unfounded(u, m) {
        return Err(OracleError::Precondition(
            "unfounded set is neither consistent nor applied to a total model",
        ));
    }
    let t = m.true_set().difference(u).cloned().collect();
    let f = m.false_set().union(u).cloned().collect();
    Ok(PartialInterpretation::new(m.base().clone(), t, f).expect("disjoint by construction"))
}

/// Keeps the interpretations not strictly below another one.
pub fn maximal_elements(
    models: &BTreeSet<PartialInterpretation>,
    ordering: Ordering,
) -> BTreeSet<PartialInterpretation> {
    let le = |a: &PartialInterpretation, b: &PartialInterpretation| match ordering {
        Ordering::Truth => a.truth_le(b),
        Ordering::Knowledge => a.knowledge_le(b),
    };
    models
        .iter()
        .filter(|m| !models.iter().any(|o| o != *m && le(m, o)))
        .cloned()
        .collect()
}
