//! Ground atoms and literals.
//!
//! An [`Atom`] is identified by its rendered name. Atoms introduced by the
//! program transformations carry a reserved prefix wrapped around the name of
//! the atom they are derived from, so `p__a` is the potential copy of `a` and
//! `c__p__a` the complement of `p__a`. User input may never use these
//! prefixes, which keeps every generated atom fresh.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

const POTENTIAL: &str = "p__";
const COMPLEMENT: &str = "c__";
const SUPPORT: &str = "s__";
const CLAUSE: &str = "cl__";
const CLAUSE_COMPLEMENT: &str = "ncl__";
const FALSUM: &str = "__f";
const SATURATION: &str = "__u";

/// What kind of marker, if any, an atom carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    Plain,
    /// `p__a`: the atom is potentially true.
    Potential,
    /// `c__a`: the complement of `a` in a generator.
    Complement,
    /// `s__a`: `a` has a supporting rule.
    Support,
    /// `__f`, `__u`, and the per-clause atoms `cl__i` / `ncl__i`.
    Reserved,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("`{0}` is not a valid atom name")]
    Invalid(String),
    #[error("atom `{0}` uses a reserved prefix")]
    Reserved(String),
}

/// A ground atom, ordered lexicographically by its rendered name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z')) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn has_reserved_prefix(name: &str) -> bool {
    [POTENTIAL, COMPLEMENT, SUPPORT, CLAUSE, CLAUSE_COMPLEMENT]
        .iter()
        .any(|p| name.starts_with(p))
}

fn is_clause_index(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

impl Atom {
    fn raw(name: String) -> Atom {
        Atom(Arc::from(name))
    }

    /// A user-level atom: `[a-z][A-Za-z0-9_]*` without a reserved prefix.
    pub fn plain(name: &str) -> Result<Atom, AtomError> {
        if !is_identifier(name) {
            return Err(AtomError::Invalid(name.to_string()));
        }
        if has_reserved_prefix(name) {
            return Err(AtomError::Reserved(name.to_string()));
        }
        Ok(Atom::raw(name.to_string()))
    }

    /// Accepts any rendering this crate can produce, marked atoms included.
    pub fn from_rendered(name: &str) -> Result<Atom, AtomError> {
        fn valid(name: &str) -> bool {
            if name == FALSUM || name == SATURATION {
                return true;
            }
            if let Some(rest) = name.strip_prefix(FALSUM) {
                return is_clause_index(rest);
            }
            if let Some(rest) = name.strip_prefix(CLAUSE_COMPLEMENT) {
                return is_clause_index(rest);
            }
            if let Some(rest) = name.strip_prefix(CLAUSE) {
                return is_clause_index(rest);
            }
            for prefix in [POTENTIAL, COMPLEMENT, SUPPORT] {
                if let Some(rest) = name.strip_prefix(prefix) {
                    return valid(rest);
                }
            }
            is_identifier(name)
        }
        if valid(name) {
            Ok(Atom::raw(name.to_string()))
        } else {
            Err(AtomError::Invalid(name.to_string()))
        }
    }

    /// The reserved atom `__f` used by integrity constraints.
    pub fn falsum() -> Atom {
        Atom::raw(FALSUM.to_string())
    }

    /// `__fK`, an integrity atom distinct from `__f`, for programs in
    /// which `__f` is derivable by ordinary rules.
    pub fn falsum_variant(k: usize) -> Atom {
        Atom::raw(format!("{FALSUM}{k}"))
    }

    /// The reserved atom `__u` of the QBF translation.
    pub fn saturation() -> Atom {
        Atom::raw(SATURATION.to_string())
    }

    /// `cl__i`, the atom recording that clause `i` is active.
    pub fn clause(index: usize) -> Atom {
        Atom::raw(format!("{CLAUSE}{index}"))
    }

    /// `ncl__i`, the complement of [`Atom::clause`].
    pub fn clause_complement(index: usize) -> Atom {
        Atom::raw(format!("{CLAUSE_COMPLEMENT}{index}"))
    }

    pub fn potential(&self) -> Atom {
        Atom::raw(format!("{POTENTIAL}{}", self.0))
    }

    pub fn complement(&self) -> Atom {
        Atom::raw(format!("{COMPLEMENT}{}", self.0))
    }

    pub fn support(&self) -> Atom {
        Atom::raw(format!("{SUPPORT}{}", self.0))
    }

    /// Inverse of [`Atom::potential`].
    pub fn unmark_potential(&self) -> Option<Atom> {
        self.0
            .strip_prefix(POTENTIAL)
            .map(|rest| Atom::raw(rest.to_string()))
    }

    pub fn kind(&self) -> AtomKind {
        let name = &*self.0;
        if name.starts_with(POTENTIAL) {
            AtomKind::Potential
        } else if name.starts_with(COMPLEMENT) {
            AtomKind::Complement
        } else if name.starts_with(SUPPORT) {
            AtomKind::Support
        } else if name.starts_with("__")
            || name.starts_with(CLAUSE)
            || name.starts_with(CLAUSE_COMPLEMENT)
        {
            AtomKind::Reserved
        } else {
            AtomKind::Plain
        }
    }

    pub fn is_falsum(&self) -> bool {
        &*self.0 == FALSUM
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An atom or its default negation `not atom`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            atom,
            positive: false,
        }
    }

    pub fn negate(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "not {}", self.atom)
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
