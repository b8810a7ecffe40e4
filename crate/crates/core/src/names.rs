//! Interned surface names and the variable representation shared by every
//! calculus in the crate.
//!
//! Bound variables are de Bruijn indices. Free variables are interned
//! symbols and behave as constants. Binders keep the name they were written
//! with as a [`Hint`] that only matters for rendering.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{OnceLock, RwLock};

/// An interned name. Equality and hashing are by identity; ordering is by
/// the underlying string so that canonical orders do not depend on the
/// order in which names were first seen.
#[derive(Copy, Clone)]
pub struct Sym(&'static str);

fn table() -> &'static RwLock<HashMap<&'static str, Sym>> {
    static TABLE: OnceLock<RwLock<HashMap<&'static str, Sym>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl Sym {
    pub fn intern(name: &str) -> Sym {
        if let Some(sym) = table().read().expect("name table poisoned").get(name) {
            return *sym;
        }
        let mut guard = table().write().expect("name table poisoned");
        if let Some(sym) = guard.get(name) {
            return *sym;
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let sym = Sym(leaked);
        guard.insert(leaked, sym);
        sym
    }

    pub fn as_str(self) -> &'static str {
        self.0
    }
}

impl PartialEq for Sym {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}

impl Eq for Sym {}

impl Hash for Sym {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0.as_ptr() as usize).hash(state);
    }
}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A variable occurrence: a de Bruijn index counting enclosing binders, or
/// a free name.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    Bound(u32),
    Free(Sym),
}

impl Var {
    pub fn free(name: &str) -> Var {
        Var::Free(Sym::intern(name))
    }

    /// Adds `by` to bound indices at or above `cutoff`.
    #[inline]
    pub fn shifted(self, by: u32, cutoff: u32) -> Var {
        match self {
            Var::Bound(k) if k >= cutoff => Var::Bound(k + by),
            v => v,
        }
    }

    /// Inverse of [`Var::shifted`]. Returns `None` when a bound index in
    /// `cutoff..cutoff + by` would escape.
    #[inline]
    pub fn unshifted(self, by: u32, cutoff: u32) -> Option<Var> {
        match self {
            Var::Bound(k) if k >= cutoff + by => Some(Var::Bound(k - by)),
            Var::Bound(k) if k >= cutoff => None,
            v => Some(v),
        }
    }
}

/// The name a binder was written with. Invisible to equality, ordering and
/// hashing, so that α-equivalent terms compare equal.
#[derive(Copy, Clone)]
pub struct Hint(pub Sym);

impl Hint {
    pub fn new(name: &str) -> Hint {
        Hint(Sym::intern(name))
    }

    pub fn sym(self) -> Sym {
        self.0
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Picks printable binder names. A binder keeps its hint unless that would
/// capture a free name used in its body or shadow an enclosing binder that
/// the body still refers to; in that case primes are appended.
#[derive(Default)]
pub(crate) struct Namer {
    scope: Vec<Sym>,
}

impl Namer {
    pub(crate) fn new() -> Self {
        Namer::default()
    }

    /// `taken` is every name visible inside the body: free names and the
    /// printed names of enclosing binders referenced from the body.
    pub(crate) fn push(&mut self, hint: Hint, taken: &[Sym]) -> Sym {
        let mut candidate = hint.sym();
        while taken.contains(&candidate) {
            candidate = Sym::intern(&format!("{}'", candidate.as_str()));
        }
        self.scope.push(candidate);
        candidate
    }

    pub(crate) fn pop(&mut self) {
        self.scope.pop();
    }

    /// Printed name of a bound index, if it is in scope.
    pub(crate) fn lookup(&self, index: u32) -> Option<Sym> {
        let len = self.scope.len();
        (index as usize).lt(&len).then(|| self.scope[len - 1 - index as usize])
    }

    pub(crate) fn depth(&self) -> u32 {
        self.scope.len() as u32
    }
}
