//! Rigid resource terms: linear application to ordered lists of arguments,
//! with an absorbing `Zero`.
//!
//! Substitution is positional and length-checked. The i-th free occurrence
//! of the substituted variable, in left-to-right textual order, receives the
//! i-th element of the list; a length mismatch yields `Zero`.

mod reduce;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use crate::names::{Hint, Sym, Var};

pub use reduce::{head_step_monomial, left_parallel_monomial, RigidHeadDecomposition, RigidRelation};
pub use text::{parse_rigid, parse_rigid_monomial, render_rigid_monomial};

/// A rigid resource term. `Zero` only ever appears at the root: the smart
/// constructors collapse `λx.0`, `⟨0⟩d⃗` and `⟨c⟩(…,0,…)` to `Zero`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rigid {
    Zero,
    Var(Var),
    Lam(Hint, Box<Rigid>),
    App(Box<Rigid>, Vec<Rigid>),
}

/// An ordered list of rigid terms, none of them `Zero`. A monomial that
/// would contain `Zero` is represented by `None` wherever it can arise.
pub type RigidMonomial = Vec<Rigid>;

#[derive(Clone, Copy)]
enum Target {
    /// De Bruijn index relative to the root of the traversal; contracting a
    /// redex also lowers the indices of outer binders by one.
    Bound(u32),
    Free(Sym),
}

impl Rigid {
    pub fn var(name: &str) -> Rigid {
        Rigid::Var(Var::free(name))
    }

    pub fn lam_hint(h: Hint, body: Rigid) -> Rigid {
        match body {
            Rigid::Zero => Rigid::Zero,
            b => Rigid::Lam(h, Box::new(b)),
        }
    }

    /// `λname. body`, binding the free occurrences of `name`.
    pub fn lam(name: &str, body: Rigid) -> Rigid {
        let sym = Sym::intern(name);
        Rigid::lam_hint(Hint(sym), body.close_over(sym, 0))
    }

    /// `⟨f⟩args`, collapsing to `Zero` when any component is `Zero`.
    pub fn app(f: Rigid, args: RigidMonomial) -> Rigid {
        if f.is_zero() || args.iter().any(Rigid::is_zero) {
            Rigid::Zero
        } else {
            Rigid::App(Box::new(f), args)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rigid::Zero)
    }

    fn close_over(&self, x: Sym, depth: u32) -> Rigid {
        match self {
            Rigid::Zero => Rigid::Zero,
            Rigid::Var(Var::Free(y)) if *y == x => Rigid::Var(Var::Bound(depth)),
            Rigid::Var(v) => Rigid::Var(v.shifted(1, depth)),
            Rigid::Lam(h, b) => Rigid::Lam(*h, Box::new(b.close_over(x, depth + 1))),
            Rigid::App(f, ds) => {
                Rigid::App(Box::new(f.close_over(x, depth)), ds.iter().map(|d| d.close_over(x, depth)).collect())
            }
        }
    }

    /// Var = 1, Lam = 1 + body, App = 1 + function + arguments; Zero = 0.
    pub fn size(&self) -> usize {
        match self {
            Rigid::Zero => 0,
            Rigid::Var(_) => 1,
            Rigid::Lam(_, b) => 1 + b.size(),
            Rigid::App(f, ds) => 1 + f.size() + ds.iter().map(Rigid::size).sum::<usize>(),
        }
    }

    pub fn shift(&self, by: u32, cutoff: u32) -> Rigid {
        if by == 0 {
            return self.clone();
        }
        match self {
            Rigid::Zero => Rigid::Zero,
            Rigid::Var(v) => Rigid::Var(v.shifted(by, cutoff)),
            Rigid::Lam(h, b) => Rigid::Lam(*h, Box::new(b.shift(by, cutoff + 1))),
            Rigid::App(f, ds) => {
                Rigid::App(Box::new(f.shift(by, cutoff)), ds.iter().map(|d| d.shift(by, cutoff)).collect())
            }
        }
    }

    pub(crate) fn unshift(&self, by: u32, cutoff: u32) -> Option<Rigid> {
        Some(match self {
            Rigid::Zero => Rigid::Zero,
            Rigid::Var(v) => Rigid::Var(v.unshifted(by, cutoff)?),
            Rigid::Lam(h, b) => Rigid::Lam(*h, Box::new(b.unshift(by, cutoff + 1)?)),
            Rigid::App(f, ds) => Rigid::App(
                Box::new(f.unshift(by, cutoff)?),
                ds.iter().map(|d| d.unshift(by, cutoff)).collect::<Option<Vec<_>>>()?,
            ),
        })
    }

    fn count(&self, target: Target, depth: u32) -> usize {
        match self {
            Rigid::Zero => 0,
            Rigid::Var(v) => match (target, v) {
                (Target::Bound(i), Var::Bound(k)) => usize::from(*k == i + depth),
                (Target::Free(x), Var::Free(y)) => usize::from(x == *y),
                _ => 0,
            },
            Rigid::Lam(_, b) => b.count(target, depth + 1),
            Rigid::App(f, ds) => f.count(target, depth) + ds.iter().map(|d| d.count(target, depth)).sum::<usize>(),
        }
    }

    /// Number of free occurrences of the name `x`.
    pub fn occurrences(&self, x: Sym) -> usize {
        self.count(Target::Free(x), 0)
    }

    /// Number of occurrences of the bound index `index` (relative to the root).
    pub fn bound_occurrences(&self, index: u32) -> usize {
        self.count(Target::Bound(index), 0)
    }

    fn replace(&self, target: Target, depth: u32, res: &[Rigid], next: &mut usize) -> Rigid {
        match self {
            Rigid::Zero => Rigid::Zero,
            Rigid::Var(v) => match (target, *v) {
                (Target::Bound(i), Var::Bound(k)) if k == i + depth => {
                    let r = res[*next].shift(depth, 0);
                    *next += 1;
                    r
                }
                (Target::Bound(i), Var::Bound(k)) if k > i + depth => Rigid::Var(Var::Bound(k - 1)),
                (Target::Free(x), Var::Free(y)) if x == y => {
                    let r = res[*next].shift(depth, 0);
                    *next += 1;
                    r
                }
                (_, v) => Rigid::Var(v),
            },
            Rigid::Lam(h, b) => Rigid::lam_hint(*h, b.replace(target, depth + 1, res, next)),
            Rigid::App(f, ds) => {
                let f = f.replace(target, depth, res, next);
                let ds = ds.iter().map(|d| d.replace(target, depth, res, next)).collect();
                Rigid::app(f, ds)
            }
        }
    }

    fn subst(&self, target: Target, res: &[Rigid]) -> Rigid {
        if self.is_zero() || res.iter().any(Rigid::is_zero) || self.count(target, 0) != res.len() {
            return Rigid::Zero;
        }
        let mut next = 0;
        self.replace(target, 0, res, &mut next)
    }

    /// `self[res/x]`: positional substitution, `Zero` on a length mismatch.
    pub fn substitute(&self, x: Sym, res: &[Rigid]) -> Rigid {
        self.subst(Target::Free(x), res)
    }

    /// Contractum of `⟨λ.self⟩res`.
    pub fn instantiate(&self, res: &[Rigid]) -> Rigid {
        self.subst(Target::Bound(0), res)
    }

    pub fn mentions_bound(&self, index: u32) -> bool {
        self.bound_occurrences(index) > 0
    }

    pub(crate) fn loose_indices(&self, depth: u32, out: &mut BTreeSet<u32>) {
        match self {
            Rigid::Var(Var::Bound(k)) if *k >= depth => {
                out.insert(k - depth);
            }
            Rigid::Zero | Rigid::Var(_) => {}
            Rigid::Lam(_, b) => b.loose_indices(depth + 1, out),
            Rigid::App(f, ds) => {
                f.loose_indices(depth, out);
                for d in ds {
                    d.loose_indices(depth, out);
                }
            }
        }
    }

    pub fn free_names_in_order(&self) -> Vec<Sym> {
        fn go(t: &Rigid, out: &mut Vec<Sym>) {
            match t {
                Rigid::Var(Var::Free(x)) => {
                    if !out.contains(x) {
                        out.push(*x)
                    }
                }
                Rigid::Zero | Rigid::Var(_) => {}
                Rigid::Lam(_, b) => go(b, out),
                Rigid::App(f, ds) => {
                    go(f, out);
                    ds.iter().for_each(|d| go(d, out));
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Every linear application, at any depth, has a non-empty argument list.
    pub fn is_positive(&self) -> bool {
        match self {
            Rigid::Zero => false,
            Rigid::Var(_) => true,
            Rigid::Lam(_, b) => b.is_positive(),
            Rigid::App(f, ds) => !ds.is_empty() && f.is_positive() && ds.iter().all(Rigid::is_positive),
        }
    }
}

pub fn monomial_occurrences(ds: &[Rigid], x: Sym) -> usize {
    ds.iter().map(|d| d.occurrences(x)).sum()
}

/// Substitution into a monomial: the list is split componentwise in order.
pub fn substitute_monomial(ds: &[Rigid], x: Sym, res: &[Rigid]) -> Option<RigidMonomial> {
    if monomial_occurrences(ds, x) != res.len() {
        return None;
    }
    let mut out = Vec::with_capacity(ds.len());
    let mut start = 0;
    for d in ds {
        let n = d.occurrences(x);
        let r = d.substitute(x, &res[start..start + n]);
        if r.is_zero() {
            return None;
        }
        out.push(r);
        start += n;
    }
    Some(out)
}

impl fmt::Display for Rigid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_rigid(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rigid {
        parse_rigid(s).unwrap()
    }

    #[test]
    fn occurrence_examples() {
        let x = Sym::intern("x");
        assert_eq!(r("<x>(x)").occurrences(x), 2);
        assert_eq!(r("\\x. <x>(x)").occurrences(x), 0);
        assert_eq!(r("y").occurrences(x), 0);
    }

    #[test]
    fn substitution_examples() {
        let x = Sym::intern("x");
        assert_eq!(r("<x>(x)").substitute(x, &[r("u"), r("v")]), r("<u>(v)"));
        assert_eq!(r("x").substitute(x, &[]), Rigid::Zero);
        assert_eq!(r("<x>(x)").substitute(x, &[r("\\x. <x>(x)")]), Rigid::Zero);
        assert_eq!(r("y").substitute(x, &[]), r("y"));
    }

    #[test]
    fn substitution_follows_textual_order() {
        let x = Sym::intern("x");
        let e = r("<<x>(x, \\y. <y>(x))>(x)");
        let got = e.substitute(x, &[r("a"), r("b"), r("c"), r("d")]);
        assert_eq!(got, r("<<a>(b, \\y. <y>(c))>(d)"));
    }

    #[test]
    fn substitution_avoids_capture() {
        let x = Sym::intern("x");
        let got = r("\\y. <x>(y)").substitute(x, &[r("y")]);
        assert_eq!(got, r("\\z. <y>(z)"));
    }

    #[test]
    fn zero_is_absorbing() {
        assert_eq!(Rigid::lam("x", Rigid::Zero), Rigid::Zero);
        assert_eq!(Rigid::app(Rigid::Zero, vec![r("x")]), Rigid::Zero);
        assert_eq!(Rigid::app(r("x"), vec![r("y"), Rigid::Zero]), Rigid::Zero);
        assert_eq!(r("<x>(0)"), Rigid::Zero);
    }

    #[test]
    fn monomial_substitution_splits_componentwise() {
        let x = Sym::intern("x");
        let ds = vec![r("<x>(x)"), r("y"), r("x")];
        assert_eq!(substitute_monomial(&ds, x, &[r("a"), r("b"), r("c")]), Some(vec![r("<a>(b)"), r("y"), r("c")]));
        assert_eq!(substitute_monomial(&ds, x, &[r("a")]), None);
    }

    #[test]
    fn positivity_examples() {
        assert!(!r("<x>()").is_positive());
        assert!(r("<x>(y)").is_positive());
        assert!(!r("\\x. <x>(<y>())").is_positive());
        assert!(!Rigid::Zero.is_positive());
    }

    #[test]
    fn size_examples() {
        assert_eq!(r("x").size(), 1);
        assert_eq!(r("<x>()").size(), 2);
        assert_eq!(r("\\x. <x>(x)").size(), 4);
        assert_eq!(Rigid::Zero.size(), 0);
    }
}
