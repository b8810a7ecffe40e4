//! Ordinary λ-terms.
//!
//! Terms are nameless: bound variables are de Bruijn indices, free
//! variables are interned names. Two α-equivalent terms are therefore equal
//! as Rust values, and every set of terms is a set up to α.

mod strategy;
pub(crate) mod text;

use std::collections::BTreeSet;
use std::fmt;

use crate::names::{Hint, Sym, Var};

pub use strategy::{Dir, Rule, Step, StrategyKind};
pub use text::parse;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Var),
    Lam(Hint, Box<Term>),
    App(Box<Term>, Box<Term>),
}

/// `λx₁…λx_m. core N₁…N_n` with `core` a redex or a variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeadDecomposition {
    pub binders: Vec<Hint>,
    pub core: Term,
    pub args: Vec<Term>,
    pub core_is_redex: bool,
}

impl HeadDecomposition {
    pub fn reassemble(&self) -> Term {
        let spine = self.args.iter().fold(self.core.clone(), |f, a| Term::app(f, a.clone()));
        self.binders.iter().rev().fold(spine, |body, h| Term::Lam(*h, Box::new(body)))
    }

    pub fn binder_names(&self) -> Vec<Sym> {
        self.binders.iter().map(|h| h.sym()).collect()
    }
}

/// Structural flags of a term.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct Classification {
    pub is_beta_nf: bool,
    pub is_head_nf: bool,
    pub is_non_erasing_nf: bool,
    pub is_lambda_i: bool,
    pub is_closed: bool,
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::free(name))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `λname. body`, binding every free occurrence of `name` in `body`.
    pub fn lam(name: &str, body: Term) -> Term {
        let sym = Sym::intern(name);
        Term::Lam(Hint(sym), Box::new(body.close_over(sym, 0)))
    }

    fn close_over(&self, x: Sym, depth: u32) -> Term {
        match self {
            Term::Var(Var::Free(y)) if *y == x => Term::Var(Var::Bound(depth)),
            Term::Var(v) => Term::Var(v.shifted(1, depth)),
            Term::Lam(h, b) => Term::Lam(*h, Box::new(b.close_over(x, depth + 1))),
            Term::App(f, a) => Term::app(f.close_over(x, depth), a.close_over(x, depth)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn shift(&self, by: u32, cutoff: u32) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Var(v) => Term::Var(v.shifted(by, cutoff)),
            Term::Lam(h, b) => Term::Lam(*h, Box::new(b.shift(by, cutoff + 1))),
            Term::App(f, a) => Term::app(f.shift(by, cutoff), a.shift(by, cutoff)),
        }
    }

    /// Inverse of `shift`; `None` if an index in `cutoff..cutoff + by` occurs.
    pub fn unshift(&self, by: u32, cutoff: u32) -> Option<Term> {
        Some(match self {
            Term::Var(v) => Term::Var(v.unshifted(by, cutoff)?),
            Term::Lam(h, b) => Term::Lam(*h, Box::new(b.unshift(by, cutoff + 1)?)),
            Term::App(f, a) => Term::app(f.unshift(by, cutoff)?, a.unshift(by, cutoff)?),
        })
    }

    /// Body of a binder with index 0 replaced by `arg`: the contractum of
    /// `(λ.self) arg`.
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.instantiate_at(arg, 0)
    }

    fn instantiate_at(&self, arg: &Term, depth: u32) -> Term {
        match self {
            Term::Var(Var::Bound(k)) if *k == depth => arg.shift(depth, 0),
            Term::Var(Var::Bound(k)) if *k > depth => Term::Var(Var::Bound(k - 1)),
            Term::Var(v) => Term::Var(*v),
            Term::Lam(h, b) => Term::Lam(*h, Box::new(b.instantiate_at(arg, depth + 1))),
            Term::App(f, a) => Term::app(f.instantiate_at(arg, depth), a.instantiate_at(arg, depth)),
        }
    }

    /// Whether bound index `index` (relative to this term's root) occurs.
    pub fn mentions_bound(&self, index: u32) -> bool {
        match self {
            Term::Var(v) => *v == Var::Bound(index),
            Term::Lam(_, b) => b.mentions_bound(index + 1),
            Term::App(f, a) => f.mentions_bound(index) || a.mentions_bound(index),
        }
    }

    pub(crate) fn loose_indices(&self, depth: u32, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(Var::Bound(k)) if *k >= depth => {
                out.insert(k - depth);
            }
            Term::Var(_) => {}
            Term::Lam(_, b) => b.loose_indices(depth + 1, out),
            Term::App(f, a) => {
                f.loose_indices(depth, out);
                a.loose_indices(depth, out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Sym> {
        self.free_names_in_order().into_iter().collect()
    }

    /// Free names, each listed once, in order of first occurrence.
    pub fn free_names_in_order(&self) -> Vec<Sym> {
        fn go(t: &Term, out: &mut Vec<Sym>) {
            match t {
                Term::Var(Var::Free(x)) => {
                    if !out.contains(x) {
                        out.push(*x);
                    }
                }
                Term::Var(_) => {}
                Term::Lam(_, b) => go(b, out),
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Capture-avoiding substitution of `n` for the free name `x`.
    pub fn substitute(&self, x: Sym, n: &Term) -> Term {
        fn go(t: &Term, x: Sym, n: &Term, depth: u32) -> Term {
            match t {
                Term::Var(Var::Free(y)) if *y == x => n.shift(depth, 0),
                Term::Var(v) => Term::Var(*v),
                Term::Lam(h, b) => Term::Lam(*h, Box::new(go(b, x, n, depth + 1))),
                Term::App(f, a) => Term::app(go(f, x, n, depth), go(a, x, n, depth)),
            }
        }
        go(self, x, n, 0)
    }

    /// Abstracts the free names in first-occurrence order, outermost first.
    pub fn closure(&self) -> Term {
        self.free_names_in_order().iter().rev().fold(self.clone(), |body, x| Term::lam(x.as_str(), body))
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Term::App(f, _) if matches!(**f, Term::Lam(..)))
    }

    pub fn head_decompose(&self) -> HeadDecomposition {
        let mut binders = Vec::new();
        let mut t = self;
        while let Term::Lam(h, b) = t {
            binders.push(*h);
            t = b;
        }
        let mut args = Vec::new();
        let mut head = t;
        while let Term::App(f, a) = head {
            args.push((**a).clone());
            head = f;
        }
        args.reverse();
        match head {
            Term::Lam(..) => {
                let first = args.remove(0);
                HeadDecomposition { binders, core: Term::app(head.clone(), first), args, core_is_redex: true }
            }
            _ => HeadDecomposition { binders, core: head.clone(), args, core_is_redex: false },
        }
    }

    pub fn is_head_normal(&self) -> bool {
        !self.head_decompose().core_is_redex
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam(_, b) => b.is_beta_normal(),
            Term::App(f, a) => !self.is_redex() && f.is_beta_normal() && a.is_beta_normal(),
        }
    }

    pub fn is_non_erasing_normal(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam(_, b) => b.is_non_erasing_normal(),
            Term::App(f, a) => {
                let fires = matches!(&**f, Term::Lam(_, b) if b.mentions_bound(0));
                !fires && f.is_non_erasing_normal() && a.is_non_erasing_normal()
            }
        }
    }

    pub fn is_lambda_i(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Lam(_, b) => b.mentions_bound(0) && b.is_lambda_i(),
            Term::App(f, a) => f.is_lambda_i() && a.is_lambda_i(),
        }
    }

    pub fn is_closed(&self) -> bool {
        let mut loose = BTreeSet::new();
        self.loose_indices(0, &mut loose);
        loose.is_empty() && self.free_names_in_order().is_empty()
    }

    pub fn classify(&self) -> Classification {
        Classification {
            is_beta_nf: self.is_beta_normal(),
            is_head_nf: self.is_head_normal(),
            is_non_erasing_nf: self.is_non_erasing_normal(),
            is_lambda_i: self.is_lambda_i(),
            is_closed: self.is_closed(),
        }
    }

    /// Nameless rendering, e.g. `λ.λ.1 0`, with free names printed as is.
    pub fn to_debruijn(&self) -> String {
        match self {
            Term::Var(Var::Bound(k)) => k.to_string(),
            Term::Var(Var::Free(x)) => x.to_string(),
            Term::Lam(_, b) => format!("λ.{}", b.to_debruijn()),
            Term::App(f, a) => {
                let fs = match **f {
                    Term::Lam(..) => format!("({})", f.to_debruijn()),
                    _ => f.to_debruijn(),
                };
                let as_ = match **a {
                    Term::Var(_) => a.to_debruijn(),
                    _ => format!("({})", a.to_debruijn()),
                };
                format!("{fs} {as_}")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self))
    }
}

pub fn render(t: &Term) -> String {
    text::render(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn names(v: &[&str]) -> BTreeSet<Sym> {
        v.iter().map(|s| Sym::intern(s)).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(p("\\x. x").free_vars(), names(&[]));
        assert_eq!(p("\\x. x y").free_vars(), names(&["y"]));
        assert_eq!(p("(\\x. y) ((\\x. x x) (\\x. x x))").free_vars(), names(&["y"]));
    }

    #[test]
    fn substitution_examples() {
        let x = Sym::intern("x");
        assert_eq!(p("x x").substitute(x, &p("\\y. y")), p("(\\y. y) (\\y. y)"));
        let captured = p("\\y. x").substitute(x, &p("y"));
        assert_eq!(captured, p("\\z. y"));
        assert_eq!(captured.to_string(), "\\y'. y");
        assert_eq!(p("(\\x. x x) x").substitute(x, &p("\\z. z")), p("(\\x. x x) (\\z. z)"));
    }

    #[test]
    fn head_decomposition_examples() {
        let d = p("\\x. x y").head_decompose();
        assert_eq!(d.binder_names(), vec![Sym::intern("x")]);
        assert_eq!(d.core, Term::Var(Var::Bound(0)));
        assert_eq!(d.args, vec![p("y")]);
        assert!(!d.core_is_redex);

        let d = p("(\\x. p) q r").head_decompose();
        assert!(d.binders.is_empty());
        assert_eq!(d.core, p("(\\x. p) q"));
        assert_eq!(d.args, vec![p("r")]);
        assert!(d.core_is_redex);

        let d = p("x").head_decompose();
        assert_eq!((d.binders.len(), d.core.clone(), d.args.len()), (0, p("x"), 0));
    }

    #[test]
    fn classify_examples() {
        let all = p("\\x. x").classify();
        assert!(all.is_beta_nf && all.is_head_nf && all.is_non_erasing_nf && all.is_lambda_i && all.is_closed);
        let m = p("((\\y. \\x. x x) z) (\\x. x x)").classify();
        assert!(m.is_non_erasing_nf);
        assert!(!m.is_beta_nf);
        assert!(!p("\\x. y").classify().is_lambda_i);
    }

    #[test]
    fn closure_abstracts_in_first_occurrence_order() {
        assert_eq!(p("y x y").closure(), p("\\y. \\x. y x y"));
        assert!(p("y x").closure().is_closed());
    }
}
