//! The multiset resource calculus with finite formal sums.
//!
//! Bags are stored sorted, so two bags are equal as values exactly when they
//! are equal as multisets. Sums have natural-number coefficients and are
//! kept in canonical form by [`Sum`].

mod parallel;
mod reduce;
mod subst;
mod sum;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use crate::names::{Hint, Sym, Var};

pub use parallel::{par_sum_successors, parallel_successors, parallel_successors_capped};
pub(crate) use reduce::Normalizer;
pub use reduce::{sum_successors, ResStrategyKind};
pub(crate) use subst::instantiate;
pub use subst::n_linear_substitute;
pub use sum::Sum;
pub use text::{parse_bag, parse_res, parse_res_sum, render_bag, render_res_sum};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Res {
    Var(Var),
    Lam(Hint, Box<Res>),
    App(Box<Res>, Bag),
}

/// A finite multiset of resource terms, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Bag(Vec<Res>);

pub type ResSum = Sum<Res>;
pub type BagSum = Sum<Bag>;

impl Bag {
    pub fn new(mut items: Vec<Res>) -> Bag {
        items.sort();
        Bag(items)
    }

    pub fn empty() -> Bag {
        Bag(Vec::new())
    }

    pub fn items(&self) -> &[Res] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn shift(&self, by: u32, cutoff: u32) -> Bag {
        Bag(self.0.iter().map(|t| t.shift(by, cutoff)).collect())
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Res::size).sum()
    }

    fn mentions_bound(&self, index: u32) -> bool {
        self.0.iter().any(|t| t.mentions_bound(index))
    }
}

impl Res {
    pub fn var(name: &str) -> Res {
        Res::Var(Var::free(name))
    }

    pub fn lam_hint(h: Hint, body: Res) -> Res {
        Res::Lam(h, Box::new(body))
    }

    /// `λname. body`, binding the free occurrences of `name`.
    pub fn lam(name: &str, body: Res) -> Res {
        let sym = Sym::intern(name);
        Res::lam_hint(Hint(sym), body.close_over(sym, 0))
    }

    pub fn app(f: Res, bag: Bag) -> Res {
        Res::App(Box::new(f), bag)
    }

    fn close_over(&self, x: Sym, depth: u32) -> Res {
        match self {
            Res::Var(Var::Free(y)) if *y == x => Res::Var(Var::Bound(depth)),
            Res::Var(v) => Res::Var(v.shifted(1, depth)),
            Res::Lam(h, b) => Res::lam_hint(*h, b.close_over(x, depth + 1)),
            Res::App(f, bag) => {
                Res::app(f.close_over(x, depth), Bag::new(bag.0.iter().map(|t| t.close_over(x, depth)).collect()))
            }
        }
    }

    /// Var = 1, Lam = 1 + body, App = 1 + function + bag elements.
    pub fn size(&self) -> usize {
        match self {
            Res::Var(_) => 1,
            Res::Lam(_, b) => 1 + b.size(),
            Res::App(f, bag) => 1 + f.size() + bag.size(),
        }
    }

    /// Shifting is monotone on indices, so it preserves the bag order.
    pub fn shift(&self, by: u32, cutoff: u32) -> Res {
        if by == 0 {
            return self.clone();
        }
        match self {
            Res::Var(v) => Res::Var(v.shifted(by, cutoff)),
            Res::Lam(h, b) => Res::lam_hint(*h, b.shift(by, cutoff + 1)),
            Res::App(f, bag) => Res::app(f.shift(by, cutoff), bag.shift(by, cutoff)),
        }
    }

    pub(crate) fn unshift(&self, by: u32, cutoff: u32) -> Option<Res> {
        Some(match self {
            Res::Var(v) => Res::Var(v.unshifted(by, cutoff)?),
            Res::Lam(h, b) => Res::lam_hint(*h, b.unshift(by, cutoff + 1)?),
            Res::App(f, bag) => Res::app(
                f.unshift(by, cutoff)?,
                Bag(bag.0.iter().map(|t| t.unshift(by, cutoff)).collect::<Option<Vec<_>>>()?),
            ),
        })
    }

    pub(crate) fn count_bound(&self, index: u32) -> usize {
        match self {
            Res::Var(Var::Bound(k)) => usize::from(*k == index),
            Res::Var(_) => 0,
            Res::Lam(_, b) => b.count_bound(index + 1),
            Res::App(f, bag) => f.count_bound(index) + bag.0.iter().map(|t| t.count_bound(index)).sum::<usize>(),
        }
    }

    /// `n_x(self)`: number of free occurrences of the name `x`.
    pub fn occurrences(&self, x: Sym) -> usize {
        match self {
            Res::Var(Var::Free(y)) => usize::from(*y == x),
            Res::Var(_) => 0,
            Res::Lam(_, b) => b.occurrences(x),
            Res::App(f, bag) => f.occurrences(x) + bag.0.iter().map(|t| t.occurrences(x)).sum::<usize>(),
        }
    }

    pub fn mentions_bound(&self, index: u32) -> bool {
        match self {
            Res::Var(Var::Bound(k)) => *k == index,
            Res::Var(_) => false,
            Res::Lam(_, b) => b.mentions_bound(index + 1),
            Res::App(f, bag) => f.mentions_bound(index) || bag.mentions_bound(index),
        }
    }

    pub(crate) fn loose_indices(&self, depth: u32, out: &mut BTreeSet<u32>) {
        match self {
            Res::Var(Var::Bound(k)) if *k >= depth => {
                out.insert(k - depth);
            }
            Res::Var(_) => {}
            Res::Lam(_, b) => b.loose_indices(depth + 1, out),
            Res::App(f, bag) => {
                f.loose_indices(depth, out);
                for t in &bag.0 {
                    t.loose_indices(depth, out);
                }
            }
        }
    }

    pub fn free_names_in_order(&self) -> Vec<Sym> {
        fn go(t: &Res, out: &mut Vec<Sym>) {
            match t {
                Res::Var(Var::Free(x)) => {
                    if !out.contains(x) {
                        out.push(*x)
                    }
                }
                Res::Var(_) => {}
                Res::Lam(_, b) => go(b, out),
                Res::App(f, bag) => {
                    go(f, out);
                    bag.0.iter().for_each(|t| go(t, out));
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// No empty bag occurs anywhere.
    pub fn is_positive(&self) -> bool {
        match self {
            Res::Var(_) => true,
            Res::Lam(_, b) => b.is_positive(),
            Res::App(f, bag) => !bag.is_empty() && f.is_positive() && bag.0.iter().all(Res::is_positive),
        }
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Res::App(f, _) if matches!(**f, Res::Lam(..)))
    }

    /// `⟨λ.body⟩bag` with the binder free in `body`.
    pub fn is_non_erasing_redex(&self) -> bool {
        matches!(self, Res::App(f, _) if matches!(&**f, Res::Lam(_, b) if b.mentions_bound(0)))
    }
}

/// `λh.σ`, by linearity.
pub fn lam_sum(h: Hint, body: &ResSum) -> ResSum {
    body.map(|b| Res::lam_hint(h, b.clone()))
}

/// `⟨σ⟩τ`, by bilinearity.
pub fn app_sum(f: &ResSum, bags: &BagSum) -> ResSum {
    f.combine(bags, |f, b| Res::app(f.clone(), b.clone()))
}

/// `[σ₁, …, σ_n]`, by multilinearity.
pub fn bag_sum(items: &[ResSum]) -> BagSum {
    let mut acc: Sum<Vec<Res>> = Sum::single(Vec::new());
    for s in items {
        acc = acc.combine(s, |v, t| {
            let mut v = v.clone();
            v.push(t.clone());
            v
        });
    }
    acc.map(|v| Bag::new(v.clone()))
}

impl fmt::Display for Res {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_res(self))
    }
}

impl fmt::Display for Bag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_bag(self))
    }
}

impl fmt::Display for Sum<Res> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_res_sum(self))
    }
}
