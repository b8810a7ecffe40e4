//! Resource reduction `→∂` with its σ₁, non-erasing, erasing and
//! non-erasing ε variants, on terms and on sums.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use super::subst::instantiate;
use super::{app_sum, bag_sum, lam_sum, Bag, BagSum, Res, ResSum, Sum};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ResStrategyKind {
    /// `⟨λx.s⟩t̄ → ∂_x s · t̄`.
    Partial,
    /// `⟨⟨λx.s⟩t̄⟩q̄ → ⟨λx.⟨s⟩q̄⟩t̄`.
    PartialSigma1,
    PartialNonErasing,
    PartialErasing,
    /// `PartialNonErasing ∪ PartialSigma1`.
    EpsilonNonErasing,
}

impl ResStrategyKind {
    pub const ALL: [ResStrategyKind; 5] = [
        ResStrategyKind::Partial,
        ResStrategyKind::PartialSigma1,
        ResStrategyKind::PartialNonErasing,
        ResStrategyKind::PartialErasing,
        ResStrategyKind::EpsilonNonErasing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ResStrategyKind::Partial => "beta",
            ResStrategyKind::PartialSigma1 => "sigma1",
            ResStrategyKind::PartialNonErasing => "non-erasing",
            ResStrategyKind::PartialErasing => "erasing",
            ResStrategyKind::EpsilonNonErasing => "epsilon-ne",
        }
    }

    fn beta(self, erasing: bool) -> bool {
        match self {
            ResStrategyKind::Partial => true,
            ResStrategyKind::PartialNonErasing | ResStrategyKind::EpsilonNonErasing => !erasing,
            ResStrategyKind::PartialErasing => erasing,
            ResStrategyKind::PartialSigma1 => false,
        }
    }

    fn sigma(self) -> bool {
        matches!(self, ResStrategyKind::PartialSigma1 | ResStrategyKind::EpsilonNonErasing)
    }
}

impl fmt::Display for ResStrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ResStrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ResStrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown resource strategy '{s}'"))
    }
}

fn fire(t: &Res, kind: ResStrategyKind) -> Vec<ResSum> {
    let mut out = Vec::new();
    if let Res::App(f, q) = t {
        match &**f {
            Res::Lam(_, body) => {
                if kind.beta(!body.mentions_bound(0)) {
                    out.push(instantiate(body, q));
                }
            }
            Res::App(g, tb) if kind.sigma() => {
                if let Res::Lam(h, s) = &**g {
                    let inner = Res::app((**s).clone(), q.shift(1, 0));
                    out.push(Sum::single(Res::app(Res::lam_hint(*h, inner), tb.clone())));
                }
            }
            _ => {}
        }
    }
    out
}

fn contextual(t: &Res, kind: ResStrategyKind, out: &mut Vec<ResSum>) {
    out.extend(fire(t, kind));
    match t {
        Res::Var(_) => {}
        Res::Lam(h, b) => {
            let mut inner = Vec::new();
            contextual(b, kind, &mut inner);
            out.extend(inner.iter().map(|s| lam_sum(*h, s)));
        }
        Res::App(f, bag) => {
            let mut inner = Vec::new();
            contextual(f, kind, &mut inner);
            let this_bag = BagSum::single(bag.clone());
            out.extend(inner.iter().map(|s| app_sum(s, &this_bag)));
            let items = bag.items();
            for i in 0..items.len() {
                if i > 0 && items[i] == items[i - 1] {
                    continue;
                }
                let mut inner = Vec::new();
                contextual(&items[i], kind, &mut inner);
                for s in inner {
                    let parts: Vec<ResSum> = items
                        .iter()
                        .enumerate()
                        .map(|(j, u)| if j == i { s.clone() } else { Sum::single(u.clone()) })
                        .collect();
                    out.push(app_sum(&Sum::single((**f).clone()), &bag_sum(&parts)));
                }
            }
        }
    }
}

impl Res {
    /// One sum per redex occurrence, contexts included.
    pub fn successors(&self, kind: ResStrategyKind) -> BTreeSet<ResSum> {
        let mut out = Vec::new();
        contextual(self, kind, &mut out);
        out.into_iter().collect()
    }

    pub fn partial_successors(&self) -> BTreeSet<ResSum> {
        self.successors(ResStrategyKind::Partial)
    }

    pub fn is_normal_for(&self, kind: ResStrategyKind) -> bool {
        let mut out = Vec::new();
        contextual(self, kind, &mut out);
        out.is_empty()
    }

    /// The normal form reached by innermost reduction. For `Partial` and
    /// `EpsilonNonErasing` it is the unique normal form.
    pub fn normal_form(&self, kind: ResStrategyKind) -> ResSum {
        Normalizer::new(kind).term(self)
    }

    pub fn partial_normal_form(&self) -> ResSum {
        self.normal_form(ResStrategyKind::Partial)
    }

    pub fn nf_eps_nonerasing(&self) -> ResSum {
        self.normal_form(ResStrategyKind::EpsilonNonErasing)
    }
}

/// Innermost normalizer with a per-call memo table.
pub(crate) struct Normalizer {
    kind: ResStrategyKind,
    memo: HashMap<Res, ResSum>,
}

impl Normalizer {
    pub(crate) fn new(kind: ResStrategyKind) -> Self {
        Normalizer { kind, memo: HashMap::new() }
    }

    pub(crate) fn sum(&mut self, s: &ResSum) -> ResSum {
        s.flat_map(|t| self.term(t))
    }

    pub(crate) fn term(&mut self, t: &Res) -> ResSum {
        if let Some(hit) = self.memo.get(t) {
            return hit.clone();
        }
        let out = match t {
            Res::Var(_) => Sum::single(t.clone()),
            Res::Lam(h, b) => lam_sum(*h, &self.term(b)),
            Res::App(f, bag) => {
                let fs = self.term(f);
                let bags = self.bag(bag);
                let mut out = Sum::zero();
                for (f, c) in &fs {
                    for (b, d) in &bags {
                        out.add_sum(&self.apply(f, b).scaled(&(c * d)));
                    }
                }
                out
            }
        };
        self.memo.insert(t.clone(), out.clone());
        out
    }

    fn bag(&mut self, bag: &Bag) -> BagSum {
        let parts: Vec<ResSum> = bag.items().iter().map(|t| self.term(t)).collect();
        bag_sum(&parts)
    }

    /// Normal form of `⟨f⟩bag` for normal `f` and `bag`.
    pub(crate) fn apply(&mut self, f: &Res, bag: &Bag) -> ResSum {
        match f {
            Res::Lam(_, body) if self.kind.beta(!body.mentions_bound(0)) => {
                let contractum = instantiate(body, bag);
                self.sum(&contractum)
            }
            Res::App(g, tb) if self.kind.sigma() => match &**g {
                Res::Lam(h, s) => {
                    let inner = self.apply(s, &bag.shift(1, 0));
                    inner.flat_map(|s2| self.apply(&Res::lam_hint(*h, s2.clone()), tb))
                }
                _ => Sum::single(Res::app(f.clone(), bag.clone())),
            },
            _ => Sum::single(Res::app(f.clone(), bag.clone())),
        }
    }
}

/// Steps of a sum: one support occurrence is reduced and the result merged
/// back.
pub fn sum_successors(sum: &ResSum, kind: ResStrategyKind) -> BTreeSet<ResSum> {
    let mut out = BTreeSet::new();
    for t in sum.support() {
        for reduct in t.successors(kind) {
            let mut next = sum.clone();
            next.remove_one(t);
            next.add_sum(&reduct);
            out.insert(next);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_res, parse_res_sum};
    use super::*;

    fn s(t: &str) -> Res {
        parse_res(t).unwrap()
    }

    fn sum(t: &str) -> ResSum {
        parse_res_sum(t).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<ResSum> {
        items.iter().map(|t| sum(t)).collect()
    }

    const OMEGA_D: &str = "<\\x. <x>[x]>[\\x. <x>[x]]";

    #[test]
    fn partial_examples() {
        assert_eq!(s("<\\x. <x>[x]>[u, v]").partial_successors(), set(&["<u>[v] + <v>[u]"]));
        assert_eq!(s("<\\x. x>[]").partial_successors(), set(&["0"]));
        assert!(s("x").partial_successors().is_empty());
    }

    #[test]
    fn normal_form_examples() {
        assert!(s(OMEGA_D).partial_normal_form().is_zero());
        assert_eq!(s("<x>[]").partial_normal_form(), sum("<x>[]"));
        assert_eq!(s("<\\x. <x>[x]>[\\y. y, z]").partial_normal_form(), sum("z + <z>[\\y. y]"));
    }

    #[test]
    fn variant_examples() {
        let y = "<\\x. y>[]";
        assert_eq!(s(y).successors(ResStrategyKind::PartialErasing), set(&["y"]));
        assert_eq!(s("<<\\x. s>[t]>[q]").successors(ResStrategyKind::PartialSigma1), set(&["<\\x. <s>[q]>[t]"]));
        assert!(s("<\\x. y>[z]").successors(ResStrategyKind::PartialNonErasing).is_empty());
    }

    #[test]
    fn eps_nonerasing_examples() {
        assert!(s(OMEGA_D).nf_eps_nonerasing().is_zero());
        assert_eq!(s("<\\x. y>[z]").nf_eps_nonerasing(), sum("<\\x. y>[z]"));
        assert_eq!(s("<<\\x. x>[y]>[z]").nf_eps_nonerasing(), sum("<y>[z]"));
        // An erasing redex in function position is moved out of the way.
        assert_eq!(s("<<\\x. \\w. w>[z]>[y]").nf_eps_nonerasing(), sum("<\\x. y>[z]"));
    }

    #[test]
    fn sum_steps_reduce_one_copy() {
        let start = sum("2*<\\x. x>[y]");
        assert_eq!(sum_successors(&start, ResStrategyKind::Partial), set(&["<\\x. x>[y] + y"]));
    }
}
