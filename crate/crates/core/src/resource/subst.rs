//! n-linear substitution `∂_x e · ū`, by recursion over partitions of the
//! positions of `ū`. Subsets of positions are bitmasks.

use num_bigint::BigUint;

use super::{app_sum, lam_sum, Bag, Res, ResSum, Sum};
use crate::names::{Sym, Var};

#[derive(Clone, Copy)]
enum Target {
    Bound(u32),
    Free(Sym),
}

fn count(e: &Res, target: Target, depth: u32) -> usize {
    match target {
        Target::Bound(i) => e.count_bound(i + depth),
        Target::Free(x) => e.occurrences(x),
    }
}

/// Every subset of `mask`, including the empty set and `mask` itself.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn go(e: &Res, target: Target, depth: u32, us: &[Res], mask: u32) -> ResSum {
    if count(e, target, depth) != mask.count_ones() as usize {
        return Sum::zero();
    }
    match e {
        Res::Var(v) => {
            let hit = match (target, *v) {
                (Target::Bound(i), Var::Bound(k)) => k == i + depth,
                (Target::Free(x), Var::Free(y)) => x == y,
                _ => false,
            };
            if hit {
                Sum::single(us[mask.trailing_zeros() as usize].shift(depth, 0))
            } else {
                match (target, *v) {
                    (Target::Bound(i), Var::Bound(k)) if k > i + depth => Sum::single(Res::Var(Var::Bound(k - 1))),
                    _ => Sum::single(e.clone()),
                }
            }
        }
        Res::Lam(h, b) => lam_sum(*h, &go(b, target, depth + 1, us, mask)),
        Res::App(f, bag) => {
            let mut out = Sum::zero();
            for left in submasks(mask) {
                let fs = go(f, target, depth, us, left);
                if fs.is_zero() {
                    continue;
                }
                let bags = go_bag(bag.items(), target, depth, us, mask & !left);
                out.add_sum(&app_sum(&fs, &bags));
            }
            out
        }
    }
}

fn go_bag(items: &[Res], target: Target, depth: u32, us: &[Res], mask: u32) -> Sum<Bag> {
    let mut acc: Sum<Vec<Res>> = Sum::zero();
    go_list(items, target, depth, us, mask, Vec::new(), &mut acc, &BigUint::from(1u32));
    acc.map(|v| Bag::new(v.clone()))
}

#[allow(clippy::too_many_arguments)]
fn go_list(
    items: &[Res],
    target: Target,
    depth: u32,
    us: &[Res],
    mask: u32,
    prefix: Vec<Res>,
    acc: &mut Sum<Vec<Res>>,
    coeff: &BigUint,
) {
    let Some((first, rest)) = items.split_first() else {
        if mask == 0 {
            acc.add_term(prefix, coeff.clone());
        }
        return;
    };
    let need: usize = rest.iter().map(|t| count(t, target, depth)).sum();
    for part in submasks(mask) {
        if (mask & !part).count_ones() as usize != need {
            continue;
        }
        for (t, c) in &go(first, target, depth, us, part) {
            let mut p = prefix.clone();
            p.push(t.clone());
            go_list(rest, target, depth, us, mask & !part, p, acc, &(coeff * c));
        }
    }
}

fn substitute(e: &Res, target: Target, bag: &Bag) -> ResSum {
    assert!(bag.len() < 32, "bag too large for n-linear substitution");
    let mask = if bag.is_empty() { 0 } else { u32::MAX >> (32 - bag.len()) };
    go(e, target, 0, bag.items(), mask)
}

/// `∂_x e · ū`. Zero when `n_x(e) ≠ |ū|`.
pub fn n_linear_substitute(e: &Res, x: Sym, bag: &Bag) -> ResSum {
    substitute(e, Target::Free(x), bag)
}

/// Contractum of `⟨λ.body⟩bag`.
pub(crate) fn instantiate(body: &Res, bag: &Bag) -> ResSum {
    substitute(body, Target::Bound(0), bag)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_bag, parse_res, parse_res_sum};
    use super::*;

    fn s(t: &str) -> Res {
        parse_res(t).unwrap()
    }

    fn b(t: &str) -> Bag {
        parse_bag(t).unwrap()
    }

    #[test]
    fn examples() {
        let x = Sym::intern("x");
        assert_eq!(n_linear_substitute(&s("x"), x, &b("[t]")), ResSum::single(s("t")));
        assert_eq!(n_linear_substitute(&s("<x>[x]"), x, &b("[u, v]")), parse_res_sum("<u>[v] + <v>[u]").unwrap());
        assert!(n_linear_substitute(&s("y"), x, &b("[u]")).is_zero());
        assert_eq!(n_linear_substitute(&s("y"), x, &b("[]")), ResSum::single(s("y")));
    }

    #[test]
    fn repeated_resources_merge() {
        let x = Sym::intern("x");
        let got = n_linear_substitute(&s("<x>[x]"), x, &b("[u, u]"));
        assert_eq!(got.coefficient(&s("<u>[u]")), BigUint::from(2u32));
        assert_eq!(got.len(), 1);
    }

    #[test]
    fn mass_is_factorial() {
        let x = Sym::intern("x");
        let got = n_linear_substitute(&s("<x>[x, <x>[x]]"), x, &b("[a, b, c, d]"));
        assert_eq!(got.mass(), BigUint::from(24u32));
    }

    #[test]
    fn under_binders() {
        let x = Sym::intern("x");
        let got = n_linear_substitute(&s("\\y. <x>[y]"), x, &b("[y]"));
        assert_eq!(got, ResSum::single(s("\\z. <y>[z]")));
        let body = s("\\y. <y>[y]");
        let Res::Lam(_, inner) = &body else { unreachable!() };
        assert_eq!(instantiate(inner, &b("[u, v]")), parse_res_sum("<u>[v] + <v>[u]").unwrap());
    }
}
