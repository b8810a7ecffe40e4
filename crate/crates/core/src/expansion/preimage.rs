//! Constructive inverses of substitution and of single reduction steps on
//! approximants.
//!
//! Each function walks a λ-term and an approximant of its reduct side by
//! side and rebuilds an approximant of the term itself. The caller is
//! responsible for passing a genuine approximant; on a shape mismatch the
//! result is `None`.

use crate::names::{Sym, Var};
use crate::resource::{app_sum, bag_sum, instantiate, lam_sum, Bag, BagSum, Res, ResStrategyKind, ResSum, Sum};
use crate::rigid::{Rigid, RigidMonomial};
use crate::syntax::{Dir, Rule, Term};

#[derive(Clone, Copy)]
enum Target {
    Bound(u32),
    Free(Sym),
}

impl Target {
    fn hit(self, v: Var, depth: u32) -> bool {
        match (self, v) {
            (Target::Bound(i), Var::Bound(k)) => k == i + depth,
            (Target::Free(x), Var::Free(y)) => x == y,
            _ => false,
        }
    }

    /// What a non-target variable becomes after the substitution.
    fn after(self, v: Var, depth: u32) -> Var {
        match (self, v) {
            (Target::Bound(i), Var::Bound(k)) if k > i + depth => Var::Bound(k - 1),
            _ => v,
        }
    }
}

fn rigid_unsub(body: &Term, target: Target, depth: u32, c: &Rigid, out: &mut Vec<Rigid>) -> Option<Rigid> {
    match body {
        Term::Var(v) if target.hit(*v, depth) => {
            out.push(c.unshift(depth, 0)?);
            Some(Rigid::Var(*v))
        }
        Term::Var(v) => (c == &Rigid::Var(target.after(*v, depth))).then_some(Rigid::Var(*v)),
        Term::Lam(h, b) => match c {
            Rigid::Lam(_, cb) => Some(Rigid::lam_hint(*h, rigid_unsub(b, target, depth + 1, cb, out)?)),
            _ => None,
        },
        Term::App(p, q) => match c {
            Rigid::App(f, ds) => {
                let f = rigid_unsub(p, target, depth, f, out)?;
                let ds = ds.iter().map(|d| rigid_unsub(q, target, depth, d, out)).collect::<Option<Vec<_>>>()?;
                Some(Rigid::App(Box::new(f), ds))
            }
            _ => None,
        },
    }
}

/// For `c' ∈ T_r(m[n/x])`, returns `c ∈ T_r(m)` and `d⃗ ∈ T_r(n)^!` with
/// `c[d⃗/x] = c'`. The components of `d⃗` are read off `c'` itself.
pub fn rigid_unsubstitute(m: &Term, x: Sym, c: &Rigid) -> Option<(Rigid, RigidMonomial)> {
    let mut ds = Vec::new();
    let a = rigid_unsub(m, Target::Free(x), 0, c, &mut ds)?;
    Some((a, ds))
}

/// For `m` reducing at `path` by `rule` and `b` an approximant of the
/// reduct, an approximant `a` of `m` with `a →r b` (or `a = b` when the
/// position is erased in `b`).
pub fn rigid_step_preimage(m: &Term, path: &[Dir], rule: Rule, b: &Rigid) -> Option<Rigid> {
    let Some((dir, rest)) = path.split_first() else {
        return rigid_redex_preimage(m, rule, b);
    };
    match (dir, m, b) {
        (Dir::Body, Term::Lam(h, mb), Rigid::Lam(_, bb)) => {
            Some(Rigid::lam_hint(*h, rigid_step_preimage(mb, rest, rule, bb)?))
        }
        (Dir::Fun, Term::App(p, _), Rigid::App(f, ds)) => {
            Some(Rigid::App(Box::new(rigid_step_preimage(p, rest, rule, f)?), ds.clone()))
        }
        (Dir::Arg, Term::App(_, q), Rigid::App(f, ds)) => Some(Rigid::App(
            f.clone(),
            ds.iter().map(|d| rigid_step_preimage(q, rest, rule, d)).collect::<Option<Vec<_>>>()?,
        )),
        _ => None,
    }
}

fn rigid_redex_preimage(m: &Term, rule: Rule, b: &Rigid) -> Option<Rigid> {
    match (rule, m) {
        (Rule::NonErasing | Rule::Erasing, Term::App(f, _)) => {
            let Term::Lam(h, p) = &**f else { return None };
            let mut ds = Vec::new();
            let c = rigid_unsub(p, Target::Bound(0), 0, b, &mut ds)?;
            Some(Rigid::App(Box::new(Rigid::lam_hint(*h, c)), ds))
        }
        (Rule::Sigma1, Term::App(..)) => {
            // b = ⟨λx.⟨c⟩q⃗↑⟩n⃗  ↦  ⟨⟨λx.c⟩n⃗⟩q⃗
            let Rigid::App(l, ns) = b else { return None };
            let Rigid::Lam(h, inner) = &**l else { return None };
            let Rigid::App(c, qs) = &**inner else { return None };
            let qs = qs.iter().map(|q| q.unshift(1, 0)).collect::<Option<Vec<_>>>()?;
            Some(Rigid::App(Box::new(Rigid::App(Box::new(Rigid::lam_hint(*h, (**c).clone())), ns.clone())), qs))
        }
        _ => None,
    }
}

fn head_path(m: &Term) -> Option<Vec<Dir>> {
    let d = m.head_decompose();
    d.core_is_redex.then(|| {
        let mut path = vec![Dir::Body; d.binders.len()];
        path.extend(std::iter::repeat(Dir::Fun).take(d.args.len()));
        path
    })
}

/// For `b ∈ T_r(H(m))`, some `a ∈ T_r(m)` with `H_r(a) = b`.
pub fn rigid_head_preimage(m: &Term, b: &Rigid) -> Option<Rigid> {
    match head_path(m) {
        None => Some(b.clone()),
        Some(path) => rigid_step_preimage(m, &path, Rule::NonErasing, b),
    }
}

/// For `b ∈ T_r(L(m))`, some `a ∈ T_r(m)` with `L_r(a) = b`.
pub fn rigid_left_preimage(m: &Term, b: &Rigid) -> Option<Rigid> {
    if m.is_beta_normal() {
        return Some(b.clone());
    }
    if head_path(m).is_some() {
        return rigid_head_preimage(m, b);
    }
    match (m, b) {
        (Term::Lam(h, mb), Rigid::Lam(_, bb)) => Some(Rigid::lam_hint(*h, rigid_left_preimage(mb, bb)?)),
        (Term::App(p, q), Rigid::App(f, ds)) => Some(Rigid::App(
            Box::new(rigid_left_spine(p, f)?),
            ds.iter().map(|d| rigid_left_preimage(q, d)).collect::<Option<Vec<_>>>()?,
        )),
        _ => None,
    }
}

/// Along the spine of a head-normal form, arguments are handled by `L`
/// independently.
fn rigid_left_spine(p: &Term, f: &Rigid) -> Option<Rigid> {
    match (p, f) {
        (Term::Var(_), _) => Some(f.clone()),
        (Term::App(p, q), Rigid::App(f, ds)) => Some(Rigid::App(
            Box::new(rigid_left_spine(p, f)?),
            ds.iter().map(|d| rigid_left_preimage(q, d)).collect::<Option<Vec<_>>>()?,
        )),
        _ => None,
    }
}

fn res_unsub(body: &Term, target: Target, depth: u32, u: &Res, out: &mut Vec<Res>) -> Option<Res> {
    match body {
        Term::Var(v) if target.hit(*v, depth) => {
            out.push(u.unshift(depth, 0)?);
            Some(Res::Var(*v))
        }
        Term::Var(v) => (u == &Res::Var(target.after(*v, depth))).then_some(Res::Var(*v)),
        Term::Lam(h, b) => match u {
            Res::Lam(_, ub) => Some(Res::lam_hint(*h, res_unsub(b, target, depth + 1, ub, out)?)),
            _ => None,
        },
        Term::App(p, q) => match u {
            Res::App(f, bag) => {
                let f = res_unsub(p, target, depth, f, out)?;
                let items =
                    bag.items().iter().map(|t| res_unsub(q, target, depth, t, out)).collect::<Option<Vec<_>>>()?;
                Some(Res::app(f, Bag::new(items)))
            }
            _ => None,
        },
    }
}

/// For `u ∈ T(m[n/x])`, returns `s ∈ T(m)` and `t̄ ∈ T(n)^!` with
/// `u ∈ supp(∂_x s · t̄)`.
pub fn res_unsubstitute(m: &Term, x: Sym, u: &Res) -> Option<(Res, Bag)> {
    let mut ts = Vec::new();
    let s = res_unsub(m, Target::Free(x), 0, u, &mut ts)?;
    Some((s, Bag::new(ts)))
}

/// For `m` reducing at `path` by `rule` and `t ∈ T` of the reduct, some
/// `s ∈ T(m)` whose corresponding resource step has `t` in its support.
pub fn res_step_preimage(m: &Term, path: &[Dir], rule: Rule, t: &Res) -> Option<Res> {
    let Some((dir, rest)) = path.split_first() else {
        return res_redex_preimage(m, rule, t);
    };
    match (dir, m, t) {
        (Dir::Body, Term::Lam(h, mb), Res::Lam(_, tb)) => {
            Some(Res::lam_hint(*h, res_step_preimage(mb, rest, rule, tb)?))
        }
        (Dir::Fun, Term::App(p, _), Res::App(f, bag)) => {
            Some(Res::app(res_step_preimage(p, rest, rule, f)?, bag.clone()))
        }
        (Dir::Arg, Term::App(_, q), Res::App(f, bag)) => Some(Res::app(
            (**f).clone(),
            Bag::new(bag.items().iter().map(|u| res_step_preimage(q, rest, rule, u)).collect::<Option<Vec<_>>>()?),
        )),
        _ => None,
    }
}

fn res_redex_preimage(m: &Term, rule: Rule, t: &Res) -> Option<Res> {
    match (rule, m) {
        (Rule::NonErasing | Rule::Erasing, Term::App(f, _)) => {
            let Term::Lam(h, p) = &**f else { return None };
            let mut ts = Vec::new();
            let c = res_unsub(p, Target::Bound(0), 0, t, &mut ts)?;
            Some(Res::app(Res::lam_hint(*h, c), Bag::new(ts)))
        }
        (Rule::Sigma1, Term::App(..)) => {
            let Res::App(l, ns) = t else { return None };
            let Res::Lam(h, inner) = &**l else { return None };
            let Res::App(c, qs) = &**inner else { return None };
            let qs = qs.items().iter().map(|q| q.unshift(1, 0)).collect::<Option<Vec<_>>>()?;
            Some(Res::app(Res::app(Res::lam_hint(*h, (**c).clone()), ns.clone()), Bag::new(qs)))
        }
        _ => None,
    }
}

/// Fires, in `s ∈ T(m)`, every copy of the resource redex that corresponds
/// to the λ-redex of `m` at `path`. `None` on a shape mismatch or when one
/// of those resource redexes is not admitted by `kind`.
pub fn res_reduce_along(m: &Term, path: &[Dir], rule: Rule, kind: ResStrategyKind, s: &Res) -> Option<ResSum> {
    let Some((dir, rest)) = path.split_first() else {
        return res_fire(rule, kind, s);
    };
    match (dir, m, s) {
        (Dir::Body, Term::Lam(_, mb), Res::Lam(h, sb)) => {
            Some(lam_sum(*h, &res_reduce_along(mb, rest, rule, kind, sb)?))
        }
        (Dir::Fun, Term::App(p, _), Res::App(f, bag)) => {
            Some(app_sum(&res_reduce_along(p, rest, rule, kind, f)?, &BagSum::single(bag.clone())))
        }
        (Dir::Arg, Term::App(_, q), Res::App(f, bag)) => {
            let parts =
                bag.items().iter().map(|u| res_reduce_along(q, rest, rule, kind, u)).collect::<Option<Vec<_>>>()?;
            Some(app_sum(&Sum::single((**f).clone()), &bag_sum(&parts)))
        }
        _ => None,
    }
}

fn res_fire(rule: Rule, kind: ResStrategyKind, s: &Res) -> Option<ResSum> {
    let Res::App(f, bag) = s else { return None };
    match (rule, &**f) {
        (Rule::NonErasing | Rule::Erasing, Res::Lam(_, body)) => {
            let admitted = match kind {
                ResStrategyKind::Partial => true,
                ResStrategyKind::PartialNonErasing | ResStrategyKind::EpsilonNonErasing => body.mentions_bound(0),
                ResStrategyKind::PartialErasing => !body.mentions_bound(0),
                ResStrategyKind::PartialSigma1 => false,
            };
            admitted.then(|| instantiate(body, bag))
        }
        (Rule::Sigma1, Res::App(g, tb)) => {
            let Res::Lam(h, body) = &**g else { return None };
            let admitted = matches!(kind, ResStrategyKind::PartialSigma1 | ResStrategyKind::EpsilonNonErasing);
            admitted.then(|| {
                let inner = Res::app((**body).clone(), bag.shift(1, 0));
                Sum::single(Res::app(Res::lam_hint(*h, inner), tb.clone()))
            })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_rigid_approximant, is_taylor_approximant, rigid_expand, taylor_support_expand, Budget};
    use super::*;
    use crate::syntax::{parse, StrategyKind};

    fn budget(size: usize) -> Budget {
        Budget::new(size, 10_000, 100).unwrap()
    }

    fn reaches(a: &Rigid, b: &Rigid) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        let mut todo = vec![a.clone()];
        while let Some(t) = todo.pop() {
            if &t == b {
                return true;
            }
            if seen.insert(t.clone()) {
                todo.extend(t.r_successors());
            }
        }
        false
    }

    #[test]
    fn unsubstitute_round_trip() {
        let x = Sym::intern("x");
        let m = parse("\\y. x (y x)").unwrap();
        let n = parse("\\z. z w").unwrap();
        for c in rigid_expand(&m.substitute(x, &n), &budget(9)) {
            let (a, ds) = rigid_unsubstitute(&m, x, &c).unwrap();
            assert!(is_rigid_approximant(&a, &m));
            assert!(ds.iter().all(|d| is_rigid_approximant(d, &n)));
            assert_eq!(a.substitute(x, &ds), c);
        }
    }

    #[test]
    fn step_preimages_reduce_to_target() {
        let m = parse("(\\x. x (x y)) ((\\z. z) w)").unwrap();
        for step in m.steps(StrategyKind::Beta) {
            for b in rigid_expand(&step.result, &budget(8)) {
                let a = rigid_step_preimage(&m, &step.path, step.rule, &b).unwrap();
                assert!(is_rigid_approximant(&a, &m));
                assert!(reaches(&a, &b), "{a} does not reach {b}");
            }
        }
    }

    #[test]
    fn head_and_left_preimages() {
        let m = parse("(\\x. x ((\\y. y) x)) z").unwrap();
        for b in rigid_expand(&m.head_step(), &budget(8)) {
            let a = rigid_head_preimage(&m, &b).unwrap();
            assert_eq!(a.head_step(), b);
        }
        let m = parse("x ((\\y. y) z) ((\\u. u u) v)").unwrap();
        for b in rigid_expand(&m.left_parallel_step(), &budget(8)) {
            let a = rigid_left_preimage(&m, &b).unwrap();
            assert!(is_rigid_approximant(&a, &m));
            assert_eq!(a.left_parallel_step(), b);
        }
    }

    #[test]
    fn resource_round_trips() {
        let m = parse("(\\x. x x) ((\\z. z) w)").unwrap();
        for step in m.steps(StrategyKind::EpsilonNonErasing) {
            for t in taylor_support_expand(&step.result, &budget(8)) {
                if !t.is_positive() {
                    continue;
                }
                let s = res_step_preimage(&m, &step.path, step.rule, &t).unwrap();
                assert!(is_taylor_approximant(&s, &m));
                let sigma =
                    res_reduce_along(&m, &step.path, step.rule, ResStrategyKind::EpsilonNonErasing, &s).unwrap();
                assert!(sigma.contains(&t));
                assert!(sigma.support().all(|u| is_taylor_approximant(u, &step.result)));
            }
        }
    }
}
