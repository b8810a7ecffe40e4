//! Bounded enumeration of the rigid expansion `T_r(M)` and of the Taylor
//! support `T(M)`, membership tests, and the representation relation `⊲`.

mod preimage;

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::names::Sym;
use crate::resource::{n_linear_substitute, Bag, Res};
use crate::rigid::Rigid;
use crate::syntax::Term;

pub use preimage::{
    res_reduce_along, res_step_preimage, res_unsubstitute, rigid_head_preimage, rigid_left_preimage,
    rigid_step_preimage, rigid_unsubstitute,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("the zero term has no multiset image")]
    ZeroInput,
    #[error("budget field {0} must be at least 1")]
    InvalidBudget(&'static str),
}

/// Bounds for enumeration and for the analyses built on it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Budget {
    max_size: usize,
    max_count: usize,
    max_steps: usize,
}

impl Budget {
    pub fn new(max_size: usize, max_count: usize, max_steps: usize) -> Result<Budget, ExpansionError> {
        if max_size == 0 {
            return Err(ExpansionError::InvalidBudget("max_size"));
        }
        if max_count == 0 {
            return Err(ExpansionError::InvalidBudget("max_count"));
        }
        if max_steps == 0 {
            return Err(ExpansionError::InvalidBudget("max_steps"));
        }
        Ok(Budget { max_size, max_count, max_steps })
    }

    /// Same limits with a different size bound.
    pub fn with_max_size(self, max_size: usize) -> Result<Budget, ExpansionError> {
        Budget::new(max_size, self.max_count, self.max_steps)
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn max_count(&self) -> usize {
        self.max_count
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_size: 12, max_count: 100_000, max_steps: 1_000 }
    }
}

type Memo<T> = HashMap<(*const Term, usize), Rc<Vec<T>>>;

/// Approximants of exact size, memoised per subterm of one root term.
struct RigidEnum {
    exact: Memo<Rigid>,
    lists: Memo<Vec<Rigid>>,
}

impl RigidEnum {
    fn new() -> Self {
        RigidEnum { exact: HashMap::new(), lists: HashMap::new() }
    }

    fn exact(&mut self, m: &Term, n: usize) -> Rc<Vec<Rigid>> {
        let key = (m as *const Term, n);
        if let Some(hit) = self.exact.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        match m {
            Term::Var(v) => {
                if n == 1 {
                    out.push(Rigid::Var(*v));
                }
            }
            Term::Lam(h, b) => {
                if n >= 2 {
                    out.extend(self.exact(b, n - 1).iter().map(|a| Rigid::lam_hint(*h, a.clone())));
                }
            }
            Term::App(p, q) => {
                for k in 1..n {
                    let fs = self.exact(p, k);
                    if fs.is_empty() {
                        continue;
                    }
                    let lists = self.lists(q, n - 1 - k);
                    for f in fs.iter() {
                        for ds in lists.iter() {
                            out.push(Rigid::App(Box::new(f.clone()), ds.clone()));
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.exact.insert(key, out.clone());
        out
    }

    fn lists(&mut self, q: &Term, n: usize) -> Rc<Vec<Vec<Rigid>>> {
        let key = (q as *const Term, n);
        if let Some(hit) = self.lists.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(Vec::new());
        }
        for k in 1..=n {
            let heads = self.exact(q, k);
            if heads.is_empty() {
                continue;
            }
            let tails = self.lists(q, n - k);
            for h in heads.iter() {
                for t in tails.iter() {
                    let mut l = Vec::with_capacity(t.len() + 1);
                    l.push(h.clone());
                    l.extend(t.iter().cloned());
                    out.push(l);
                }
            }
        }
        let out = Rc::new(out);
        self.lists.insert(key, out.clone());
        out
    }
}

/// `T_r(m)` up to `max_size`, by increasing size then canonical order,
/// truncated to `max_count`.
pub fn rigid_expand(m: &Term, b: &Budget) -> Vec<Rigid> {
    let mut e = RigidEnum::new();
    let mut out = Vec::new();
    for n in 1..=b.max_size {
        let mut level: Vec<Rigid> = e.exact(m, n).to_vec();
        level.sort();
        for a in level {
            if out.len() == b.max_count {
                return out;
            }
            out.push(a);
        }
    }
    out
}

struct TaylorEnum {
    exact: Memo<Res>,
}

impl TaylorEnum {
    fn exact(&mut self, m: &Term, n: usize) -> Rc<Vec<Res>> {
        let key = (m as *const Term, n);
        if let Some(hit) = self.exact.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        match m {
            Term::Var(v) => {
                if n == 1 {
                    out.push(Res::Var(*v));
                }
            }
            Term::Lam(h, b) => {
                if n >= 2 {
                    out.extend(self.exact(b, n - 1).iter().map(|s| Res::lam_hint(*h, s.clone())));
                }
            }
            Term::App(p, q) => {
                if n >= 2 {
                    let mut pool = Vec::new();
                    for k in 1..n - 1 {
                        pool.extend(self.exact(q, k).iter().cloned());
                    }
                    pool.sort();
                    for k in 1..n {
                        let fs = self.exact(p, k);
                        if fs.is_empty() {
                            continue;
                        }
                        let mut bags = Vec::new();
                        multisets(&pool, n - 1 - k, 0, &mut Vec::new(), &mut bags);
                        for f in fs.iter() {
                            for bag in &bags {
                                out.push(Res::app(f.clone(), Bag::new(bag.clone())));
                            }
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.exact.insert(key, out.clone());
        out
    }
}

/// Index-nondecreasing selections from `pool` with total size `left`.
fn multisets(pool: &[Res], left: usize, from: usize, cur: &mut Vec<Res>, out: &mut Vec<Vec<Res>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for i in from..pool.len() {
        let s = pool[i].size();
        if s <= left {
            cur.push(pool[i].clone());
            multisets(pool, left - s, i, cur, out);
            cur.pop();
        }
    }
}

/// `T(m)` up to `max_size`, by increasing size then canonical order,
/// truncated to `max_count`. Bags are enumerated as multisets directly, so
/// this is the set of multiset images of the rigid enumeration.
pub fn taylor_support_expand(m: &Term, b: &Budget) -> Vec<Res> {
    let mut e = TaylorEnum { exact: HashMap::new() };
    let mut out = Vec::new();
    for n in 1..=b.max_size {
        let mut level: Vec<Res> = e.exact(m, n).to_vec();
        level.sort();
        level.dedup();
        for s in level {
            if out.len() == b.max_count {
                return out;
            }
            out.push(s);
        }
    }
    out
}

pub fn is_rigid_approximant(a: &Rigid, m: &Term) -> bool {
    match (a, m) {
        (Rigid::Var(v), Term::Var(w)) => v == w,
        (Rigid::Lam(_, a), Term::Lam(_, m)) => is_rigid_approximant(a, m),
        (Rigid::App(f, ds), Term::App(p, q)) => {
            is_rigid_approximant(f, p) && ds.iter().all(|d| is_rigid_approximant(d, q))
        }
        _ => false,
    }
}

/// Membership in `T(m)`. Bag order is irrelevant to the check, so no
/// permutation is ever enumerated.
pub fn is_taylor_approximant(s: &Res, m: &Term) -> bool {
    match (s, m) {
        (Res::Var(v), Term::Var(w)) => v == w,
        (Res::Lam(_, s), Term::Lam(_, m)) => is_taylor_approximant(s, m),
        (Res::App(f, bag), Term::App(p, q)) => {
            is_taylor_approximant(f, p) && bag.items().iter().all(|t| is_taylor_approximant(t, q))
        }
        _ => false,
    }
}

/// `a ⊲ s`.
pub fn represents(a: &Rigid, s: &Res) -> bool {
    match (a, s) {
        (Rigid::Var(v), Res::Var(w)) => v == w,
        (Rigid::Lam(_, a), Res::Lam(_, s)) => represents(a, s),
        (Rigid::App(f, ds), Res::App(g, bag)) => represents(f, g) && represents_monomial(ds, bag),
        _ => false,
    }
}

/// `(a₁,…,a_n) ⊲ [t₁,…,t_n]`: some permutation matches componentwise.
pub fn represents_monomial(ds: &[Rigid], bag: &Bag) -> bool {
    fn go(ds: &[Rigid], items: &[Res], used: &mut Vec<bool>) -> bool {
        let Some((d, rest)) = ds.split_first() else {
            return true;
        };
        for j in 0..items.len() {
            if used[j] || (j > 0 && !used[j - 1] && items[j] == items[j - 1]) {
                continue;
            }
            if represents(d, &items[j]) {
                used[j] = true;
                if go(rest, items, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    ds.len() == bag.len() && go(ds, bag.items(), &mut vec![false; bag.len()])
}

/// The multiset image of a rigid term: every list becomes a bag.
pub fn forget(a: &Rigid) -> Result<Res, ExpansionError> {
    Ok(match a {
        Rigid::Zero => return Err(ExpansionError::ZeroInput),
        Rigid::Var(v) => Res::Var(*v),
        Rigid::Lam(h, b) => Res::lam_hint(*h, forget(b)?),
        Rigid::App(f, ds) => Res::app(forget(f)?, Bag::new(ds.iter().map(forget).collect::<Result<_, _>>()?)),
    })
}

/// Lists of exactly `len` elements of `pool` whose sizes sum to at most
/// `room`.
fn bounded_lists<T: Clone>(pool: &[(T, usize)], len: usize, room: usize, sorted: bool) -> Vec<Vec<T>> {
    fn go<T: Clone>(
        pool: &[(T, usize)],
        len: usize,
        room: usize,
        from: usize,
        sorted: bool,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if len == 0 {
            out.push(cur.clone());
            return;
        }
        let start = if sorted { from } else { 0 };
        for i in start..pool.len() {
            let (t, s) = &pool[i];
            if *s <= room {
                cur.push(t.clone());
                go(pool, len - 1, room - s, i, sorted, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, len, room, 0, sorted, &mut Vec::new(), &mut out);
    out
}

/// `{ a[b⃗/x] ≠ 0 : a ∈ T_r(m), b⃗ ∈ T_r(n)^! }`, restricted to results of
/// size at most `max_size`, sorted, truncated to `max_count`.
pub fn rigid_substitution_image(m: &Term, x: Sym, n: &Term, b: &Budget) -> Vec<Rigid> {
    let pool: Vec<(Rigid, usize)> = rigid_expand(n, b)
        .into_iter()
        .map(|d| {
            let s = d.size();
            (d, s)
        })
        .collect();
    let mut out = BTreeSet::new();
    for a in rigid_expand(m, b) {
        let k = a.occurrences(x);
        let base = a.size() - k;
        if base > b.max_size {
            continue;
        }
        for ds in bounded_lists(&pool, k, b.max_size - base, false) {
            let r = a.substitute(x, &ds);
            if !r.is_zero() {
                out.insert(r);
            }
        }
    }
    let mut out: Vec<Rigid> = out.into_iter().collect();
    out.sort_by_key(|r| r.size());
    out.truncate(b.max_count);
    out
}

/// `⋃ supp(∂_x s · t̄)` over `s ∈ T(m)`, `t̄ ∈ T(n)^!`, restricted to results
/// of size at most `max_size`, sorted, truncated to `max_count`.
pub fn taylor_substitution_image(m: &Term, x: Sym, n: &Term, b: &Budget) -> Vec<Res> {
    let pool: Vec<(Res, usize)> = taylor_support_expand(n, b)
        .into_iter()
        .map(|t| {
            let s = t.size();
            (t, s)
        })
        .collect();
    let mut out = BTreeSet::new();
    for s in taylor_support_expand(m, b) {
        let k = s.occurrences(x);
        let base = s.size() - k;
        if base > b.max_size {
            continue;
        }
        for ts in bounded_lists(&pool, k, b.max_size - base, true) {
            for (u, _) in &n_linear_substitute(&s, x, &Bag::new(ts)) {
                out.insert(u.clone());
            }
        }
    }
    let mut out: Vec<Res> = out.into_iter().collect();
    out.sort_by_key(|r| r.size());
    out.truncate(b.max_count);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::parse_res;
    use crate::rigid::{parse_rigid, parse_rigid_monomial};
    use crate::syntax::parse;

    fn budget(size: usize) -> Budget {
        Budget::new(size, 10_000, 100).unwrap()
    }

    fn r(t: &str) -> Rigid {
        parse_rigid(t).unwrap()
    }

    fn s(t: &str) -> Res {
        parse_res(t).unwrap()
    }

    #[test]
    fn rigid_expand_examples() {
        assert_eq!(rigid_expand(&parse("\\x. x").unwrap(), &budget(20)), vec![r("\\x. x")]);
        assert_eq!(rigid_expand(&parse("x y").unwrap(), &budget(4)), vec![r("<x>()"), r("<x>(y)"), r("<x>(y, y)")]);
        let x_omega = parse("x ((\\x. x x) (\\x. x x))").unwrap();
        for size in 2..8 {
            assert!(rigid_expand(&x_omega, &budget(size)).contains(&r("<x>()")));
        }
    }

    #[test]
    fn truncation() {
        let b = Budget::new(6, 2, 1).unwrap();
        assert_eq!(rigid_expand(&parse("x y").unwrap(), &b).len(), 2);
        assert!(Budget::new(0, 1, 1).is_err());
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(
            taylor_support_expand(&parse("x y").unwrap(), &budget(4)),
            vec![s("<x>[]"), s("<x>[y]"), s("<x>[y, y]")]
        );
        let omega = parse("(\\x. x x) (\\x. x x)").unwrap();
        let t = taylor_support_expand(&omega, &budget(9));
        assert_eq!(t[0], s("<\\x. <x>[]>[]"));
        assert!(t.contains(&s("<\\x. <x>[x]>[\\x. <x>[x]]")));
        assert_eq!(s("<\\x. <x>[x]>[\\x. <x>[x]]").size(), 9);
    }

    #[test]
    fn membership_examples() {
        let xy = parse("x y").unwrap();
        assert!(is_rigid_approximant(&r("<x>()"), &xy));
        assert!(!is_rigid_approximant(&r("<x>(z)"), &xy));
        assert!(is_rigid_approximant(&r("\\x. <x>(x)"), &parse("\\x. x x").unwrap()));
        let x_omega = parse("x ((\\x. x x) (\\x. x x))").unwrap();
        assert!(is_taylor_approximant(&s("<x>[]"), &x_omega));
        assert!(!is_taylor_approximant(&s("<y>[]"), &x_omega));
        assert!(is_taylor_approximant(&s("<x>[y, y]"), &xy));
    }

    #[test]
    fn representation_examples() {
        assert!(represents(&r("x"), &s("x")));
        let uv = parse_rigid_monomial("(u, v)").unwrap().unwrap();
        let vu = crate::resource::parse_bag("[v, u]").unwrap();
        assert!(represents_monomial(&uv, &vu));
        assert!(!represents_monomial(&uv, &crate::resource::parse_bag("[u]").unwrap()));
        assert_eq!(forget(&r("<x>(y, y)")).unwrap(), s("<x>[y, y]"));
        assert_eq!(forget(&r("\\x. <x>(x)")).unwrap(), s("\\x. <x>[x]"));
        assert_eq!(forget(&Rigid::Zero), Err(ExpansionError::ZeroInput));
    }

    #[test]
    fn substitution_image_examples() {
        let x = Sym::intern("x");
        let y = parse("y").unwrap();
        assert_eq!(rigid_substitution_image(&parse("x").unwrap(), x, &y, &budget(6)), vec![r("y")]);
        assert_eq!(rigid_substitution_image(&parse("z").unwrap(), x, &y, &budget(6)), vec![r("z")]);
        // Every width of the outer list survives: ⟨x⟩(x,…,x) needs as many
        // copies of y as it has occurrences.
        assert_eq!(
            rigid_substitution_image(&parse("x x").unwrap(), x, &y, &budget(6)),
            rigid_expand(&parse("y y").unwrap(), &budget(6))
        );
    }
}
