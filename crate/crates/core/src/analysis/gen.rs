//! Seeded random generators for λ-terms and approximants.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::names::{Hint, Var};
use crate::resource::{Bag, Res};
use crate::rigid::Rigid;
use crate::syntax::Term;

const FREE: [&str; 3] = ["x", "y", "z"];
const BINDERS: [&str; 4] = ["a", "b", "c", "d"];

/// The generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn hint(depth: u32) -> Hint {
    Hint::new(BINDERS[depth as usize % BINDERS.len()])
}

fn var(rng: &mut impl Rng, depth: u32) -> Var {
    if depth > 0 && rng.gen_bool(0.75) {
        Var::Bound(rng.gen_range(0..depth))
    } else {
        Var::free(FREE.choose(rng).expect("non-empty"))
    }
}

/// A λ-term of exactly `size` nodes (variables count one, as do binders and
/// applications). Applications of abstractions are favoured so that most
/// terms contain redexes.
pub fn term_of_size(rng: &mut impl Rng, size: usize, depth: u32) -> Term {
    if size <= 1 {
        return Term::Var(var(rng, depth));
    }
    if size == 2 || rng.gen_bool(0.35) {
        return Term::Lam(hint(depth), Box::new(term_of_size(rng, size - 1, depth + 1)));
    }
    let left = rng.gen_range(1..size - 1);
    let f = if left >= 2 && rng.gen_bool(0.5) {
        Term::Lam(hint(depth), Box::new(term_of_size(rng, left - 1, depth + 1)))
    } else {
        term_of_size(rng, left, depth)
    };
    Term::app(f, term_of_size(rng, size - 1 - left, depth))
}

/// A λ-term of size between 1 and `bound`.
pub fn term(rng: &mut impl Rng, bound: usize) -> Term {
    let size = rng.gen_range(1..=bound.max(1));
    term_of_size(rng, size, 0)
}

/// A λI-term of size at most `bound`, by rejection.
pub fn lambda_i_term(rng: &mut impl Rng, bound: usize) -> Term {
    loop {
        let t = term(rng, bound);
        if t.is_lambda_i() {
            return t;
        }
    }
}

/// A random element of `T_r(m)`: each argument list gets up to `width`
/// members, and the total size stays near `budget` by shrinking lists.
pub fn rigid_approximant(rng: &mut impl Rng, m: &Term, width: usize, budget: usize) -> Rigid {
    match m {
        Term::Var(v) => Rigid::Var(*v),
        Term::Lam(h, b) => Rigid::lam_hint(*h, rigid_approximant(rng, b, width, budget)),
        Term::App(p, q) => {
            let f = rigid_approximant(rng, p, width, budget);
            let mut left = budget.saturating_sub(f.size());
            let mut args = Vec::new();
            for _ in 0..rng.gen_range(0..=width) {
                if left == 0 {
                    break;
                }
                let a = rigid_approximant(rng, q, width, left);
                left = left.saturating_sub(a.size());
                args.push(a);
            }
            Rigid::App(Box::new(f), args)
        }
    }
}

/// A random element of `T(m)`; with `positive` every bag is non-empty.
pub fn taylor_approximant(rng: &mut impl Rng, m: &Term, width: usize, budget: usize, positive: bool) -> Res {
    match m {
        Term::Var(v) => Res::Var(*v),
        Term::Lam(h, b) => Res::lam_hint(*h, taylor_approximant(rng, b, width, budget, positive)),
        Term::App(p, q) => {
            let f = taylor_approximant(rng, p, width, budget, positive);
            let mut left = budget.saturating_sub(f.size());
            let lo = usize::from(positive);
            let mut items = Vec::new();
            for i in 0..rng.gen_range(lo..=width.max(lo)) {
                if left == 0 && i >= lo {
                    break;
                }
                let a = taylor_approximant(rng, q, width, left, positive);
                left = left.saturating_sub(a.size());
                items.push(a);
            }
            Res::app(f, Bag::new(items))
        }
    }
}

/// A free-standing rigid term of size about `size`, not necessarily an
/// approximant of anything, with many redexes.
pub fn rigid_term(rng: &mut impl Rng, size: usize, depth: u32) -> Rigid {
    if size <= 1 {
        return Rigid::Var(var(rng, depth));
    }
    if size == 2 || rng.gen_bool(0.3) {
        return Rigid::lam_hint(hint(depth), rigid_term(rng, size - 1, depth + 1));
    }
    let inner = size - 1;
    let f_size = rng.gen_range(1..=inner);
    let f = if f_size >= 2 && rng.gen_bool(0.6) {
        Rigid::lam_hint(hint(depth), rigid_term(rng, f_size - 1, depth + 1))
    } else {
        rigid_term(rng, f_size, depth)
    };
    let mut left = inner - f_size;
    let mut args = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        args.push(rigid_term(rng, k, depth));
        left -= k;
        if rng.gen_bool(0.3) {
            break;
        }
    }
    Rigid::App(Box::new(f), args)
}

/// A rigid term of size at most `bound`.
pub fn rigid(rng: &mut impl Rng, bound: usize) -> Rigid {
    let size = rng.gen_range(1..=bound.max(1));
    rigid_term(rng, size, 0)
}

/// A resource term of size about `size`, with many redexes.
pub fn res_term(rng: &mut impl Rng, size: usize, depth: u32, positive: bool) -> Res {
    if size <= 1 {
        return Res::Var(var(rng, depth));
    }
    if size == 2 || rng.gen_bool(0.3) {
        return Res::lam_hint(hint(depth), res_term(rng, size - 1, depth + 1, positive));
    }
    let inner = size - 1;
    let max_f = if positive { inner - 1 } else { inner };
    let f_size = rng.gen_range(1..=max_f.max(1));
    let f = if f_size >= 2 && rng.gen_bool(0.6) {
        Res::lam_hint(hint(depth), res_term(rng, f_size - 1, depth + 1, positive))
    } else {
        res_term(rng, f_size, depth, positive)
    };
    let mut left = inner.saturating_sub(f_size);
    let mut items = Vec::new();
    while left > 0 {
        let k = rng.gen_range(1..=left);
        items.push(res_term(rng, k, depth, positive));
        left -= k;
        if rng.gen_bool(0.3) {
            break;
        }
    }
    Res::app(f, Bag::new(items))
}

/// A resource term of size at most `bound`.
pub fn res(rng: &mut impl Rng, bound: usize, positive: bool) -> Res {
    let size = rng.gen_range(1..=bound.max(1));
    res_term(rng, size, 0, positive)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_shapes() {
        let mut rng = case_rng(1, 0);
        for _ in 0..200 {
            let t = term(&mut rng, 8);
            assert!(t.size() <= 8);
            assert!(lambda_i_term(&mut rng, 10).is_lambda_i());
            assert!(rigid(&mut rng, 20).size() <= 20);
            let r = res(&mut rng, 14, true);
            assert!(r.size() <= 14);
            assert!(r.is_positive());
        }
    }

    #[test]
    fn approximants_belong() {
        let mut rng = case_rng(2, 0);
        for _ in 0..100 {
            let m = term(&mut rng, 8);
            let a = rigid_approximant(&mut rng, &m, 2, 16);
            assert!(crate::expansion::is_rigid_approximant(&a, &m));
            let s = taylor_approximant(&mut rng, &m, 2, 16, true);
            assert!(s.is_positive());
            assert!(crate::expansion::is_taylor_approximant(&s, &m));
        }
    }

    #[test]
    fn reproducible() {
        let a = term(&mut case_rng(5, 3), 8);
        let b = term(&mut case_rng(5, 3), 8);
        assert_eq!(a, b);
    }
}
