mod common;

use std::collections::BTreeSet;

use lambda_taylor::expansion::{
    forget, is_rigid_approximant, is_taylor_approximant, represents, rigid_expand, taylor_support_expand, Budget,
};
use lambda_taylor::rigid::Rigid;
use lambda_taylor::syntax::{parse, Term};
use proptest::prelude::*;

/// Every rigid approximant of `m` of size at most `n`, built naively.
fn naive(m: &Term, n: usize) -> Vec<Rigid> {
    if n == 0 {
        return Vec::new();
    }
    match m {
        Term::Var(v) => vec![Rigid::Var(*v)],
        Term::Lam(h, b) => naive(b, n - 1).into_iter().map(|a| Rigid::lam_hint(*h, a)).collect(),
        Term::App(p, q) => {
            let mut out = Vec::new();
            for f in naive(p, n - 1) {
                for ds in lists(q, n - 1 - f.size()) {
                    out.push(Rigid::App(Box::new(f.clone()), ds));
                }
            }
            out
        }
    }
}

fn lists(q: &Term, n: usize) -> Vec<Vec<Rigid>> {
    let mut out = vec![Vec::new()];
    for d in naive(q, n) {
        for rest in lists(q, n - d.size()) {
            let mut l = vec![d.clone()];
            l.extend(rest);
            out.push(l);
        }
    }
    out
}

fn small_term() -> impl Strategy<Value = Term> {
    common::term().prop_filter("small", |t| t.size() <= 7)
}

fn budget(n: usize) -> Budget {
    Budget::new(n, 1_000_000, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rigid_enumeration_is_sound_and_complete(m in small_term(), n in 1usize..8) {
        let got = rigid_expand(&m, &budget(n));
        for a in &got {
            prop_assert!(is_rigid_approximant(a, &m));
        }
        let got: BTreeSet<Rigid> = got.into_iter().collect();
        let want: BTreeSet<Rigid> = naive(&m, n).into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn enumeration_is_ordered_by_size(m in small_term()) {
        let got = rigid_expand(&m, &budget(7));
        prop_assert!(got.windows(2).all(|w| w[0].size() <= w[1].size()));
    }

    #[test]
    fn forgetting_order_gives_the_taylor_support(m in small_term(), n in 1usize..8) {
        let b = budget(n);
        let forgotten: BTreeSet<_> = rigid_expand(&m, &b).iter().map(|a| forget(a).unwrap()).collect();
        let support: BTreeSet<_> = taylor_support_expand(&m, &b).into_iter().collect();
        for s in &support {
            prop_assert!(is_taylor_approximant(s, &m));
        }
        prop_assert_eq!(forgotten, support);
    }

    #[test]
    fn each_rigid_term_represents_one_multiset_term(m in small_term()) {
        let b = budget(6);
        let support = taylor_support_expand(&m, &b);
        for a in rigid_expand(&m, &b) {
            let hits: Vec<_> = support.iter().filter(|s| represents(&a, s)).collect();
            prop_assert_eq!(hits.len(), 1);
            prop_assert_eq!(hits[0], &forget(&a).unwrap());
        }
    }
}

#[test]
fn truncation_keeps_the_smallest() {
    let m = parse("x (y y)").unwrap();
    let all = rigid_expand(&m, &budget(8));
    let few = rigid_expand(&m, &Budget::new(8, 3, 1).unwrap());
    assert_eq!(few, all[..3].to_vec());
}
