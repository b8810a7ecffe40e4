mod common;

use std::collections::BTreeSet;

use lambda_taylor::syntax::{parse, render, StrategyKind, Term};
use proptest::prelude::*;

/// Whether `target` is reachable from `t` by one or more β-steps, looking
/// at most `cap` terms deep.
fn beta_reaches(t: &Term, target: &Term, cap: usize) -> bool {
    let mut seen = BTreeSet::new();
    let mut frontier: Vec<Term> = t.successors(StrategyKind::Beta).into_iter().collect();
    while let Some(u) = frontier.pop() {
        if &u == target {
            return true;
        }
        if seen.len() < cap && seen.insert(u.to_debruijn()) {
            frontier.extend(u.successors(StrategyKind::Beta));
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_then_parse_is_identity(t in common::term()) {
        prop_assert_eq!(parse(&render(&t)).unwrap(), t);
    }

    #[test]
    fn head_step_fixes_head_normal_forms_and_fires_otherwise(t in common::term()) {
        let h = t.head_step();
        prop_assert_eq!(&h, &t.head_step());
        if t.is_head_normal() {
            prop_assert_eq!(h, t);
        } else {
            prop_assert!(t.successors(StrategyKind::Beta).contains(&h));
        }
    }

    #[test]
    fn erasing_and_non_erasing_partition_beta(t in common::term()) {
        let ne = t.successors(StrategyKind::NonErasing);
        let e = t.successors(StrategyKind::Erasing);
        let all: BTreeSet<Term> = ne.union(&e).cloned().collect();
        prop_assert_eq!(all, t.successors(StrategyKind::Beta));
        let ne_steps = t.steps(StrategyKind::NonErasing).len();
        let e_steps = t.steps(StrategyKind::Erasing).len();
        prop_assert_eq!(ne_steps + e_steps, t.steps(StrategyKind::Beta).len());
    }

    #[test]
    fn sigma1_keeps_free_variables(t in common::term()) {
        for u in t.successors(StrategyKind::Sigma1) {
            prop_assert_eq!(u.free_vars(), t.free_vars());
        }
    }

    #[test]
    fn left_parallel_step_makes_progress(t in common::term()) {
        let l = t.left_parallel_step();
        if t.is_beta_normal() {
            prop_assert_eq!(l, t);
        } else {
            prop_assert!(beta_reaches(&t, &l, 5_000), "{} does not reach {}", t, l);
        }
    }

    #[test]
    fn head_decomposition_reassembles(t in common::term()) {
        prop_assert_eq!(t.head_decompose().reassemble(), t);
    }

    #[test]
    fn epsilon_is_non_erasing_plus_sigma1(t in common::term()) {
        let mut both = t.successors(StrategyKind::NonErasing);
        both.extend(t.successors(StrategyKind::Sigma1));
        prop_assert_eq!(both, t.successors(StrategyKind::EpsilonNonErasing));
    }

    #[test]
    fn shift_round_trips(t in common::term(), by in 0u32..3) {
        prop_assert_eq!(t.shift(by, 0).unshift(by, 0), Some(t));
    }
}

#[test]
fn head_step_fixes_omega_without_being_normal() {
    let omega = parse("(\\x. x x) (\\x. x x)").unwrap();
    assert_eq!(omega.head_step(), omega);
    assert!(!omega.is_head_normal());
    let stuck = parse("(\\x. x x) (\\x. x x) y").unwrap();
    assert_eq!(stuck.left_parallel_step(), stuck);
    assert!(!stuck.is_beta_normal());
}

#[test]
fn closure_is_closed() {
    let t = parse("x (\\y. y z) x").unwrap();
    let c = t.closure();
    assert!(c.is_closed());
    assert_eq!(render(&c), "\\x. \\z. x (\\y. y z) x");
}
