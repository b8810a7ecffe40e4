mod common;

use lambda_taylor::analysis::{analyze, check_conservation, check_law, in_s, oracle, Outcome, Property};
use lambda_taylor::expansion::Budget;
use lambda_taylor::syntax::parse;
use proptest::prelude::*;

fn budget() -> Budget {
    Budget::new(14, 20_000, 200).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn approximant_verdicts_never_contradict_reduction(m in common::term()) {
        for p in Property::ALL {
            let a = analyze(&m, p, &budget());
            prop_assert_ne!(a.outcome, Outcome::No);
            if a.is_yes() {
                let o = oracle(&m, p, 2_000);
                prop_assert_ne!(o.outcome, Outcome::No, "{} {}: witness {:?}", p, m, a.witness);
            }
        }
    }

    #[test]
    fn beta_witness_bounds_left_steps(m in common::term()) {
        let a = analyze(&m, Property::Beta, &budget());
        if a.is_yes() {
            let o = oracle(&m, Property::Beta, 2_000);
            prop_assert!(o.is_yes());
            prop_assert!(o.budget.spent <= a.steps(), "{}: {} L-steps, witness needs {}", m, o.budget.spent, a.steps());
        }
    }

    #[test]
    fn membership_in_s_tracks_strong_normalization(m in common::term()) {
        let s = in_s(&m, 2_000);
        if s.is_yes() {
            prop_assert!(!oracle(&m, Property::Strong, 5_000).is_no());
        }
        if analyze(&m, Property::Strong, &budget()).is_yes() {
            prop_assert!(s.is_yes(), "{} has a strong witness but is not in S", m);
        }
    }

    #[test]
    fn solvable_is_head_of_the_closure(m in common::term()) {
        let a = analyze(&m, Property::Solvable, &budget());
        let b = analyze(&m.closure(), Property::Head, &budget());
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn conservation_on_lambda_i(m in common::term().prop_filter("λI", |t| t.is_lambda_i())) {
        let v = check_conservation(&m, 2_000).unwrap();
        prop_assert_ne!(v.outcome, Outcome::No, "{}", m);
    }
}

#[test]
fn conservation_rejects_erasing_terms() {
    assert!(check_conservation(&parse("\\x. y").unwrap(), 10).is_err());
}

#[test]
fn law_reports_are_reproducible() {
    for law in ["commH", "pres", "snconf"] {
        let a = check_law(law, 40, 11, 8).unwrap();
        let b = check_law(law, 40, 11, 8).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
    }
}

#[test]
fn unknown_law_is_an_error() {
    assert!(check_law("no-such-law", 1, 0, 8).is_err());
}
