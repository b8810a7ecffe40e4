#![allow(dead_code)]

use std::collections::HashMap;

use lambda_taylor::names::{Sym, Var};
use lambda_taylor::resource::{parse_res, Bag, Res, ResSum, Sum};
use lambda_taylor::rigid::{parse_rigid, Rigid};
use lambda_taylor::syntax::{parse, Term};
use num_bigint::BigUint;
use proptest::prelude::*;

const NAMES: [&str; 3] = ["x", "y", "z"];

fn name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&NAMES[..])
}

pub fn term_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        3 => name().prop_map(String::from),
        1 => name().prop_map(|x| format!("(\\{x}. {x} {x})")),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (name(), inner.clone()).prop_map(|(x, b)| format!("(\\{x}. {b})")),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| format!("({f} {a})")),
            (name(), inner.clone(), inner).prop_map(|(x, b, a)| format!("((\\{x}. {b}) {a})")),
        ]
    })
}

pub fn term() -> impl Strategy<Value = Term> {
    term_text().prop_map(|s| parse(&s).expect("generated text parses"))
}

fn list_text(items: Vec<String>, open: &str, close: &str) -> String {
    format!("{open}{}{close}", items.join(", "))
}

pub fn rigid_text() -> impl Strategy<Value = String> {
    name().prop_map(String::from).prop_recursive(4, 20, 3, |inner| {
        prop_oneof![
            (name(), inner.clone()).prop_map(|(x, b)| format!("\\{x}. {b}")),
            (inner.clone(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(f, ds)| format!("<{f}>{}", list_text(ds, "(", ")"))),
            (name(), inner.clone(), prop::collection::vec(inner, 0..3))
                .prop_map(|(x, b, ds)| format!("<\\{x}. {b}>{}", list_text(ds, "(", ")"))),
        ]
    })
}

pub fn rigid() -> impl Strategy<Value = Rigid> {
    rigid_text().prop_map(|s| parse_rigid(&s).expect("generated text parses"))
}

pub fn res_text(min_bag: usize) -> impl Strategy<Value = String> {
    name().prop_map(String::from).prop_recursive(4, 20, 3, move |inner| {
        prop_oneof![
            (name(), inner.clone()).prop_map(|(x, b)| format!("\\{x}. {b}")),
            (inner.clone(), prop::collection::vec(inner.clone(), min_bag..3))
                .prop_map(|(f, ds)| format!("<{f}>{}", list_text(ds, "[", "]"))),
            (name(), inner.clone(), prop::collection::vec(inner, min_bag..3))
                .prop_map(|(x, b, ds)| format!("<\\{x}. {b}>{}", list_text(ds, "[", "]"))),
        ]
    })
}

pub fn res() -> impl Strategy<Value = Res> {
    res_text(0).prop_map(|s| parse_res(&s).expect("generated text parses"))
}

pub fn positive_res() -> impl Strategy<Value = Res> {
    res_text(1).prop_map(|s| parse_res(&s).expect("generated text parses"))
}

/// Replaces the free occurrences of `x` in `e`, left to right, with the
/// given terms. `None` if the counts differ.
fn replace_in_order(e: &Res, x: Sym, with: &[Res]) -> Option<Res> {
    fn go(e: &Res, x: Sym, with: &[Res], next: &mut usize, depth: u32) -> Res {
        match e {
            Res::Var(Var::Free(y)) if *y == x => {
                let u = with[*next].shift(depth, 0);
                *next += 1;
                u
            }
            Res::Var(_) => e.clone(),
            Res::Lam(h, b) => Res::lam_hint(*h, go(b, x, with, next, depth + 1)),
            Res::App(f, bag) => {
                let f = go(f, x, with, next, depth);
                let items = bag.items().iter().map(|t| go(t, x, with, next, depth)).collect();
                Res::app(f, Bag::new(items))
            }
        }
    }
    if e.occurrences(x) != with.len() {
        return None;
    }
    let mut next = 0;
    Some(go(e, x, with, &mut next, 0))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// n-linear substitution straight from its definition: one summand per
/// permutation of the bag.
pub fn substitute_by_permutations(e: &Res, x: Sym, bag: &Bag) -> ResSum {
    let items = bag.items();
    let mut counts: HashMap<Res, u64> = HashMap::new();
    if e.occurrences(x) == items.len() {
        for p in permutations(items.len()) {
            let order: Vec<Res> = p.iter().map(|&i| items[i].clone()).collect();
            let t = replace_in_order(e, x, &order).expect("counts match");
            *counts.entry(t).or_default() += 1;
        }
    }
    let mut out = Sum::zero();
    for (t, c) in counts {
        out.add_term(t, BigUint::from(c));
    }
    out
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}
