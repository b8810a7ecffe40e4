//! Rigid terms: Ω collapses to 0, every step shrinks the term, and the
//! normal form can depend on which redex fires first.

use lambda_taylor::rigid::{parse_rigid, Rigid};

fn show(label: &str, t: &Rigid) {
    println!("{label}: {t}");
    for (i, u) in t.normalization_trace().iter().enumerate() {
        println!("  {i}: {u} (size {})", u.size());
    }
}

fn main() {
    let omega = parse_rigid("<\\x. <x>(x)>(\\x. <x>(x))").unwrap();
    show("omega", &omega);

    let dup = parse_rigid("<\\x. <x>(x)>(\\y. y, \\y. y)").unwrap();
    show("duplicate", &dup);
    println!("  head trace: {}", dup.head_trace().iter().map(ToString::to_string).collect::<Vec<_>>().join(" -> "));

    let s = parse_rigid("<\\a. <\\b. <z>(b, a)>(a)>(y, z)").unwrap();
    println!("two normal forms from {s}:");
    let mut frontier = vec![s];
    let mut sinks = std::collections::BTreeSet::new();
    while let Some(t) = frontier.pop() {
        let next = t.r_successors();
        if next.is_empty() {
            sinks.insert(t);
        }
        frontier.extend(next);
    }
    for nf in sinks {
        println!("  {nf}");
    }
}
