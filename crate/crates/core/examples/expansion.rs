//! Bounded rigid and Taylor expansions of a λ-term, smallest first.
//!
//! cargo run --example expansion -- "\x. x x" 9

use lambda_taylor::expansion::{forget, rigid_expand, taylor_support_expand, Budget};
use lambda_taylor::syntax::parse;

fn main() {
    let mut args = std::env::args().skip(1);
    let m = parse(&args.next().unwrap_or_else(|| "(\\x. x x) y".into())).unwrap();
    let max_size = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);
    let b = Budget::new(max_size, 50, 100).unwrap();

    println!("rigid approximants of {m} up to size {max_size}:");
    for a in rigid_expand(&m, &b) {
        println!("  {:>2}  {a}  ~  {}", a.size(), forget(&a).unwrap());
    }
    println!("Taylor support:");
    for s in taylor_support_expand(&m, &b) {
        println!("  {:>2}  {s}", s.size());
    }
}
