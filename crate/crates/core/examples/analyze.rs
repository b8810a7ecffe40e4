//! Normalization verdicts from approximants next to the direct oracles.

use lambda_taylor::analysis::{analyze, in_s, oracle, Property};
use lambda_taylor::expansion::Budget;
use lambda_taylor::syntax::parse;

const TERMS: [&str; 6] = [
    "(\\x. x) y",
    "x ((\\x. x x) (\\x. x x))",
    "(\\x. y) ((\\x. x x) (\\x. x x))",
    "(\\y. \\x. x x) z (\\x. x x)",
    "(\\n. \\f. \\x. f (n f x)) (\\f. \\x. f x)",
    "(\\x. x x) (\\x. x x)",
];

fn main() {
    let b = Budget::new(16, 50_000, 200).unwrap();
    for text in TERMS {
        let m = parse(text).unwrap();
        println!("{m}");
        for p in Property::ALL {
            let a = analyze(&m, p, &b);
            let o = oracle(&m, p, 200);
            let witness = a.witness.as_deref().unwrap_or(&a.reason);
            println!("  {:<9} analyze {:<7} oracle {:<7} {witness}", p.name(), a.outcome, o.outcome);
        }
        println!("  in S      {}", in_s(&m, 200).outcome);
    }
}
