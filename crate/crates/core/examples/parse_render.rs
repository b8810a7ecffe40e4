//! Parses λ-terms, prints them back with minimal parentheses and in
//! de Bruijn notation, and runs a few reduction strategies.
//!
//! cargo run --example parse_render -- "(\x. x x) ((\y. y) z)"

use lambda_taylor::syntax::{parse, StrategyKind};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "(\\x. x x) ((\\y. y) z)".into());
    let t = match parse(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("term:       {t}");
    println!("de Bruijn:  {}", t.to_debruijn());
    println!("size:       {}", t.size());
    println!("head nf:    {}", t.is_head_normal());
    println!("beta nf:    {}", t.is_beta_normal());
    println!("lambda-I:   {}", t.is_lambda_i());
    println!("H(t):       {}", t.head_step());
    println!("L(t):       {}", t.left_parallel_step());
    for kind in StrategyKind::ALL {
        let next: Vec<String> = t.successors(kind).iter().map(ToString::to_string).collect();
        println!("{:<11} {}", format!("{kind}:"), if next.is_empty() { "-".into() } else { next.join(" | ") });
    }
}
