//! Runs every registered law on a small seeded sample.
//!
//! cargo run --release --example laws -- 100 7

use lambda_taylor::analysis::{check_law, default_size_bound, LAWS};

fn main() {
    let mut args = std::env::args().skip(1);
    let cases = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut failed = false;
    for law in LAWS {
        let bound = default_size_bound(law).unwrap();
        let r = check_law(law, cases, seed, bound).unwrap();
        println!("{:<26} {:>4} held {:>4} vacuous {:>3} failed", law, r.held, r.vacuous, r.failures.len());
        for f in &r.failures {
            println!("    {} ({})", f.shrunk, f.detail);
        }
        failed |= !r.passed();
    }
    if failed {
        std::process::exit(3);
    }
}
