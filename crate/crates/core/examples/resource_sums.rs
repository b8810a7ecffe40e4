//! Resource terms and their sums: n-linear substitution, reduction to
//! normal form, and the coefficients that come out.

use lambda_taylor::names::Sym;
use lambda_taylor::resource::{n_linear_substitute, parse_bag, parse_res, ResStrategyKind};

fn main() {
    let e = parse_res("<x>[x, y]").unwrap();
    let bag = parse_bag("[a, b]").unwrap();
    let x = Sym::intern("x");
    let s = n_linear_substitute(&e, x, &bag);
    println!("{e} with x := {bag}: {s} (mass {})", s.mass());

    let empty = parse_bag("[a]").unwrap();
    println!("{e} with x := {empty}: {}", n_linear_substitute(&e, x, &empty));

    for text in ["<\\x. <x>[x]>[y, z]", "<\\x. <x>[x]>[\\y. y, \\y. y]", "<\\x. y>[z]", "<<\\x. \\y. <x>[y]>[a]>[b]"] {
        let t = parse_res(text).unwrap();
        println!("{t}");
        for kind in ResStrategyKind::ALL {
            println!("  {:<12} {}", format!("{kind}:"), t.normal_form(kind));
        }
    }
}
