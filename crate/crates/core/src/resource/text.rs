use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use super::{Bag, Res, ResSum, Sum};
use crate::lexer::{Cursor, ParseError, Scope, Tok};
use crate::names::{Hint, Namer, Sym};
use crate::syntax::text::{binder_taken, render_var};

/// Parses the resource grammar:
///
/// ```text
/// res := name | lam | "<" res ">" bag | "(" res ")"
/// lam := ("\" | "λ") name+ "." res
/// bag := "[" [res ("," res)*] "]"
/// sum := "0" | [number "*"] res ("+" [number "*"] res)*
/// ```
pub fn parse_res(text: &str) -> Result<Res, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = res(&mut cur, &mut Scope::default())?;
    cur.finish()?;
    Ok(t)
}

pub fn parse_bag(text: &str) -> Result<Bag, ParseError> {
    let mut cur = Cursor::new(text)?;
    let b = bag(&mut cur, &mut Scope::default())?;
    cur.finish()?;
    Ok(b)
}

pub fn parse_res_sum(text: &str) -> Result<ResSum, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut scope = Scope::default();
    let mut out = Sum::zero();
    if matches!(cur.peek(), Some(Tok::Number(n)) if n == "0") {
        cur.bump();
        cur.finish()?;
        return Ok(out);
    }
    loop {
        let mut coeff = BigUint::one();
        if let Some(Tok::Number(n)) = cur.peek() {
            let pos = cur.pos();
            coeff = n.parse().map_err(|_| ParseError::new(pos, format!("bad coefficient '{n}'")))?;
            cur.bump();
            cur.expect(&Tok::Star)?;
        }
        let t = res(&mut cur, &mut scope)?;
        out.add_term(t, coeff);
        if !cur.eat(&Tok::Plus) {
            break;
        }
    }
    cur.finish()?;
    Ok(out)
}

fn res(cur: &mut Cursor, scope: &mut Scope) -> Result<Res, ParseError> {
    match cur.peek() {
        Some(Tok::Name(_)) => {
            let n = cur.name()?;
            Ok(Res::Var(scope.resolve(&n)))
        }
        Some(Tok::Lambda) => {
            cur.bump();
            let mut binders = vec![cur.name()?];
            while let Some(Tok::Name(_)) = cur.peek() {
                binders.push(cur.name()?);
            }
            cur.expect(&Tok::Dot)?;
            for b in &binders {
                scope.push(b.clone());
            }
            let body = res(cur, scope);
            for _ in &binders {
                scope.pop();
            }
            let body = body?;
            Ok(binders.iter().rev().fold(body, |b, name| Res::lam_hint(Hint::new(name), b)))
        }
        Some(Tok::LAngle) => {
            cur.bump();
            let f = res(cur, scope)?;
            cur.expect(&Tok::RAngle)?;
            let b = bag(cur, scope)?;
            Ok(Res::app(f, b))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let t = res(cur, scope)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("a name, '\\', '<' or '('")),
    }
}

fn bag(cur: &mut Cursor, scope: &mut Scope) -> Result<Bag, ParseError> {
    cur.expect(&Tok::LBracket)?;
    let mut items = Vec::new();
    if !cur.eat(&Tok::RBracket) {
        loop {
            items.push(res(cur, scope)?);
            if cur.eat(&Tok::RBracket) {
                break;
            }
            cur.expect(&Tok::Comma)?;
        }
    }
    Ok(Bag::new(items))
}

pub(super) fn render_res(t: &Res) -> String {
    let free = t.free_names_in_order();
    let mut out = String::new();
    go(t, &free, &mut Namer::new(), &mut out);
    out
}

pub fn render_bag(b: &Bag) -> String {
    let mut free = Vec::new();
    for t in b.items() {
        for x in t.free_names_in_order() {
            if !free.contains(&x) {
                free.push(x);
            }
        }
    }
    let mut out = String::new();
    items(b, &free, &mut Namer::new(), &mut out);
    out
}

/// `c1*s1 + c2*s2`, coefficients of 1 omitted, `0` for the empty sum.
/// Abstractions are parenthesised unless they are the whole sum.
pub fn render_res_sum(s: &ResSum) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let alone = s.len() == 1 && s.mass().is_one();
    let mut parts = Vec::new();
    for (t, c) in s {
        let body = render_res(t);
        let body = if !alone && matches!(t, Res::Lam(..)) { format!("({body})") } else { body };
        if c.is_one() {
            parts.push(body);
        } else {
            parts.push(format!("{c}*{body}"));
        }
    }
    parts.join(" + ")
}

fn items(b: &Bag, free: &[Sym], namer: &mut Namer, out: &mut String) {
    out.push('[');
    for (i, t) in b.items().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        go(t, free, namer, out);
    }
    out.push(']');
}

fn go(t: &Res, free: &[Sym], namer: &mut Namer, out: &mut String) {
    match t {
        Res::Var(v) => out.push_str(&render_var(*v, namer)),
        Res::Lam(h, b) => {
            let mut loose = BTreeSet::new();
            b.loose_indices(0, &mut loose);
            let taken = binder_taken(&loose, free, namer);
            let name = namer.push(*h, &taken);
            out.push('\\');
            out.push_str(name.as_str());
            out.push_str(". ");
            go(b, free, namer, out);
            namer.pop();
        }
        Res::App(f, b) => {
            out.push('<');
            go(f, free, namer, out);
            out.push('>');
            items(b, free, namer, out);
        }
    }
}
