use std::collections::BTreeSet;

use super::{Rigid, RigidMonomial};
use crate::lexer::{Cursor, ParseError, Scope, Tok};
use crate::names::{Hint, Namer, Sym};
use crate::syntax::text::{binder_taken, render_var};

/// Parses the rigid grammar:
///
/// ```text
/// rigid    := "0" | name | lam | "<" rigid ">" monomial | "(" rigid ")"
/// lam      := ("\" | "λ") name+ "." rigid
/// monomial := "(" [rigid ("," rigid)*] ")"
/// ```
pub fn parse_rigid(text: &str) -> Result<Rigid, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut scope = Scope::default();
    let t = rigid(&mut cur, &mut scope)?;
    cur.finish()?;
    Ok(t)
}

/// Parses a bare monomial `(a, b, …)`. `None` when a component is `0`.
pub fn parse_rigid_monomial(text: &str) -> Result<Option<RigidMonomial>, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut scope = Scope::default();
    let ds = monomial(&mut cur, &mut scope)?;
    cur.finish()?;
    Ok((!ds.iter().any(Rigid::is_zero)).then_some(ds))
}

fn rigid(cur: &mut Cursor, scope: &mut Scope) -> Result<Rigid, ParseError> {
    match cur.peek() {
        Some(Tok::Number(n)) if n == "0" => {
            cur.bump();
            Ok(Rigid::Zero)
        }
        Some(Tok::Name(_)) => {
            let n = cur.name()?;
            Ok(Rigid::Var(scope.resolve(&n)))
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
            let body = rigid(cur, scope);
            for _ in &binders {
                scope.pop();
            }
            let body = body?;
            Ok(binders.iter().rev().fold(body, |b, name| Rigid::lam_hint(Hint::new(name), b)))
        }
        Some(Tok::LAngle) => {
            cur.bump();
            let f = rigid(cur, scope)?;
            cur.expect(&Tok::RAngle)?;
            let ds = monomial(cur, scope)?;
            Ok(Rigid::app(f, ds))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let t = rigid(cur, scope)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("'0', a name, '\\', '<' or '('")),
    }
}

fn monomial(cur: &mut Cursor, scope: &mut Scope) -> Result<Vec<Rigid>, ParseError> {
    cur.expect(&Tok::LParen)?;
    let mut ds = Vec::new();
    if cur.eat(&Tok::RParen) {
        return Ok(ds);
    }
    loop {
        ds.push(rigid(cur, scope)?);
        if cur.eat(&Tok::RParen) {
            return Ok(ds);
        }
        cur.expect(&Tok::Comma)?;
    }
}

pub(super) fn render_rigid(t: &Rigid) -> String {
    let free = t.free_names_in_order();
    let mut out = String::new();
    go(t, &free, &mut Namer::new(), &mut out);
    out
}

pub fn render_rigid_monomial(ds: &[Rigid]) -> String {
    let mut free = Vec::new();
    for d in ds {
        for x in d.free_names_in_order() {
            if !free.contains(&x) {
                free.push(x);
            }
        }
    }
    let mut out = String::new();
    list(ds, &free, &mut Namer::new(), &mut out);
    out
}

fn list(ds: &[Rigid], free: &[Sym], namer: &mut Namer, out: &mut String) {
    out.push('(');
    for (i, d) in ds.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        go(d, free, namer, out);
    }
    out.push(')');
}

fn go(t: &Rigid, free: &[Sym], namer: &mut Namer, out: &mut String) {
    match t {
        Rigid::Zero => out.push('0'),
        Rigid::Var(v) => out.push_str(&render_var(*v, namer)),
        Rigid::Lam(h, b) => {
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
        Rigid::App(f, ds) => {
            out.push('<');
            go(f, free, namer, out);
            out.push('>');
            list(ds, free, namer, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in ["x", "<x>()", "\\x. <x>(x)", "<\\x. <x>(x)>(\\x. <x>(x))", "<<\\x. x>(y)>(z, \\w. w)", "\\x. \\x. x"]
        {
            let t = parse_rigid(s).unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(parse_rigid(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn monomials() {
        let ds = parse_rigid_monomial("(x, \\y. y)").unwrap().unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(render_rigid_monomial(&ds), "(x, \\y. y)");
        assert_eq!(parse_rigid_monomial("(x, 0)").unwrap(), None);
        assert_eq!(parse_rigid_monomial("()").unwrap(), Some(vec![]));
    }

    #[test]
    fn errors() {
        assert!(parse_rigid("<x>").is_err());
        assert!(parse_rigid("<x>(y,)").is_err());
        assert_eq!(parse_rigid("<x>(y").unwrap_err().pos, 5);
    }
}
