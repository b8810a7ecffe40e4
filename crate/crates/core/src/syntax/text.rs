use std::collections::BTreeSet;

use super::Term;
use crate::lexer::{Cursor, ParseError, Scope, Tok};
use crate::names::{Hint, Namer, Sym, Var};

/// Parses the λ-term grammar:
///
/// ```text
/// term := lam | app
/// lam  := ("\" | "λ") name+ "." term
/// app  := atom+            (a trailing lam is accepted as last argument)
/// atom := name | "(" term ")"
/// ```
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut scope = Scope::default();
    let t = term(&mut cur, &mut scope)?;
    cur.finish()?;
    Ok(t)
}

fn term(cur: &mut Cursor, scope: &mut Scope) -> Result<Term, ParseError> {
    if cur.peek() == Some(&Tok::Lambda) {
        lam(cur, scope)
    } else {
        app(cur, scope)
    }
}

fn lam(cur: &mut Cursor, scope: &mut Scope) -> Result<Term, ParseError> {
    cur.expect(&Tok::Lambda)?;
    let mut binders = vec![cur.name()?];
    while let Some(Tok::Name(_)) = cur.peek() {
        binders.push(cur.name()?);
    }
    cur.expect(&Tok::Dot)?;
    for b in &binders {
        scope.push(b.clone());
    }
    let body = term(cur, scope);
    for _ in &binders {
        scope.pop();
    }
    let body = body?;
    Ok(binders.iter().rev().fold(body, |b, name| Term::Lam(Hint::new(name), Box::new(b))))
}

fn app(cur: &mut Cursor, scope: &mut Scope) -> Result<Term, ParseError> {
    let mut acc = atom(cur, scope)?;
    loop {
        match cur.peek() {
            Some(Tok::Name(_)) | Some(Tok::LParen) => {
                let a = atom(cur, scope)?;
                acc = Term::app(acc, a);
            }
            Some(Tok::Lambda) => {
                let a = lam(cur, scope)?;
                return Ok(Term::app(acc, a));
            }
            _ => return Ok(acc),
        }
    }
}

fn atom(cur: &mut Cursor, scope: &mut Scope) -> Result<Term, ParseError> {
    match cur.peek() {
        Some(Tok::Name(_)) => {
            let n = cur.name()?;
            Ok(Term::Var(scope.resolve(&n)))
        }
        Some(Tok::LParen) => {
            cur.bump();
            let t = term(cur, scope)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("a name, '(' or '\\'")),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Fun,
    Arg,
}

pub(super) fn render(t: &Term) -> String {
    let free: Vec<Sym> = t.free_names_in_order();
    let mut namer = Namer::new();
    let mut out = String::new();
    go(t, Ctx::Top, &free, &mut namer, &mut out);
    out
}

pub(crate) fn binder_taken(body_loose: &BTreeSet<u32>, free: &[Sym], namer: &Namer) -> Vec<Sym> {
    let mut taken: Vec<Sym> = free.to_vec();
    for &k in body_loose {
        if k >= 1 {
            if let Some(s) = namer.lookup(k - 1) {
                taken.push(s);
            }
        }
    }
    taken
}

pub(crate) fn render_var(v: Var, namer: &Namer) -> String {
    match v {
        Var::Free(x) => x.to_string(),
        Var::Bound(k) => match namer.lookup(k) {
            Some(s) => s.to_string(),
            None => format!("?{}", k - namer.depth()),
        },
    }
}

fn go(t: &Term, ctx: Ctx, free: &[Sym], namer: &mut Namer, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&render_var(*v, namer)),
        Term::Lam(h, b) => {
            if ctx != Ctx::Top {
                out.push('(');
            }
            let mut loose = BTreeSet::new();
            b.loose_indices(0, &mut loose);
            let taken = binder_taken(&loose, free, namer);
            let name = namer.push(*h, &taken);
            out.push('\\');
            out.push_str(name.as_str());
            out.push_str(". ");
            go(b, Ctx::Top, free, namer, out);
            namer.pop();
            if ctx != Ctx::Top {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let paren = ctx == Ctx::Arg;
            if paren {
                out.push('(');
            }
            go(f, Ctx::Fun, free, namer, out);
            out.push(' ');
            go(a, Ctx::Arg, free, namer, out);
            if paren {
                out.push(')');
            }
        }
    }
}
