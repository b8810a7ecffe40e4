//! One-step shrinking candidates for counterexamples.

use crate::names::Var;
use crate::resource::{instantiate, Bag, Res};
use crate::rigid::Rigid;
use crate::syntax::Term;

fn filler() -> Var {
    Var::free("z")
}

pub(super) fn term(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Var(_) => {}
        Term::Lam(h, b) => {
            out.push(b.instantiate(&Term::Var(filler())));
            out.extend(term(b).into_iter().map(|b| Term::Lam(*h, Box::new(b))));
        }
        Term::App(f, a) => {
            out.push((**f).clone());
            out.push((**a).clone());
            out.extend(term(f).into_iter().map(|f| Term::app(f, (**a).clone())));
            out.extend(term(a).into_iter().map(|a| Term::app((**f).clone(), a)));
        }
    }
    if t.size() > 1 {
        out.push(Term::Var(filler()));
    }
    out
}

pub(super) fn rigid(t: &Rigid) -> Vec<Rigid> {
    let mut out = Vec::new();
    match t {
        Rigid::Zero | Rigid::Var(_) => {}
        Rigid::Lam(h, b) => {
            let fill = vec![Rigid::Var(filler()); b.bound_occurrences(0)];
            out.push(b.instantiate(&fill));
            out.extend(rigid(b).into_iter().map(|b| Rigid::lam_hint(*h, b)));
        }
        Rigid::App(f, ds) => {
            out.push((**f).clone());
            out.extend(ds.iter().cloned());
            for i in 0..ds.len() {
                let mut fewer = ds.clone();
                fewer.remove(i);
                out.push(Rigid::app((**f).clone(), fewer));
            }
            out.extend(rigid(f).into_iter().map(|f| Rigid::app(f, ds.clone())));
            for (i, d) in ds.iter().enumerate() {
                for d2 in rigid(d) {
                    let mut ds2 = ds.clone();
                    ds2[i] = d2;
                    out.push(Rigid::app((**f).clone(), ds2));
                }
            }
        }
    }
    if t.size() > 1 {
        out.push(Rigid::Var(filler()));
    }
    out.retain(|c| !c.is_zero());
    out
}

pub(super) fn res(t: &Res) -> Vec<Res> {
    let mut out = Vec::new();
    match t {
        Res::Var(_) => {}
        Res::Lam(h, b) => {
            let fill = Bag::new(vec![Res::Var(filler()); b.count_bound(0)]);
            out.extend(instantiate(b, &fill).support().next().cloned());
            out.extend(res(b).into_iter().map(|b| Res::lam_hint(*h, b)));
        }
        Res::App(f, bag) => {
            let items = bag.items();
            out.push((**f).clone());
            out.extend(items.iter().cloned());
            for i in 0..items.len() {
                let mut fewer = items.to_vec();
                fewer.remove(i);
                out.push(Res::app((**f).clone(), Bag::new(fewer)));
            }
            out.extend(res(f).into_iter().map(|f| Res::app(f, bag.clone())));
            for (i, u) in items.iter().enumerate() {
                for u2 in res(u) {
                    let mut items2 = items.to_vec();
                    items2[i] = u2;
                    out.push(Res::app((**f).clone(), Bag::new(items2)));
                }
            }
        }
    }
    if t.size() > 1 {
        out.push(Res::Var(filler()));
    }
    out
}
