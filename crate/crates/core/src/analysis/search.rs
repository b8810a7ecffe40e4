//! Witness search over approximants.
//!
//! Approximants of every subterm are grouped by the normal form they reach,
//! and only the smallest member of each group is kept. Normal forms are
//! compositional (`NF(C[a]) = NF(C[NF(a)])`), so the first size at which the
//! root has a group meeting the goal is the size of a smallest witness, and
//! the kept member is one.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::Hash;
use std::rc::Rc;

use super::{BudgetUsed, Outcome, Property, Verdict, WitnessKind};
use crate::expansion::Budget;
use crate::names::{Hint, Var};
use crate::resource::{sum_successors, Bag, Normalizer, Res, ResStrategyKind, Sum};
use crate::rigid::Rigid;
use crate::syntax::Term;

trait Domain {
    type Key: Clone + Eq + Hash;
    type Approx: Clone + Ord;
    /// Bags are multisets and must be non-empty.
    const POSITIVE_BAGS: bool;

    fn var(&mut self, v: Var) -> (Self::Key, Self::Approx);
    fn lam(&mut self, h: Hint, body: &(Self::Key, Self::Approx)) -> (Self::Key, Self::Approx);
    /// `None` when the normal form is zero. The second component counts
    /// the work done.
    fn app(&mut self, f: &Self::Key, args: &[&Self::Key]) -> (Option<Self::Key>, usize);
    fn rep_app(&self, f: &Self::Approx, args: Vec<Self::Approx>) -> Self::Approx;
}

struct RigidDomain;

impl Domain for RigidDomain {
    type Key = Rigid;
    type Approx = Rigid;
    const POSITIVE_BAGS: bool = false;

    fn var(&mut self, v: Var) -> (Rigid, Rigid) {
        (Rigid::Var(v), Rigid::Var(v))
    }

    fn lam(&mut self, h: Hint, (k, a): &(Rigid, Rigid)) -> (Rigid, Rigid) {
        (Rigid::lam_hint(h, k.clone()), Rigid::lam_hint(h, a.clone()))
    }

    fn app(&mut self, f: &Rigid, args: &[&Rigid]) -> (Option<Rigid>, usize) {
        let nf = Rigid::app(f.clone(), args.iter().map(|&a| a.clone()).collect()).normal_form();
        ((!nf.is_zero()).then_some(nf), 1)
    }

    fn rep_app(&self, f: &Rigid, args: Vec<Rigid>) -> Rigid {
        Rigid::app(f.clone(), args)
    }
}

struct TaylorDomain {
    normalizer: Normalizer,
}

type Support = BTreeSet<Res>;

impl Domain for TaylorDomain {
    type Key = Support;
    type Approx = Res;
    const POSITIVE_BAGS: bool = true;

    fn var(&mut self, v: Var) -> (Support, Res) {
        ([Res::Var(v)].into_iter().collect(), Res::Var(v))
    }

    fn lam(&mut self, h: Hint, (k, a): &(Support, Res)) -> (Support, Res) {
        (k.iter().map(|t| Res::lam_hint(h, t.clone())).collect(), Res::lam_hint(h, a.clone()))
    }

    fn app(&mut self, f: &Support, args: &[&Support]) -> (Option<Support>, usize) {
        let mut bags: Vec<Vec<Res>> = vec![Vec::new()];
        for arg in args {
            let mut next = Vec::with_capacity(bags.len() * arg.len());
            for prefix in &bags {
                for t in arg.iter() {
                    let mut p = prefix.clone();
                    p.push(t.clone());
                    next.push(p);
                }
            }
            bags = next;
        }
        let bags: BTreeSet<Bag> = bags.into_iter().map(Bag::new).collect();
        let mut out = Support::new();
        for g in f {
            for bag in &bags {
                out.extend(self.normalizer.apply(g, bag).support().cloned());
            }
        }
        let work = f.len() * bags.len();
        ((!out.is_empty()).then_some(out), work)
    }

    fn rep_app(&self, f: &Res, args: Vec<Res>) -> Res {
        Res::app(f.clone(), Bag::new(args))
    }
}

struct Exhausted;

struct Node<D: Domain> {
    classes: Vec<Rc<(D::Key, D::Approx)>>,
    /// `ends[s]` is the number of classes of size at most `s`.
    ends: Vec<usize>,
    seen: HashSet<D::Key>,
}

impl<D: Domain> Node<D> {
    fn new() -> Self {
        Node { classes: Vec::new(), ends: vec![0], seen: HashSet::new() }
    }
}

type Key = *const Term;

struct Search<D: Domain> {
    dom: D,
    nodes: HashMap<Key, Node<D>>,
    lists: HashMap<(Key, usize), Rc<Vec<Vec<u32>>>>,
    spent: usize,
    cap: usize,
}

impl<D: Domain> Search<D> {
    fn new(dom: D, cap: usize) -> Self {
        Search { dom, nodes: HashMap::new(), lists: HashMap::new(), spent: 0, cap }
    }

    fn charge(&mut self, n: usize) -> Result<(), Exhausted> {
        self.spent += n;
        if self.spent > self.cap {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    fn node(&mut self, m: &Term) -> &mut Node<D> {
        self.nodes.entry(m as Key).or_insert_with(Node::new)
    }

    fn layer(&mut self, m: &Term, s: usize) -> Result<Vec<Rc<(D::Key, D::Approx)>>, Exhausted> {
        self.ensure(m, s)?;
        let node = self.node(m);
        Ok(node.classes[node.ends[s - 1]..node.ends[s]].to_vec())
    }

    fn ensure(&mut self, m: &Term, s: usize) -> Result<(), Exhausted> {
        loop {
            let done = self.node(m).ends.len() - 1;
            if done >= s {
                return Ok(());
            }
            let fresh = self.compute(m, done + 1)?;
            let node = self.node(m);
            for c in fresh {
                if node.seen.insert(c.0.clone()) {
                    node.classes.push(Rc::new(c));
                }
            }
            node.ends.push(node.classes.len());
        }
    }

    fn compute(&mut self, m: &Term, s: usize) -> Result<Vec<(D::Key, D::Approx)>, Exhausted> {
        let mut best: HashMap<D::Key, D::Approx> = HashMap::new();
        let mut offer = |k: D::Key, a: D::Approx| match best.get_mut(&k) {
            Some(old) if *old <= a => {}
            Some(old) => *old = a,
            None => {
                best.insert(k, a);
            }
        };
        match m {
            Term::Var(v) => {
                if s == 1 {
                    let (k, a) = self.dom.var(*v);
                    offer(k, a);
                }
            }
            Term::Lam(h, b) => {
                if s >= 2 {
                    for c in self.layer(b, s - 1)? {
                        let (k, a) = self.dom.lam(*h, &c);
                        offer(k, a);
                    }
                }
            }
            Term::App(p, q) => {
                for k in 1..s {
                    let t = s - 1 - k;
                    if D::POSITIVE_BAGS && t == 0 {
                        continue;
                    }
                    let fs = self.layer(p, k)?;
                    if fs.is_empty() {
                        continue;
                    }
                    let lists = self.lists(q, t)?;
                    if lists.is_empty() {
                        continue;
                    }
                    let qs = self.node(q).classes.clone();
                    for f in &fs {
                        for l in lists.iter() {
                            let args: Vec<&D::Key> = l.iter().map(|&i| &qs[i as usize].0).collect();
                            let (key, work) = self.dom.app(&f.0, &args);
                            self.charge(work)?;
                            if let Some(key) = key {
                                let reps = l.iter().map(|&i| qs[i as usize].1.clone()).collect();
                                offer(key, self.dom.rep_app(&f.1, reps));
                            }
                        }
                    }
                }
            }
        }
        let mut out: Vec<_> = best.into_iter().collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(out)
    }

    /// Argument sequences of total size `t`, as class indices of `q`.
    /// Under `POSITIVE_BAGS` only non-decreasing sequences are produced, one
    /// per multiset.
    fn lists(&mut self, q: &Term, t: usize) -> Result<Rc<Vec<Vec<u32>>>, Exhausted> {
        if let Some(hit) = self.lists.get(&(q as Key, t)) {
            return Ok(hit.clone());
        }
        let mut out = Vec::new();
        if t == 0 {
            out.push(Vec::new());
        }
        for k in 1..=t {
            self.ensure(q, k)?;
            let (lo, hi) = {
                let node = self.node(q);
                (node.ends[k - 1], node.ends[k])
            };
            if lo == hi {
                continue;
            }
            let tails = self.lists(q, t - k)?;
            for i in lo..hi {
                let i = i as u32;
                for tail in tails.iter() {
                    if D::POSITIVE_BAGS && tail.first().is_some_and(|&j| j < i) {
                        continue;
                    }
                    let mut l = Vec::with_capacity(tail.len() + 1);
                    l.push(i);
                    l.extend_from_slice(tail);
                    out.push(l);
                }
            }
            self.charge(out.len() / 64)?;
        }
        let out = Rc::new(out);
        self.lists.insert((q as Key, t), out.clone());
        Ok(out)
    }
}

enum Found<A> {
    Witness(A),
    Unknown(&'static str),
}

fn search<D: Domain>(dom: D, m: &Term, b: &Budget, goal: impl Fn(&D::Key) -> bool) -> (Found<D::Approx>, usize) {
    let mut s = Search::new(dom, b.max_count());
    for size in 1..=b.max_size() {
        let layer = match s.layer(m, size) {
            Ok(l) => l,
            Err(Exhausted) => return (Found::Unknown("count-exhausted"), s.spent),
        };
        if let Some(c) = layer.iter().filter(|c| goal(&c.0)).min_by(|x, y| x.1.cmp(&y.1)) {
            return (Found::Witness(c.1.clone()), s.spent);
        }
    }
    (Found::Unknown("size-exhausted"), s.spent)
}

fn budget_used(b: &Budget, spent: usize) -> BudgetUsed {
    BudgetUsed {
        max_size: Some(b.max_size()),
        max_count: Some(b.max_count()),
        max_steps: Some(b.max_steps()),
        fuel: None,
        spent,
    }
}

/// Searches `T_r(m)` (or the positive part of `T(m)` for `Strong`) for a
/// normalization witness, smallest first. Never answers `No`.
pub fn analyze(m: &Term, property: Property, b: &Budget) -> Verdict {
    let unknown = |reason: &str, spent| Verdict {
        property: property.name().into(),
        outcome: Outcome::Unknown,
        witness: None,
        witness_kind: None,
        trace: Vec::new(),
        budget: budget_used(b, spent),
        reason: reason.into(),
    };
    let yes = |witness: String, kind, trace, reason: &str, spent| Verdict {
        property: property.name().into(),
        outcome: Outcome::Yes,
        witness: Some(witness),
        witness_kind: Some(kind),
        trace,
        budget: budget_used(b, spent),
        reason: reason.into(),
    };
    let render_all = |ts: Vec<Rigid>| ts.iter().map(ToString::to_string).collect::<Vec<_>>();
    match property {
        Property::Head | Property::Solvable => {
            let closed;
            let target = if property == Property::Solvable {
                closed = m.closure();
                &closed
            } else {
                m
            };
            match search(RigidDomain, target, b, |_| true) {
                (Found::Witness(a), spent) => {
                    let trace = render_all(a.head_trace());
                    yes(a.to_string(), WitnessKind::Rigid, trace, "non-zero-normal-form", spent)
                }
                (Found::Unknown(r), spent) => unknown(r, spent),
            }
        }
        Property::Beta => match search(RigidDomain, m, b, Rigid::is_positive) {
            (Found::Witness(a), spent) => {
                let trace = render_all(a.left_trace());
                yes(a.to_string(), WitnessKind::Rigid, trace, "positive-normal-form", spent)
            }
            (Found::Unknown(r), spent) => unknown(r, spent),
        },
        Property::Strong => {
            let dom = TaylorDomain { normalizer: Normalizer::new(ResStrategyKind::EpsilonNonErasing) };
            match search(dom, m, b, |_| true) {
                (Found::Witness(s), spent) => {
                    let trace = sum_trace(&s, b.max_steps());
                    yes(s.to_string(), WitnessKind::Resource, trace, "non-zero-epsilon-normal-form", spent)
                }
                (Found::Unknown(r), spent) => unknown(r, spent),
            }
        }
    }
}

/// A non-erasing ε-reduction sequence from `s`, at most `max_steps` long.
fn sum_trace(s: &Res, max_steps: usize) -> Vec<String> {
    let mut cur = Sum::single(s.clone());
    let mut out = vec![cur.to_string()];
    for _ in 0..max_steps {
        let Some(next) = sum_successors(&cur, ResStrategyKind::EpsilonNonErasing).into_iter().next() else {
            break;
        };
        cur = next;
        out.push(cur.to_string());
    }
    out
}
