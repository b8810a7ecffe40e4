//! The rigid reduction →r, its erasing/non-erasing split, the σ₁
//! permutation, and the head and left-parallel strategies H_r and L_r.

use std::collections::BTreeSet;

use super::{Rigid, RigidMonomial};
use crate::names::Hint;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RigidRelation {
    /// `⟨λx.a⟩b⃗ → a[b⃗/x]`.
    R,
    /// →r on redexes whose binder occurs in the body.
    NonErasing,
    /// →r on redexes whose binder does not occur in the body.
    Erasing,
    /// `⟨⟨λx.a⟩b⃗⟩q⃗ → ⟨λx.⟨a⟩q⃗⟩b⃗`.
    Sigma1,
    /// `NonErasing ∪ Sigma1`.
    EpsilonNonErasing,
}

impl RigidRelation {
    fn beta(self, erasing: bool) -> bool {
        match self {
            RigidRelation::R => true,
            RigidRelation::NonErasing | RigidRelation::EpsilonNonErasing => !erasing,
            RigidRelation::Erasing => erasing,
            RigidRelation::Sigma1 => false,
        }
    }

    fn sigma(self) -> bool {
        matches!(self, RigidRelation::Sigma1 | RigidRelation::EpsilonNonErasing)
    }
}

/// `λx₁…λx_m. ⟨…⟨core⟩b⃗₁…⟩b⃗_n` with `core` a redex or a variable, or the
/// `Zero` case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RigidHeadDecomposition {
    Zero,
    Spine { binders: Vec<Hint>, core: Rigid, args: Vec<RigidMonomial>, core_is_redex: bool },
}

impl RigidHeadDecomposition {
    pub fn reassemble(&self) -> Rigid {
        match self {
            RigidHeadDecomposition::Zero => Rigid::Zero,
            RigidHeadDecomposition::Spine { binders, core, args, .. } => {
                let spine = args.iter().fold(core.clone(), |f, ds| Rigid::app(f, ds.clone()));
                binders.iter().rev().fold(spine, |b, h| Rigid::lam_hint(*h, b))
            }
        }
    }
}

fn fire(t: &Rigid, rel: RigidRelation) -> Vec<Rigid> {
    let mut out = Vec::new();
    if let Rigid::App(f, q) = t {
        match &**f {
            Rigid::Lam(_, body) => {
                if rel.beta(!body.mentions_bound(0)) {
                    out.push(body.instantiate(q));
                }
            }
            Rigid::App(g, b) if rel.sigma() => {
                if let Rigid::Lam(h, body) = &**g {
                    let q_up: Vec<Rigid> = q.iter().map(|d| d.shift(1, 0)).collect();
                    let inner = Rigid::app((**body).clone(), q_up);
                    out.push(Rigid::app(Rigid::lam_hint(*h, inner), b.clone()));
                }
            }
            _ => {}
        }
    }
    out
}

fn contextual(t: &Rigid, rel: RigidRelation, out: &mut Vec<Rigid>) {
    out.extend(fire(t, rel));
    match t {
        Rigid::Zero | Rigid::Var(_) => {}
        Rigid::Lam(h, b) => {
            let mut inner = Vec::new();
            contextual(b, rel, &mut inner);
            out.extend(inner.into_iter().map(|r| Rigid::lam_hint(*h, r)));
        }
        Rigid::App(f, ds) => {
            let mut inner = Vec::new();
            contextual(f, rel, &mut inner);
            out.extend(inner.into_iter().map(|r| Rigid::app(r, ds.clone())));
            for (i, d) in ds.iter().enumerate() {
                let mut inner = Vec::new();
                contextual(d, rel, &mut inner);
                for r in inner {
                    let mut ds2 = ds.clone();
                    ds2[i] = r;
                    out.push(Rigid::app((**f).clone(), ds2));
                }
            }
        }
    }
}

impl Rigid {
    /// All one-step reducts under `rel`, closed under contexts.
    pub fn successors(&self, rel: RigidRelation) -> BTreeSet<Rigid> {
        let mut out = Vec::new();
        contextual(self, rel, &mut out);
        out.into_iter().collect()
    }

    pub fn r_successors(&self) -> BTreeSet<Rigid> {
        self.successors(RigidRelation::R)
    }

    pub fn sigma1_successors(&self) -> BTreeSet<Rigid> {
        self.successors(RigidRelation::Sigma1)
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Rigid::App(f, _) if matches!(**f, Rigid::Lam(..)))
    }

    /// No →r redex anywhere.
    pub fn is_normal(&self) -> bool {
        match self {
            Rigid::Zero | Rigid::Var(_) => true,
            Rigid::Lam(_, b) => b.is_normal(),
            Rigid::App(f, ds) => !self.is_redex() && f.is_normal() && ds.iter().all(Rigid::is_normal),
        }
    }

    /// The unique →r normal form, computed innermost-first.
    pub fn normal_form(&self) -> Rigid {
        match self {
            Rigid::Zero | Rigid::Var(_) => self.clone(),
            Rigid::Lam(h, b) => Rigid::lam_hint(*h, b.normal_form()),
            Rigid::App(f, ds) => {
                let f = f.normal_form();
                let ds: Vec<Rigid> = ds.iter().map(Rigid::normal_form).collect();
                match Rigid::app(f, ds) {
                    Rigid::App(f, ds) => match *f {
                        Rigid::Lam(_, body) => body.instantiate(&ds).normal_form(),
                        f => Rigid::App(Box::new(f), ds),
                    },
                    z => z,
                }
            }
        }
    }

    /// One →r step on the leftmost-innermost redex.
    pub fn innermost_step(&self) -> Option<Rigid> {
        match self {
            Rigid::Zero | Rigid::Var(_) => None,
            Rigid::Lam(h, b) => b.innermost_step().map(|b| Rigid::lam_hint(*h, b)),
            Rigid::App(f, ds) => {
                if let Some(f2) = f.innermost_step() {
                    return Some(Rigid::app(f2, ds.clone()));
                }
                for (i, d) in ds.iter().enumerate() {
                    if let Some(d2) = d.innermost_step() {
                        let mut ds2 = ds.clone();
                        ds2[i] = d2;
                        return Some(Rigid::app((**f).clone(), ds2));
                    }
                }
                match &**f {
                    Rigid::Lam(_, body) => Some(body.instantiate(ds)),
                    _ => None,
                }
            }
        }
    }

    /// The innermost reduction sequence from `self` to its normal form,
    /// both ends included.
    pub fn normalization_trace(&self) -> Vec<Rigid> {
        let mut trace = vec![self.clone()];
        while let Some(next) = trace.last().and_then(Rigid::innermost_step) {
            trace.push(next);
        }
        trace
    }

    pub fn head_decompose(&self) -> RigidHeadDecomposition {
        if self.is_zero() {
            return RigidHeadDecomposition::Zero;
        }
        let mut binders = Vec::new();
        let mut t = self;
        while let Rigid::Lam(h, b) = t {
            binders.push(*h);
            t = b;
        }
        let mut args = Vec::new();
        let mut head = t;
        while let Rigid::App(f, ds) = head {
            args.push(ds.clone());
            head = f;
        }
        args.reverse();
        if let Rigid::Lam(..) = head {
            let first = args.remove(0);
            RigidHeadDecomposition::Spine {
                binders,
                core: Rigid::App(Box::new(head.clone()), first),
                args,
                core_is_redex: true,
            }
        } else {
            RigidHeadDecomposition::Spine { binders, core: head.clone(), args, core_is_redex: false }
        }
    }

    /// Variable-headed, or `Zero`.
    pub fn is_head_normal(&self) -> bool {
        match self.head_decompose() {
            RigidHeadDecomposition::Zero => true,
            RigidHeadDecomposition::Spine { core_is_redex, .. } => !core_is_redex,
        }
    }

    /// H_r: identity on head-normal forms, otherwise fires the head redex.
    /// It never looks inside arguments.
    pub fn head_step(&self) -> Rigid {
        match self.head_decompose() {
            RigidHeadDecomposition::Spine { binders, core: Rigid::App(f, ds), args, core_is_redex: true } => {
                let Rigid::Lam(_, body) = *f else {
                    unreachable!("redex core has an abstraction in function position")
                };
                RigidHeadDecomposition::Spine { binders, core: body.instantiate(&ds), args, core_is_redex: false }
                    .reassemble()
            }
            _ => self.clone(),
        }
    }

    /// L_r: identity on normal forms, maps L_r over every argument list of a
    /// head-normal form, and fires the head redex otherwise.
    pub fn left_parallel_step(&self) -> Rigid {
        if self.is_normal() {
            return self.clone();
        }
        match self.head_decompose() {
            RigidHeadDecomposition::Spine { binders, core, args, core_is_redex: false } => {
                RigidHeadDecomposition::Spine {
                    binders,
                    core,
                    args: args.iter().map(|ds| left_parallel_monomial(ds)).collect(),
                    core_is_redex: false,
                }
                .reassemble()
            }
            _ => self.head_step(),
        }
    }

    /// Iterates H_r until a head-normal form; the sequence includes both ends.
    pub fn head_trace(&self) -> Vec<Rigid> {
        let mut trace = vec![self.clone()];
        while !trace.last().unwrap().is_head_normal() {
            let next = trace.last().unwrap().head_step();
            trace.push(next);
        }
        trace
    }

    /// Iterates L_r until a fixed point; the sequence includes both ends.
    pub fn left_trace(&self) -> Vec<Rigid> {
        let mut trace = vec![self.clone()];
        loop {
            let last = trace.last().unwrap();
            let next = last.left_parallel_step();
            if &next == last {
                return trace;
            }
            trace.push(next);
        }
    }
}

/// H_r on a monomial, componentwise.
pub fn head_step_monomial(ds: &[Rigid]) -> Vec<Rigid> {
    ds.iter().map(Rigid::head_step).collect()
}

/// L_r on a monomial, componentwise.
pub fn left_parallel_monomial(ds: &[Rigid]) -> Vec<Rigid> {
    ds.iter().map(Rigid::left_parallel_step).collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse_rigid;
    use super::*;

    fn r(s: &str) -> Rigid {
        parse_rigid(s).unwrap()
    }

    const OMEGA_R: &str = "<\\x. <x>(x)>(\\x. <x>(x))";

    #[test]
    fn r_successor_examples() {
        assert_eq!(r(OMEGA_R).r_successors(), [Rigid::Zero].into_iter().collect());
        assert_eq!(r("<\\x. x>(y)").r_successors(), [r("y")].into_iter().collect());
        assert!(r("x").r_successors().is_empty());
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(r(OMEGA_R).normal_form(), Rigid::Zero);
        assert_eq!(r("<x>()").normal_form(), r("<x>()"));
        assert_eq!(r("<\\x. <x>(x)>(\\y. y, z)").normal_form(), r("z"));
    }

    #[test]
    fn head_step_examples() {
        assert_eq!(r(OMEGA_R).head_step(), Rigid::Zero);
        let hnf = r("<x>(<\\y. y>(z))");
        assert_eq!(hnf.head_step(), hnf);
        assert_eq!(Rigid::Zero.head_step(), Rigid::Zero);
    }

    #[test]
    fn left_parallel_examples() {
        assert_eq!(r("<x>(<\\y. y>(z))").left_parallel_step(), r("<x>(z)"));
        assert_eq!(r("\\x. x").left_parallel_step(), r("\\x. x"));
        assert_eq!(r("<\\x. x>(y)").left_parallel_step(), r("y"));
    }

    #[test]
    fn head_decomposition_examples() {
        match r("\\x. <<y>(a)>(b)").head_decompose() {
            RigidHeadDecomposition::Spine { binders, core, args, core_is_redex } => {
                assert_eq!(binders.len(), 1);
                assert_eq!(core, r("y"));
                assert_eq!(args, vec![vec![r("a")], vec![r("b")]]);
                assert!(!core_is_redex);
            }
            RigidHeadDecomposition::Zero => panic!("not zero"),
        }
        let redex = r("<\\x. c>(d, e)");
        match redex.head_decompose() {
            RigidHeadDecomposition::Spine { core, args, core_is_redex, .. } => {
                assert_eq!(core, redex);
                assert!(args.is_empty());
                assert!(core_is_redex);
            }
            RigidHeadDecomposition::Zero => panic!("not zero"),
        }
        assert_eq!(Rigid::Zero.head_decompose(), RigidHeadDecomposition::Zero);
    }

    #[test]
    fn sigma1_examples() {
        assert_eq!(r("<<\\x. x>(y)>(z)").sigma1_successors(), [r("<\\x. <x>(z)>(y)")].into_iter().collect());
        assert!(r("<x>(y)").sigma1_successors().is_empty());
    }

    #[test]
    fn erasing_split() {
        let t = r("<<\\x. y>()>(<\\z. z>(w))");
        assert_eq!(t.successors(RigidRelation::Erasing), [r("<y>(<\\z. z>(w))")].into_iter().collect());
        assert_eq!(t.successors(RigidRelation::NonErasing), [r("<<\\x. y>()>(w)")].into_iter().collect());
    }

    #[test]
    fn traces_end_in_normal_forms() {
        let t = r("<\\x. <x>(<\\y. y>(x))>(<\\z. z>(w))");
        let trace = t.normalization_trace();
        assert_eq!(trace.last().unwrap(), &t.normal_form());
        assert!(trace.windows(2).all(|w| w[0].r_successors().contains(&w[1])));
        assert_eq!(t.left_trace().last().unwrap(), &t.normal_form());
    }

    #[test]
    fn redex_order_moves_occurrences() {
        let t = r("<\\a. <\\b. <z>(b, a)>(a)>(y, z)");
        let outer = r("<\\b. <z>(b, y)>(z)");
        let inner = r("<\\a. <z>(a, a)>(y, z)");
        assert_eq!(t.r_successors(), [outer.clone(), inner.clone()].into_iter().collect());
        assert_eq!(outer.normal_form(), r("<z>(z, y)"));
        assert_eq!(inner.normal_form(), r("<z>(y, z)"));
        assert_eq!(t.normal_form(), r("<z>(y, z)"));
    }
}
