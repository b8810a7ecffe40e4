//! Reduction relations and strategies on λ-terms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::Term;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum StrategyKind {
    /// Full β. As a deterministic strategy it fires the leftmost-outermost redex.
    Beta,
    /// The head-reduction function H.
    Head,
    /// The left-parallel reduction function L.
    LeftParallel,
    /// β restricted to redexes whose binder occurs in the body.
    NonErasing,
    /// β restricted to redexes whose binder does not occur in the body.
    Erasing,
    /// `((λx.M) N) P → (λx. M P) N`.
    Sigma1,
    /// `NonErasing ∪ Sigma1`.
    EpsilonNonErasing,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 7] = [
        StrategyKind::Beta,
        StrategyKind::Head,
        StrategyKind::LeftParallel,
        StrategyKind::NonErasing,
        StrategyKind::Erasing,
        StrategyKind::Sigma1,
        StrategyKind::EpsilonNonErasing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Beta => "beta",
            StrategyKind::Head => "head",
            StrategyKind::LeftParallel => "left",
            StrategyKind::NonErasing => "non-erasing",
            StrategyKind::Erasing => "erasing",
            StrategyKind::Sigma1 => "sigma1",
            StrategyKind::EpsilonNonErasing => "epsilon-ne",
        }
    }

    fn admits(self, rule: Rule) -> bool {
        match self {
            StrategyKind::Beta | StrategyKind::Head | StrategyKind::LeftParallel => rule != Rule::Sigma1,
            StrategyKind::NonErasing => rule == Rule::NonErasing,
            StrategyKind::Erasing => rule == Rule::Erasing,
            StrategyKind::Sigma1 => rule == Rule::Sigma1,
            StrategyKind::EpsilonNonErasing => rule != Rule::Erasing,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown strategy '{s}'"))
    }
}

/// One step of a path from the root to a subterm.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dir {
    Body,
    Fun,
    Arg,
}

/// Which base rule a step fires.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    NonErasing,
    Erasing,
    Sigma1,
}

/// A located one-step reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub path: Vec<Dir>,
    pub rule: Rule,
    pub result: Term,
}

fn fire(t: &Term) -> Vec<(Rule, Term)> {
    let mut out = Vec::new();
    if let Term::App(f, a) = t {
        match &**f {
            Term::Lam(_, body) => {
                let rule = if body.mentions_bound(0) { Rule::NonErasing } else { Rule::Erasing };
                out.push((rule, body.instantiate(a)));
            }
            Term::App(g, n) => {
                if let Term::Lam(h, body) = &**g {
                    let moved = Term::app((**body).clone(), a.shift(1, 0));
                    out.push((Rule::Sigma1, Term::app(Term::Lam(*h, Box::new(moved)), (**n).clone())));
                }
            }
            Term::Var(_) => {}
        }
    }
    out
}

fn collect(t: &Term, kind: StrategyKind, path: &mut Vec<Dir>, out: &mut Vec<Step>) {
    for (rule, result) in fire(t) {
        if kind.admits(rule) {
            out.push(Step { path: path.clone(), rule, result });
        }
    }
    match t {
        Term::Var(_) => {}
        Term::Lam(h, b) => {
            path.push(Dir::Body);
            let start = out.len();
            collect(b, kind, path, out);
            for s in &mut out[start..] {
                s.result = Term::Lam(*h, Box::new(std::mem::replace(&mut s.result, Term::var("_"))));
            }
            path.pop();
        }
        Term::App(f, a) => {
            path.push(Dir::Fun);
            let start = out.len();
            collect(f, kind, path, out);
            for s in &mut out[start..] {
                let inner = std::mem::replace(&mut s.result, Term::var("_"));
                s.result = Term::app(inner, (**a).clone());
            }
            path.pop();
            path.push(Dir::Arg);
            let start = out.len();
            collect(a, kind, path, out);
            for s in &mut out[start..] {
                let inner = std::mem::replace(&mut s.result, Term::var("_"));
                s.result = Term::app((**f).clone(), inner);
            }
            path.pop();
        }
    }
}

impl Term {
    /// Every one-step reduction under the relation `kind`, with its
    /// position, in pre-order (leftmost-outermost first).
    pub fn steps(&self, kind: StrategyKind) -> Vec<Step> {
        let mut out = Vec::new();
        collect(self, kind, &mut Vec::new(), &mut out);
        out
    }

    /// The set of one-step reducts. For `Head` and `LeftParallel`, which are
    /// functions rather than relations, this is `{H(t)}` / `{L(t)}` unless
    /// `t` is already normal for them.
    pub fn successors(&self, kind: StrategyKind) -> BTreeSet<Term> {
        match kind {
            StrategyKind::Head => self.step(kind).into_iter().collect(),
            StrategyKind::LeftParallel => self.step(kind).into_iter().collect(),
            _ => self.steps(kind).into_iter().map(|s| s.result).collect(),
        }
    }

    /// One deterministic step, or `None` on a normal form for `kind`.
    pub fn step(&self, kind: StrategyKind) -> Option<Term> {
        match kind {
            StrategyKind::Head => (!self.is_head_normal()).then(|| self.head_step()),
            StrategyKind::LeftParallel => (!self.is_beta_normal()).then(|| self.left_parallel_step()),
            _ => self.steps(kind).into_iter().next().map(|s| s.result),
        }
    }

    pub fn is_normal_for(&self, kind: StrategyKind) -> bool {
        match kind {
            StrategyKind::Head => self.is_head_normal(),
            StrategyKind::LeftParallel => self.is_beta_normal(),
            _ => self.steps(kind).is_empty(),
        }
    }

    /// H: fires the head redex, identity on head-normal forms.
    pub fn head_step(&self) -> Term {
        let mut d = self.head_decompose();
        if !d.core_is_redex {
            return self.clone();
        }
        if let Term::App(f, q) = &d.core {
            if let Term::Lam(_, p) = &**f {
                d.core = p.instantiate(q);
            }
        }
        d.reassemble()
    }

    /// L: identity on β-normal forms, maps L over the arguments of a
    /// head-normal form, and fires the head redex otherwise.
    pub fn left_parallel_step(&self) -> Term {
        if self.is_beta_normal() {
            return self.clone();
        }
        let mut d = self.head_decompose();
        if d.core_is_redex {
            return self.head_step();
        }
        for a in &mut d.args {
            *a = a.left_parallel_step();
        }
        d.reassemble()
    }

    /// The subterm at `path`, if the path exists.
    pub fn at_path(&self, path: &[Dir]) -> Option<&Term> {
        let mut t = self;
        for d in path {
            t = match (t, d) {
                (Term::Lam(_, b), Dir::Body) => b,
                (Term::App(f, _), Dir::Fun) => f,
                (Term::App(_, a), Dir::Arg) => a,
                _ => return None,
            };
        }
        Some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    const OMEGA: &str = "(\\x. x x) (\\x. x x)";

    #[test]
    fn head_step_examples() {
        assert_eq!(p(OMEGA).head_step(), p(OMEGA));
        assert_eq!(p(&format!("(\\x. y) ({OMEGA})")).head_step(), p("y"));
        let hnf = p(&format!("\\z. x ({OMEGA})"));
        assert_eq!(hnf.head_step(), hnf);
    }

    #[test]
    fn left_parallel_examples() {
        assert_eq!(p("x ((\\y. y) z)").left_parallel_step(), p("x z"));
        assert_eq!(p("(\\x. x) y").left_parallel_step(), p("y"));
        let x_omega = p(&format!("x ({OMEGA})"));
        let mut t = x_omega.clone();
        for _ in 0..10 {
            t = t.left_parallel_step();
            assert_eq!(t, x_omega);
            assert!(!t.is_beta_normal());
        }
    }

    #[test]
    fn non_erasing_example_diverges_only_inside() {
        let t = p(&format!("(\\x. y) ({OMEGA})"));
        let succ = t.successors(StrategyKind::NonErasing);
        assert_eq!(succ, [t.clone()].into_iter().collect());
        let steps = t.steps(StrategyKind::NonErasing);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].path, vec![Dir::Arg]);
    }

    #[test]
    fn sigma1_example() {
        let t = p("((\\x. m x) n) q");
        assert_eq!(t.successors(StrategyKind::Sigma1), [p("(\\x. m x q) n")].into_iter().collect());
        // The moved argument is not captured by the binder it crosses.
        let t = p("((\\x. x) n) x");
        assert_eq!(t.successors(StrategyKind::Sigma1), [p("(\\y. y x) n")].into_iter().collect());
    }

    #[test]
    fn non_erasing_normal_form_example() {
        let t = p("((\\y. \\x. x x) z) (\\x. x x)");
        assert!(t.successors(StrategyKind::NonErasing).is_empty());
        assert_eq!(t.successors(StrategyKind::Erasing).len(), 1);
    }

    #[test]
    fn epsilon_is_union() {
        let t = p("((\\x. x y) ((\\z. z) w)) ((\\u. v) u)");
        let eps = t.successors(StrategyKind::EpsilonNonErasing);
        let mut union = t.successors(StrategyKind::NonErasing);
        union.extend(t.successors(StrategyKind::Sigma1));
        assert_eq!(eps, union);
    }

    #[test]
    fn paths_locate_redexes() {
        let t = p("x ((\\y. y) z)");
        let steps = t.steps(StrategyKind::Beta);
        assert_eq!(steps.len(), 1);
        assert!(t.at_path(&steps[0].path).unwrap().is_redex());
    }
}
