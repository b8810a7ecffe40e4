//! Checks that work on λ-terms directly, independent of approximants.

use std::collections::{HashMap, HashSet};

use super::{AnalysisError, BudgetUsed, Outcome, Property, Verdict, WitnessKind};
use crate::syntax::{StrategyKind, Term};

fn verdict(
    property: &str,
    outcome: Outcome,
    witness: Option<&Term>,
    trace: Vec<String>,
    fuel: usize,
    spent: usize,
    reason: &str,
) -> Verdict {
    Verdict {
        property: property.into(),
        outcome,
        witness: witness.map(ToString::to_string),
        witness_kind: witness.map(|_| WitnessKind::Lambda),
        trace,
        budget: BudgetUsed { fuel: Some(fuel), spent, ..BudgetUsed::default() },
        reason: reason.into(),
    }
}

/// Iterates a deterministic step function until `done`, an exact revisit,
/// or fuel exhaustion.
fn iterate(
    property: &str,
    m: &Term,
    fuel: usize,
    step: impl Fn(&Term) -> Term,
    done: impl Fn(&Term) -> bool,
) -> Verdict {
    let mut seen = HashSet::new();
    let mut cur = m.clone();
    let mut trace = vec![cur.to_string()];
    for spent in 0..=fuel {
        if done(&cur) {
            return verdict(property, Outcome::Yes, Some(&cur), trace, fuel, spent, "normal-form-reached");
        }
        if !seen.insert(cur.clone()) {
            return verdict(property, Outcome::No, Some(&cur), trace, fuel, spent, "cycle");
        }
        if spent == fuel {
            break;
        }
        cur = step(&cur);
        trace.push(cur.to_string());
    }
    verdict(property, Outcome::Unknown, None, trace, fuel, fuel, "fuel-exhausted")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Done,
}

/// Depth-first over the full β-graph. `Err(Some(cycle))` on a cycle,
/// `Err(None)` on fuel exhaustion.
fn explore(root: &Term, marks: &mut HashMap<Term, Mark>, fuel: usize) -> Result<(), Option<Vec<Term>>> {
    let mut stack: Vec<(Term, Vec<Term>)> = Vec::new();
    marks.insert(root.clone(), Mark::Open);
    stack.push((root.clone(), root.successors(StrategyKind::Beta).into_iter().rev().collect()));
    while let Some((_, pending)) = stack.last_mut() {
        let Some(next) = pending.pop() else {
            let (done, _) = stack.pop().expect("non-empty");
            marks.insert(done, Mark::Done);
            continue;
        };
        match marks.get(&next) {
            Some(Mark::Done) => {}
            Some(Mark::Open) => {
                let from = stack.iter().position(|(t, _)| *t == next).unwrap_or(0);
                let mut cycle: Vec<Term> = stack[from..].iter().map(|(t, _)| t.clone()).collect();
                cycle.push(next);
                return Err(Some(cycle));
            }
            None => {
                if marks.len() >= fuel {
                    return Err(None);
                }
                marks.insert(next.clone(), Mark::Open);
                let succ = next.successors(StrategyKind::Beta).into_iter().rev().collect();
                stack.push((next, succ));
            }
        }
    }
    Ok(())
}

/// Decides `property` by reducing `m` itself.
///
/// `Head` and `Beta` iterate the functions H and L; a revisit proves
/// divergence since both are deterministic. `Strong` explores the whole
/// β-graph, visiting at most `fuel` terms.
pub fn oracle(m: &Term, property: Property, fuel: usize) -> Verdict {
    let name = property.name();
    match property {
        Property::Head => iterate(name, m, fuel, Term::head_step, Term::is_head_normal),
        Property::Solvable => iterate(name, &m.closure(), fuel, Term::head_step, Term::is_head_normal),
        Property::Beta => iterate(name, m, fuel, Term::left_parallel_step, Term::is_beta_normal),
        Property::Strong => {
            let mut marks = HashMap::new();
            match explore(m, &mut marks, fuel) {
                Ok(()) => {
                    let normal = marks.keys().filter(|t| t.is_beta_normal()).min().cloned();
                    let trace = vec![format!("{} terms, finite and acyclic", marks.len())];
                    verdict(name, Outcome::Yes, normal.as_ref(), trace, fuel, marks.len(), "finite-acyclic-graph")
                }
                Err(Some(cycle)) => {
                    let trace = cycle.iter().map(ToString::to_string).collect();
                    verdict(name, Outcome::No, cycle.last(), trace, fuel, marks.len(), "cycle")
                }
                Err(None) => verdict(name, Outcome::Unknown, None, Vec::new(), fuel, marks.len(), "fuel-exhausted"),
            }
        }
    }
}

struct Membership {
    fuel: usize,
    spent: usize,
    members: HashSet<Term>,
    stack: Vec<Term>,
    trace: Vec<String>,
}

enum Stop {
    Cycle(Term),
    Fuel,
}

impl Membership {
    fn check(&mut self, m: &Term) -> Result<(), Stop> {
        if self.members.contains(m) {
            return Ok(());
        }
        if self.stack.contains(m) {
            return Err(Stop::Cycle(m.clone()));
        }
        self.spent += 1;
        if self.spent > self.fuel {
            return Err(Stop::Fuel);
        }
        self.stack.push(m.clone());
        let d = m.head_decompose();
        if d.core_is_redex {
            let Term::App(f, arg) = &d.core else { unreachable!() };
            let Term::Lam(_, body) = &**f else { unreachable!() };
            self.trace.push(format!("redex: {m}"));
            self.check(arg)?;
            let contracted = d.args.iter().fold(body.instantiate(arg), |acc, a| Term::app(acc, a.clone()));
            self.check(&contracted)?;
        } else if !d.binders.is_empty() {
            self.trace.push(format!("abstraction: {m}"));
            let Term::Lam(_, body) = m else { unreachable!() };
            self.check(body)?;
        } else {
            self.trace.push(format!("variable: {m}"));
            for a in &d.args {
                self.check(a)?;
            }
        }
        self.stack.pop();
        self.members.insert(m.clone());
        Ok(())
    }
}

/// Membership in `S`, the set generated by `x M⃗`, `λx.M` and
/// `(λx.M₀) M₁ M⃗ ⇐ M₁, M₀[M₁/x] M⃗`. Each term matches exactly one rule,
/// so a term met again while it is still being checked is not in `S`.
pub fn in_s(m: &Term, fuel: usize) -> Verdict {
    let mut run = Membership { fuel, spent: 0, members: HashSet::new(), stack: Vec::new(), trace: Vec::new() };
    match run.check(m) {
        Ok(()) => verdict("in-s", Outcome::Yes, Some(m), run.trace, fuel, run.spent, "derivation-found"),
        Err(Stop::Cycle(t)) => verdict("in-s", Outcome::No, Some(&t), run.trace, fuel, run.spent, "cycle"),
        Err(Stop::Fuel) => verdict("in-s", Outcome::Unknown, None, Vec::new(), fuel, fuel, "fuel-exhausted"),
    }
}

/// Runs the β-normalization and strong-normalization oracles on a λI-term
/// and compares them. `Yes` when both are definite and agree, `No` when
/// both are definite and disagree, `Unknown` otherwise.
pub fn check_conservation(m: &Term, fuel: usize) -> Result<Verdict, AnalysisError> {
    if !m.is_lambda_i() {
        return Err(AnalysisError::NotLambdaI(m.to_string()));
    }
    let beta = oracle(m, Property::Beta, fuel);
    let strong = oracle(m, Property::Strong, fuel);
    let trace = vec![
        format!("beta: {} ({})", beta.outcome, beta.reason),
        format!("strong: {} ({})", strong.outcome, strong.reason),
    ];
    let spent = beta.budget.spent + strong.budget.spent;
    let (outcome, reason) = match (beta.outcome, strong.outcome) {
        (Outcome::Yes, Outcome::Yes) => (Outcome::Yes, "both-normalizing"),
        (Outcome::No, Outcome::No) => (Outcome::Yes, "both-diverging"),
        (Outcome::Unknown, _) | (_, Outcome::Unknown) => (Outcome::Unknown, "undecided"),
        _ => (Outcome::No, "disagreement"),
    };
    let witness = match outcome {
        Outcome::Yes => beta.witness.clone(),
        Outcome::No => Some(m.to_string()),
        Outcome::Unknown => None,
    };
    Ok(Verdict {
        property: "conservation".into(),
        outcome,
        witness_kind: witness.as_ref().map(|_| WitnessKind::Lambda),
        witness,
        trace,
        budget: BudgetUsed { fuel: Some(fuel), spent, ..BudgetUsed::default() },
        reason: reason.into(),
    })
}
