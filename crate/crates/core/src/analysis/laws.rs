//! Executable statements of the metatheory, checked on seeded random cases.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{gen, shrink, AnalysisError};
use crate::expansion::{
    is_rigid_approximant, is_taylor_approximant, res_reduce_along, res_step_preimage, res_unsubstitute, rigid_expand,
    rigid_head_preimage, rigid_left_preimage, rigid_step_preimage, rigid_substitution_image, rigid_unsubstitute,
    taylor_substitution_image, taylor_support_expand, Budget,
};
use crate::names::Sym;
use crate::resource::{
    n_linear_substitute, par_sum_successors, parallel_successors_capped, sum_successors, Bag, Normalizer, Res,
    ResStrategyKind, ResSum, Sum,
};
use crate::rigid::{parse_rigid, Rigid, RigidRelation};
use crate::syntax::{StrategyKind, Term};

#[derive(Clone, Debug)]
enum Input {
    Lambda(Term),
    Rigid(Rigid),
    Res(Res),
    Fixed,
}

impl Input {
    fn size(&self) -> usize {
        match self {
            Input::Lambda(t) => t.size(),
            Input::Rigid(t) => t.size(),
            Input::Res(t) => t.size(),
            Input::Fixed => 0,
        }
    }

    fn render(&self) -> String {
        match self {
            Input::Lambda(t) => t.to_string(),
            Input::Rigid(t) => t.to_string(),
            Input::Res(t) => t.to_string(),
            Input::Fixed => "fixed instance".into(),
        }
    }

    fn smaller(&self) -> Vec<Input> {
        match self {
            Input::Lambda(t) => shrink::term(t).into_iter().map(Input::Lambda).collect(),
            Input::Rigid(t) => shrink::rigid(t).into_iter().map(Input::Rigid).collect(),
            Input::Res(t) => shrink::res(t).into_iter().map(Input::Res).collect(),
            Input::Fixed => Vec::new(),
        }
    }
}

enum Stop {
    /// The case exceeded an internal cap and says nothing.
    Skip,
    /// The case has no instance of the premise.
    Vacuous,
    Fail(String),
}

type Check = Result<(), Stop>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(Stop::Fail(format!($($fmt)+)));
        }
    };
}

#[derive(Clone, Copy)]
enum Family {
    Lambda,
    Rigid,
    Resource,
    /// Resource terms where empty bags are common.
    LooseResource,
    Fixed,
}

struct Law {
    name: &'static str,
    family: Family,
    default_bound: usize,
    /// Generated inputs are redrawn a few times until this holds.
    premise: fn(&Input) -> bool,
    eval: fn(&Input, &mut ChaCha8Rng, usize) -> Check,
}

const REGISTRY: &[Law] = &[
    Law { name: "Taysub", family: Family::Lambda, default_bound: 8, premise: any, eval: taysub },
    Law { name: "subres", family: Family::Lambda, default_bound: 8, premise: any, eval: subres },
    Law { name: "antired1", family: Family::Lambda, default_bound: 8, premise: has_beta, eval: antired1 },
    Law { name: "commH", family: Family::Lambda, default_bound: 8, premise: any, eval: comm_h },
    Law { name: "commL", family: Family::Lambda, default_bound: 8, premise: any, eval: comm_l },
    Law { name: "forcingL", family: Family::Lambda, default_bound: 8, premise: any, eval: forcing_l },
    Law { name: "standL", family: Family::Lambda, default_bound: 8, premise: any, eval: stand_l },
    Law { name: "nftohnf", family: Family::Lambda, default_bound: 8, premise: any, eval: nf_to_hnf },
    Law {
        name: "subject-expansion",
        family: Family::Lambda,
        default_bound: 8,
        premise: has_eps_ne,
        eval: subject_expansion,
    },
    Law {
        name: "subject-reduction",
        family: Family::Lambda,
        default_bound: 8,
        premise: has_eps_ne,
        eval: subject_reduction,
    },
    Law { name: "pres", family: Family::Resource, default_bound: 14, premise: pres_premise, eval: pres },
    Law { name: "epresnf", family: Family::LooseResource, default_bound: 14, premise: epresnf_premise, eval: epresnf },
    Law { name: "Taysn", family: Family::Lambda, default_bound: 8, premise: any, eval: taysn },
    Law { name: "snce", family: Family::Resource, default_bound: 14, premise: any, eval: snce },
    Law {
        name: "parallel-confluence",
        family: Family::Resource,
        default_bound: 14,
        premise: any,
        eval: parallel_confluence,
    },
    Law {
        name: "postponement",
        family: Family::LooseResource,
        default_bound: 14,
        premise: res_erasing,
        eval: postponement,
    },
    Law {
        name: "rigid-confluence-failure",
        family: Family::Fixed,
        default_bound: 0,
        premise: any,
        eval: rigid_confluence_failure,
    },
    Law { name: "snconf", family: Family::Rigid, default_bound: 20, premise: any, eval: snconf },
    Law {
        name: "postponement-rigid",
        family: Family::Rigid,
        default_bound: 14,
        premise: rigid_erasing,
        eval: postponement_rigid,
    },
];

/// Every registered law identifier.
pub const LAWS: [&str; 19] = [
    "Taysub",
    "subres",
    "antired1",
    "commH",
    "commL",
    "forcingL",
    "standL",
    "nftohnf",
    "subject-expansion",
    "subject-reduction",
    "pres",
    "epresnf",
    "Taysn",
    "snce",
    "parallel-confluence",
    "postponement",
    "rigid-confluence-failure",
    "snconf",
    "postponement-rigid",
];

/// The size bound a law is meant to run at: 8 for laws over λ-terms, 14
/// for resource terms and rigid postponement, 20 for `snconf`.
pub fn default_size_bound(law: &str) -> Option<usize> {
    REGISTRY.iter().find(|l| l.name == law).map(|l| l.default_bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub input: String,
    pub shrunk: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub cases: usize,
    pub held: usize,
    pub skipped: usize,
    pub vacuous: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    pub size_bound: usize,
    pub notes: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const CHOICE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

fn generate(family: Family, rng: &mut ChaCha8Rng, bound: usize) -> Input {
    match family {
        Family::Lambda => Input::Lambda(gen::term(rng, bound)),
        Family::Rigid => Input::Rigid(gen::rigid(rng, bound)),
        Family::Resource => {
            let positive = rng.gen_bool(0.5);
            Input::Res(gen::res(rng, bound, positive))
        }
        Family::LooseResource => Input::Res(gen::res(rng, bound, false)),
        Family::Fixed => Input::Fixed,
    }
}

const REDRAWS: usize = 64;

fn draw(law: &Law, rng: &mut ChaCha8Rng, bound: usize) -> Input {
    let mut input = generate(law.family, rng, bound);
    for _ in 1..REDRAWS {
        if (law.premise)(&input) {
            break;
        }
        input = generate(law.family, rng, bound);
    }
    input
}

fn any(_: &Input) -> bool {
    true
}

fn has_beta(input: &Input) -> bool {
    matches!(input, Input::Lambda(m) if !m.is_beta_normal())
}

fn has_eps_ne(input: &Input) -> bool {
    matches!(input, Input::Lambda(m) if !m.is_normal_for(StrategyKind::EpsilonNonErasing))
}

fn pres_premise(input: &Input) -> bool {
    matches!(input, Input::Res(s) if s.is_positive() && !s.is_normal_for(ResStrategyKind::EpsilonNonErasing))
}

fn epresnf_premise(input: &Input) -> bool {
    let Input::Res(s) = input else { return false };
    let mut norm = Normalizer::new(ResStrategyKind::EpsilonNonErasing);
    s.successors(ResStrategyKind::PartialErasing).iter().any(|sigma| !sigma.is_zero() && norm.sum(sigma).is_zero())
}

fn res_erasing(input: &Input) -> bool {
    matches!(input, Input::Res(s) if !s.is_normal_for(ResStrategyKind::PartialErasing))
}

fn rigid_erasing(input: &Input) -> bool {
    matches!(input, Input::Rigid(s) if !s.successors(RigidRelation::Erasing).is_empty())
}

fn run(law: &Law, input: &Input, seed: u64, case: usize, bound: usize) -> Check {
    let mut rng = gen::case_rng(seed ^ CHOICE_STREAM, case as u64);
    (law.eval)(input, &mut rng, bound)
}

fn minimize(law: &Law, input: Input, seed: u64, case: usize, bound: usize) -> (Input, String) {
    let mut cur = input;
    let mut detail = String::new();
    'outer: for _ in 0..200 {
        for cand in cur.smaller() {
            if cand.size() >= cur.size() {
                continue;
            }
            if let Err(Stop::Fail(d)) = run(law, &cand, seed, case, bound) {
                cur = cand;
                detail = d;
                continue 'outer;
            }
        }
        break;
    }
    (cur, detail)
}

/// Runs `cases` seeded instances of `law`. The report is identical for a
/// fixed seed whatever the thread scheduling.
pub fn check_law(law: &str, cases: usize, seed: u64, size_bound: usize) -> Result<LawReport, AnalysisError> {
    let l = REGISTRY.iter().find(|l| l.name == law).ok_or_else(|| AnalysisError::UnknownLaw(law.to_string()))?;
    let cases = if matches!(l.family, Family::Fixed) { 1 } else { cases };
    let results: Vec<(usize, Input, Check)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let input = draw(l, &mut gen::case_rng(seed, i as u64), size_bound);
            let out = run(l, &input, seed, i, size_bound);
            (i, input, out)
        })
        .collect();
    let mut report = LawReport {
        law: l.name.to_string(),
        cases,
        held: 0,
        skipped: 0,
        vacuous: 0,
        failures: Vec::new(),
        seed,
        size_bound,
        notes: Vec::new(),
    };
    for (i, input, out) in results {
        match out {
            Ok(()) => report.held += 1,
            Err(Stop::Skip) => report.skipped += 1,
            Err(Stop::Vacuous) => report.vacuous += 1,
            Err(Stop::Fail(detail)) => {
                let (small, small_detail) = minimize(l, input.clone(), seed, i, size_bound);
                report.failures.push(Failure {
                    case: i,
                    input: input.render(),
                    shrunk: small.render(),
                    detail: if small_detail.is_empty() { detail } else { small_detail },
                });
            }
        }
    }
    if matches!(l.family, Family::Fixed) {
        let (sigma_first, r_first) = confluence_sequences();
        report.notes.push(format!("sigma1 first: {}", join(&sigma_first)));
        report.notes.push(format!("r first: {}", join(&r_first)));
    }
    Ok(report)
}

fn join(ts: &[Rigid]) -> String {
    ts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" -> ")
}

fn lambda(input: &Input) -> Result<&Term, Stop> {
    match input {
        Input::Lambda(t) => Ok(t),
        _ => Err(Stop::Skip),
    }
}

const TRIALS: usize = 4;
const EXPAND_CAP: usize = 20_000;
const GRAPH_CAP: usize = 20_000;

fn approx_budget(bound: usize) -> usize {
    3 * bound
}

fn taysub(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let x = Sym::intern("x");
    let n = gen::term(rng, bound / 2 + 1);
    let mn = m.substitute(x, &n);
    for _ in 0..TRIALS {
        let a = gen::rigid_approximant(rng, m, 2, approx_budget(bound));
        let ds: Vec<Rigid> = (0..a.occurrences(x)).map(|_| gen::rigid_approximant(rng, &n, 2, bound)).collect();
        let c = a.substitute(x, &ds);
        ensure!(!c.is_zero() && is_rigid_approximant(&c, &mn), "{a} with {ds:?} gives {c}, not in T_r({mn})");
        let c = gen::rigid_approximant(rng, &mn, 2, approx_budget(bound));
        let Some((a, ds)) = rigid_unsubstitute(m, x, &c) else {
            return Err(Stop::Fail(format!("{c} in T_r({mn}) has no preimage")));
        };
        ensure!(is_rigid_approximant(&a, m), "preimage {a} not in T_r({m})");
        ensure!(ds.iter().all(|d| is_rigid_approximant(d, &n)), "arguments of {c} not in T_r({n})");
        ensure!(a.substitute(x, &ds) == c, "{a} does not substitute back to {c}");
    }
    let b = Budget::new(9, EXPAND_CAP, 1).expect("valid");
    let lhs: BTreeSet<Rigid> = rigid_expand(&mn, &b).into_iter().collect();
    let rhs: BTreeSet<Rigid> = rigid_substitution_image(m, x, &n, &b).into_iter().collect();
    let truncated =
        [lhs.len(), rhs.len(), rigid_expand(m, &b).len(), rigid_expand(&n, &b).len()].iter().any(|&k| k >= EXPAND_CAP);
    if !truncated {
        ensure!(lhs == rhs, "bounded T_r({mn}) differs from T_r({m})[T_r({n})/x]");
    }
    Ok(())
}

fn subres(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let x = Sym::intern("x");
    let n = gen::term(rng, bound / 2 + 1);
    let mn = m.substitute(x, &n);
    for _ in 0..TRIALS {
        let s = gen::taylor_approximant(rng, m, 2, approx_budget(bound), false);
        let width = s.occurrences(x) + usize::from(rng.gen_bool(0.2));
        let items: Vec<Res> = (0..width).map(|_| gen::taylor_approximant(rng, &n, 2, bound, false)).collect();
        let image = n_linear_substitute(&s, x, &Bag::new(items));
        for u in image.support() {
            ensure!(is_taylor_approximant(u, &mn), "{u} from {s} not in T({mn})");
        }
        let u = gen::taylor_approximant(rng, &mn, 2, approx_budget(bound), false);
        let Some((s, bag)) = res_unsubstitute(m, x, &u) else {
            return Err(Stop::Fail(format!("{u} in T({mn}) has no preimage")));
        };
        ensure!(is_taylor_approximant(&s, m), "preimage {s} not in T({m})");
        ensure!(bag.items().iter().all(|t| is_taylor_approximant(t, &n)), "bag {bag} not in T({n})!");
        ensure!(n_linear_substitute(&s, x, &bag).contains(&u), "{u} not in the support of {s} with {bag}");
    }
    let b = Budget::new(9, EXPAND_CAP, 1).expect("valid");
    let lhs: BTreeSet<Res> = taylor_support_expand(&mn, &b).into_iter().collect();
    let rhs: BTreeSet<Res> = taylor_substitution_image(m, x, &n, &b).into_iter().collect();
    let truncated = [lhs.len(), rhs.len(), taylor_support_expand(m, &b).len(), taylor_support_expand(&n, &b).len()]
        .iter()
        .any(|&k| k >= EXPAND_CAP);
    if !truncated {
        ensure!(lhs == rhs, "bounded T({mn}) differs from T({m})[T({n})!/x]");
    }
    Ok(())
}

/// Whether `b` is reachable from `a` by →r, or `None` past the cap.
fn rigid_reaches(a: &Rigid, b: &Rigid, cap: usize) -> Option<bool> {
    let mut seen = HashSet::new();
    let mut todo = vec![a.clone()];
    while let Some(t) = todo.pop() {
        if &t == b {
            return Some(true);
        }
        if t.size() < b.size() {
            continue;
        }
        if seen.insert(t.clone()) {
            if seen.len() > cap {
                return None;
            }
            todo.extend(t.r_successors());
        }
    }
    Some(false)
}

fn antired1(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let steps = m.steps(StrategyKind::Beta);
    let Some(step) = steps.choose(rng) else { return Err(Stop::Vacuous) };
    for _ in 0..TRIALS {
        let b = gen::rigid_approximant(rng, &step.result, 2, approx_budget(bound));
        let Some(a) = rigid_step_preimage(m, &step.path, step.rule, &b) else {
            return Err(Stop::Fail(format!("{b} in T_r({}) has no preimage", step.result)));
        };
        ensure!(is_rigid_approximant(&a, m), "preimage {a} not in T_r({m})");
        match rigid_reaches(&a, &b, GRAPH_CAP) {
            None => return Err(Stop::Skip),
            Some(ok) => ensure!(ok, "{a} does not reduce to {b}"),
        }
    }
    Ok(())
}

fn comm(
    input: &Input,
    rng: &mut ChaCha8Rng,
    bound: usize,
    step: fn(&Term) -> Term,
    rigid_step: fn(&Rigid) -> Rigid,
    preimage: fn(&Term, &Rigid) -> Option<Rigid>,
) -> Check {
    let m = lambda(input)?;
    let next = step(m);
    for _ in 0..TRIALS {
        let a = gen::rigid_approximant(rng, m, 2, approx_budget(bound));
        let image = rigid_step(&a);
        ensure!(image.is_zero() || is_rigid_approximant(&image, &next), "{a} steps to {image}, not in T_r({next})");
        let b = gen::rigid_approximant(rng, &next, 2, approx_budget(bound));
        let Some(a) = preimage(m, &b) else {
            return Err(Stop::Fail(format!("{b} in T_r({next}) has no preimage")));
        };
        ensure!(is_rigid_approximant(&a, m), "preimage {a} not in T_r({m})");
        ensure!(rigid_step(&a) == b, "preimage {a} steps to {}, not {b}", rigid_step(&a));
    }
    Ok(())
}

fn comm_h(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    comm(input, rng, bound, Term::head_step, Rigid::head_step, rigid_head_preimage)
}

fn comm_l(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    comm(input, rng, bound, Term::left_parallel_step, Rigid::left_parallel_step, rigid_left_preimage)
}

fn forcing_l(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let b = Budget::new(bound + 2, 5_000, 1).expect("valid");
    let mut candidates = rigid_expand(m, &b);
    candidates.extend((0..TRIALS).map(|_| gen::rigid_approximant(rng, m, 2, approx_budget(bound))));
    for a in candidates {
        if a.is_positive() && a.is_normal() {
            ensure!(m.is_beta_normal(), "{a} is a positive normal approximant of the non-normal {m}");
        }
    }
    Ok(())
}

fn stand_l(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    for _ in 0..TRIALS {
        let a = gen::rigid_approximant(rng, m, 2, approx_budget(bound));
        let trace = a.left_trace();
        let nf = a.normal_form();
        ensure!(trace.last() == Some(&nf), "L_r iteration from {a} misses its normal form {nf}");
    }
    Ok(())
}

fn nf_to_hnf(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    for _ in 0..TRIALS {
        let a = gen::rigid_approximant(rng, m, 2, approx_budget(bound));
        if !a.normal_form().is_zero() {
            let last = a.head_trace().pop().expect("non-empty trace");
            ensure!(!last.is_zero() && last.is_head_normal(), "{a} has a non-zero normal form but H_r ends in {last}");
        }
    }
    Ok(())
}

fn support_in(sum: &ResSum, m: &Term) -> bool {
    sum.support().all(|t| is_taylor_approximant(t, m))
}

fn subject_expansion(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let steps = m.steps(StrategyKind::EpsilonNonErasing);
    let Some(step) = steps.choose(rng) else { return Err(Stop::Vacuous) };
    let n = &step.result;
    for _ in 0..TRIALS {
        let t0 = gen::taylor_approximant(rng, n, 2, approx_budget(bound), true);
        let Some(s) = res_step_preimage(m, &step.path, step.rule, &t0) else {
            return Err(Stop::Fail(format!("{t0} in T({n}) has no preimage")));
        };
        ensure!(is_taylor_approximant(&s, m), "preimage {s} not in T({m})");
        let Some(sigma) = res_reduce_along(m, &step.path, step.rule, ResStrategyKind::EpsilonNonErasing, &s) else {
            return Err(Stop::Fail(format!("{s} does not reduce along the step")));
        };
        ensure!(sigma.contains(&t0), "{s} reduces to {sigma}, missing {t0}");
        ensure!(support_in(&sigma, n), "{s} reduces to {sigma}, outside T({n})");
    }
    Ok(())
}

fn subject_reduction(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let steps = m.steps(StrategyKind::EpsilonNonErasing);
    let Some(step) = steps.choose(rng) else { return Err(Stop::Vacuous) };
    let n = &step.result;
    for _ in 0..TRIALS {
        let s = gen::taylor_approximant(rng, m, 2, approx_budget(bound), true);
        let Some(sigma) = res_reduce_along(m, &step.path, step.rule, ResStrategyKind::EpsilonNonErasing, &s) else {
            return Err(Stop::Fail(format!("positive {s} has an erasing copy of the redex")));
        };
        ensure!(support_in(&sigma, n), "{s} reduces to {sigma}, outside T({n})");
        let before = s.nf_eps_nonerasing();
        let after = Normalizer::new(ResStrategyKind::EpsilonNonErasing).sum(&sigma);
        ensure!(before == after, "{s} and its reduct {sigma} normalize to {before} and {after}");
    }
    Ok(())
}

fn res_input(input: &Input) -> Result<&Res, Stop> {
    match input {
        Input::Res(t) => Ok(t),
        _ => Err(Stop::Skip),
    }
}

fn pres(input: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let s = res_input(input)?;
    let succ = s.successors(ResStrategyKind::EpsilonNonErasing);
    if !s.is_positive() || succ.is_empty() {
        return Err(Stop::Vacuous);
    }
    for sigma in succ {
        for t in sigma.support() {
            ensure!(t.is_positive(), "positive {s} reduces to non-positive {t}");
        }
    }
    Ok(())
}

fn epresnf(input: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let s = res_input(input)?;
    let mut norm = Normalizer::new(ResStrategyKind::EpsilonNonErasing);
    let mut premise = false;
    for sigma in s.successors(ResStrategyKind::PartialErasing) {
        if !sigma.is_zero() && norm.sum(&sigma).is_zero() {
            premise = true;
            let nf = norm.term(s);
            ensure!(nf.is_zero(), "{s} erases to {sigma} with zero normal form, yet normalizes to {nf}");
        }
    }
    if premise {
        Ok(())
    } else {
        Err(Stop::Vacuous)
    }
}

/// Normalizes `m` by leftmost non-erasing ε-steps, recording the steps.
fn eps_chain(m: &Term, fuel: usize, max_size: usize) -> Option<Vec<(Term, crate::syntax::Step)>> {
    let mut chain = Vec::new();
    let mut cur = m.clone();
    for _ in 0..fuel {
        let Some(step) = cur.steps(StrategyKind::EpsilonNonErasing).into_iter().next() else {
            return Some(chain);
        };
        if step.result.size() > max_size {
            return None;
        }
        let next = step.result.clone();
        chain.push((cur, step));
        cur = next;
    }
    None
}

fn taysn(input: &Input, rng: &mut ChaCha8Rng, bound: usize) -> Check {
    let m = lambda(input)?;
    let Some(chain) = eps_chain(m, 50, 10 * bound) else { return Err(Stop::Skip) };
    let n = chain.last().map_or(m, |(_, s)| &s.result);
    let t0 = gen::taylor_approximant(rng, n, 2, approx_budget(bound), true);
    let mut s = t0.clone();
    for (mi, step) in chain.iter().rev() {
        s = res_step_preimage(mi, &step.path, step.rule, &s)
            .ok_or_else(|| Stop::Fail(format!("no preimage of {s} along {mi} -> {}", step.result)))?;
    }
    ensure!(is_taylor_approximant(&s, m), "back-propagated {s} not in T({m})");
    let nf = s.nf_eps_nonerasing();
    ensure!(nf.contains(&t0), "{s} normalizes to {nf}, missing {t0}");
    ensure!(nf.support().any(Res::is_positive), "{s} has no positive normal summand");
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Done,
}

/// Over the graph whose nodes are terms and whose edges go to the support
/// of each reduct, checks acyclicity and that every way of reducing a term
/// ends in one and the same sum.
struct SingleSink {
    marks: HashMap<Res, Mark>,
    nf: HashMap<Res, ResSum>,
}

impl SingleSink {
    fn visit(&mut self, t: &Res) -> Result<ResSum, Stop> {
        match self.marks.get(t) {
            Some(Mark::Done) => return Ok(self.nf[t].clone()),
            Some(Mark::Open) => return Err(Stop::Fail(format!("reduction cycle through {t}"))),
            None => {}
        }
        if self.marks.len() > GRAPH_CAP {
            return Err(Stop::Skip);
        }
        self.marks.insert(t.clone(), Mark::Open);
        let mut sinks = BTreeSet::new();
        let succ = t.successors(ResStrategyKind::EpsilonNonErasing);
        if succ.is_empty() {
            sinks.insert(Sum::single(t.clone()));
        }
        for sigma in succ {
            let mut total = Sum::zero();
            for (u, c) in &sigma {
                total.add_sum(&self.visit(u)?.scaled(c));
            }
            sinks.insert(total);
        }
        ensure!(sinks.len() == 1, "{t} has several normal forms: {sinks:?}");
        let nf = sinks.into_iter().next().expect("one sink");
        self.marks.insert(t.clone(), Mark::Done);
        self.nf.insert(t.clone(), nf.clone());
        Ok(nf)
    }
}

fn snce(input: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let s = res_input(input)?;
    let mut g = SingleSink { marks: HashMap::new(), nf: HashMap::new() };
    let nf = g.visit(s)?;
    ensure!(nf == s.nf_eps_nonerasing(), "graph sink {nf} differs from the innermost normal form");
    Ok(())
}

const PAR_CAP: usize = 2_000;

fn par_step_all(sums: &BTreeSet<ResSum>) -> Option<BTreeSet<ResSum>> {
    let mut out = BTreeSet::new();
    for s in sums {
        out.extend(par_sum_successors(s, PAR_CAP)?);
        if out.len() > PAR_CAP {
            return None;
        }
    }
    Some(out)
}

fn parallel_confluence(input: &Input, rng: &mut ChaCha8Rng, _: usize) -> Check {
    let s = res_input(input)?;
    let Some(par) = parallel_successors_capped(s, PAR_CAP) else { return Err(Stop::Skip) };
    for step in s.successors(ResStrategyKind::EpsilonNonErasing) {
        ensure!(par.contains(&step), "one step {s} -> {step} is not a parallel step");
    }
    let mut norm = Normalizer::new(ResStrategyKind::EpsilonNonErasing);
    let nf = norm.term(s);
    for sigma in &par {
        ensure!(norm.sum(sigma) == nf, "parallel step {s} => {sigma} changes the normal form");
    }
    let par: Vec<&ResSum> = par.iter().collect();
    for _ in 0..TRIALS {
        let (a, b) = (par.choose(rng).expect("reflexive"), par.choose(rng).expect("reflexive"));
        let mut left: BTreeSet<ResSum> = [(*a).clone()].into_iter().collect();
        let mut right: BTreeSet<ResSum> = [(*b).clone()].into_iter().collect();
        let mut joined = false;
        for _ in 0..2 {
            let (Some(l), Some(r)) = (par_step_all(&left), par_step_all(&right)) else {
                return Err(Stop::Skip);
            };
            left = l;
            right = r;
            if !left.is_disjoint(&right) {
                joined = true;
                break;
            }
        }
        ensure!(joined, "{a} and {b} from {s} have no common parallel reduct");
    }
    Ok(())
}

fn rigid_reach(from: &Rigid, rel: RigidRelation) -> Option<BTreeSet<Rigid>> {
    let mut seen = BTreeSet::new();
    let mut todo = VecDeque::from([from.clone()]);
    while let Some(t) = todo.pop_front() {
        if seen.insert(t.clone()) {
            if seen.len() > GRAPH_CAP {
                return None;
            }
            todo.extend(t.successors(rel));
        }
    }
    Some(seen)
}

/// Every copy of every summand takes at most one step from `options`.
fn per_copy(sum: &ResSum, options: impl Fn(&Res) -> BTreeSet<ResSum>, cap: usize) -> Option<BTreeSet<ResSum>> {
    let mut acc: BTreeSet<ResSum> = [Sum::zero()].into_iter().collect();
    for (t, c) in sum {
        let mut choices = options(t);
        choices.insert(Sum::single(t.clone()));
        let copies = num_traits::ToPrimitive::to_usize(c).filter(|&n| n <= cap)?;
        for _ in 0..copies {
            let mut next = BTreeSet::new();
            for a in &acc {
                for ch in &choices {
                    let mut x = a.clone();
                    x.add_sum(ch);
                    next.insert(x);
                }
            }
            if next.len() > cap {
                return None;
            }
            acc = next;
        }
    }
    Some(acc)
}

fn sum_reach(from: ResSum) -> Option<BTreeSet<ResSum>> {
    let mut seen = BTreeSet::new();
    let mut todo = vec![from];
    while let Some(t) = todo.pop() {
        if seen.contains(&t) {
            continue;
        }
        todo.extend(sum_successors(&t, ResStrategyKind::EpsilonNonErasing));
        seen.insert(t);
        if seen.len() > PAR_CAP {
            return None;
        }
    }
    Some(seen)
}

/// `s →e σ ↠¬e τ` implies `s ↠¬e t' ⇒e τ`, where `⇒e` lets each copy of
/// each summand of `t'` take at most one erasing step.
fn postponement(input: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let s = res_input(input)?;
    let erased = s.successors(ResStrategyKind::PartialErasing);
    if erased.is_empty() {
        return Err(Stop::Vacuous);
    }
    let mut reachable = BTreeSet::new();
    for t in sum_reach(Sum::single(s.clone())).ok_or(Stop::Skip)? {
        let images = per_copy(&t, |u| u.successors(ResStrategyKind::PartialErasing), PAR_CAP).ok_or(Stop::Skip)?;
        reachable.extend(images);
        if reachable.len() > GRAPH_CAP {
            return Err(Stop::Skip);
        }
    }
    for sigma in &erased {
        for tau in sum_reach(sigma.clone()).ok_or(Stop::Skip)? {
            ensure!(reachable.contains(&tau), "{s} ->e {sigma} ->>ne {tau}, but no t' with {s} ->>ne t' =>e {tau}");
        }
    }
    Ok(())
}

/// The rigid statement, with `t' →e u` read as at most one erasing step.
fn postponement_rigid(input: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let Input::Rigid(s) = input else { return Err(Stop::Skip) };
    let erased = s.successors(RigidRelation::Erasing);
    if erased.is_empty() {
        return Err(Stop::Vacuous);
    }
    let mut targets = BTreeSet::new();
    for t in rigid_reach(s, RigidRelation::EpsilonNonErasing).ok_or(Stop::Skip)? {
        targets.extend(t.successors(RigidRelation::Erasing));
        targets.insert(t);
    }
    for t in &erased {
        for u in rigid_reach(t, RigidRelation::EpsilonNonErasing).ok_or(Stop::Skip)? {
            ensure!(targets.contains(&u), "{s} ->e {t} ->>ne {u}, but no t' with {s} ->>ne t' ->e {u}");
        }
    }
    Ok(())
}

fn snconf(input: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let Input::Rigid(s) = input else { return Err(Stop::Skip) };
    let mut seen = HashSet::new();
    let mut sinks = BTreeSet::new();
    let mut todo = vec![s.clone()];
    while let Some(t) = todo.pop() {
        if !seen.insert(t.clone()) {
            continue;
        }
        if seen.len() > GRAPH_CAP {
            return Err(Stop::Skip);
        }
        let next = t.r_successors();
        if next.is_empty() {
            sinks.insert(t);
            continue;
        }
        for u in next {
            ensure!(u.size() < t.size(), "{t} -> {u} does not decrease size");
            todo.push(u);
        }
    }
    let nf = s.normal_form();
    let all: Vec<String> = sinks.iter().map(ToString::to_string).collect();
    ensure!(sinks.len() == 1 && sinks.contains(&nf), "{s} has normal forms {}, expected {nf}", all.join(", "));
    Ok(())
}

/// The two reduction sequences from `⟨λy.⟨⟨λx.⟨x⟩(x)⟩(y,y)⟩(y)⟩(A,B,B)`
/// with `A = λf.⟨z⟩(f)` and `B = λf.⟨z⟩()`: one starts with σ₁ and ends
/// in `0`, the other uses →r only and ends in `⟨⟨z⟩(B)⟩(B)`.
pub(crate) fn confluence_sequences() -> (Vec<Rigid>, Vec<Rigid>) {
    let r = |s: &str| parse_rigid(s).expect("fixed instance parses");
    let a = "\\f. <z>(f)";
    let b = "\\f. <z>()";
    let s = format!("<\\y. <<\\x. <x>(x)>(y, y)>(y)>({a}, {b}, {b})");
    let sigma_first = vec![
        r(&s),
        r(&format!("<\\y. <\\x. <<x>(x)>(y)>(y, y)>({a}, {b}, {b})")),
        r(&format!("<\\x. <<x>(x)>({a})>({b}, {b})")),
        r(&format!("<<{b}>({b})>({a})")),
        Rigid::Zero,
    ];
    let r_first = vec![
        r(&s),
        r(&format!("<<\\x. <x>(x)>({a}, {b})>({b})")),
        r(&format!("<<{a}>({b})>({b})")),
        r(&format!("<<z>({b})>({b})")),
    ];
    (sigma_first, r_first)
}

fn follows(seq: &[Rigid], rels: &[RigidRelation]) -> Result<(), String> {
    for (i, pair) in seq.windows(2).enumerate() {
        let rel = rels[i.min(rels.len() - 1)];
        if !pair[0].successors(rel).contains(&pair[1]) {
            return Err(format!("{} does not step to {}", pair[0], pair[1]));
        }
    }
    Ok(())
}

fn rigid_confluence_failure(_: &Input, _: &mut ChaCha8Rng, _: usize) -> Check {
    let (sigma_first, r_first) = confluence_sequences();
    let rels = [RigidRelation::Sigma1, RigidRelation::R];
    follows(&sigma_first, &rels).map_err(Stop::Fail)?;
    follows(&r_first, &[RigidRelation::R]).map_err(Stop::Fail)?;
    let zero = sigma_first.last().expect("non-empty");
    let other = r_first.last().expect("non-empty");
    ensure!(zero.is_zero(), "sigma1-first sequence ends in {zero}");
    ensure!(!other.is_zero() && other.is_normal(), "r-first sequence ends in {other}");
    ensure!(
        other.successors(RigidRelation::EpsilonNonErasing).is_empty() && other.sigma1_successors().is_empty(),
        "{other} is not normal for σ₁"
    );
    Ok(())
}
