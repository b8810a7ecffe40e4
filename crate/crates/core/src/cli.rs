//! The `lambda-taylor` command line.
//!
//! Exit status: 0 on success or a `yes` verdict, 2 on `unknown` (including
//! fuel exhaustion), 3 on `no` or a failed law, 1 on usage and parse errors.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{self, Property, Verdict, LAWS};
use crate::expansion::{rigid_expand, taylor_support_expand, Budget};
use crate::lexer::ParseError;
use crate::resource::{parse_res_sum, sum_successors, ResStrategyKind};
use crate::rigid::{parse_rigid, Rigid, RigidRelation};
use crate::syntax::{parse, StrategyKind, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_NO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lambda-taylor", version, about = "Resource calculi and approximant-based normalization analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include reduction traces.
    #[arg(long, global = true)]
    trace: bool,
    /// Size bound for approximants.
    #[arg(long, global = true, default_value_t = 12, value_parser = positive)]
    max_size: usize,
    /// Cap on approximants enumerated or examined.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = positive)]
    max_count: usize,
    /// Step or node budget for direct reduction.
    #[arg(long, global = true, default_value_t = 1_000, value_parser = positive)]
    fuel: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 200, value_parser = positive)]
    cases: usize,
    /// Read the term from a file instead of the command line.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and show its structure.
    Parse(TermArgs),
    /// Print a term in canonical surface syntax.
    Render(TermArgs),
    /// Reduce a term step by step.
    Reduce {
        /// beta, head, left, non-erasing, erasing, sigma1, epsilon-ne; `r-`
        /// selects rigid terms and `d-` multiset resource sums.
        #[arg(long, default_value = "beta")]
        strategy: String,
        #[command(flatten)]
        input: TermArgs,
    },
    /// Enumerate the rigid expansion or the Taylor support of a λ-term.
    Expand {
        /// Enumerate multiset approximants instead of rigid ones.
        #[arg(long)]
        taylor: bool,
        #[command(flatten)]
        input: TermArgs,
    },
    /// Semi-decide normalization properties of a λ-term.
    Analyze {
        /// May be repeated; all four approximant properties by default.
        #[arg(long, value_enum)]
        property: Vec<Query>,
        /// Search approximants, or reduce the term itself.
        #[arg(long, value_enum, default_value_t = Method::Approx)]
        method: Method,
        #[command(flatten)]
        input: TermArgs,
    },
    /// Run the property-test harness.
    Laws {
        /// May be repeated; every law by default.
        #[arg(long)]
        law: Vec<String>,
        /// Generated term size bound; each law's own default otherwise.
        #[arg(long, value_parser = positive)]
        size_bound: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct TermArgs {
    /// Term text. Rigid and resource strategies expect their own syntax.
    term: Option<String>,
    /// Syntax of the term for `parse` and `render`.
    #[arg(long, value_enum, default_value_t = Calculus::Lambda)]
    calculus: Calculus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Calculus {
    Lambda,
    Rigid,
    Resource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Query {
    Head,
    Solvable,
    Beta,
    Strong,
    InS,
    Conservation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Approx,
    Oracle,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Usage(String),
    Parse(ParseError),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

struct Report {
    text: String,
    json: Value,
    code: i32,
}

/// Runs one invocation. Output goes to `out`, diagnostics to `err`, and
/// the exit status is returned.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = if help { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return if help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let written = if cli.common.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.json).expect("serializable"))
            } else {
                write!(out, "{}", r.text)
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            r.code
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Parse(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn term_text(args: &TermArgs, common: &Common) -> Result<String, Failure> {
    match (&args.term, &common.file) {
        (Some(_), Some(_)) => Err(Failure::Usage("give the term inline or with --file, not both".into())),
        (Some(t), None) => Ok(t.clone()),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        (None, None) => Err(Failure::Usage("no term given".into())),
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Parse(args) => parse_cmd(&term_text(args, c)?, args.calculus, false),
        Command::Render(args) => parse_cmd(&term_text(args, c)?, args.calculus, true),
        Command::Reduce { strategy, input } => reduce_cmd(&term_text(input, c)?, strategy, c),
        Command::Expand { taylor, input } => expand_cmd(&term_text(input, c)?, *taylor, c),
        Command::Analyze { property, method, input } => analyze_cmd(&term_text(input, c)?, property, *method, c),
        Command::Laws { law, size_bound } => laws_cmd(law, *size_bound, c),
    }
}

fn parse_cmd(text: &str, calculus: Calculus, render_only: bool) -> Result<Report, Failure> {
    let (rendered, json) = match calculus {
        Calculus::Lambda => {
            let t = parse(text)?;
            let free: Vec<&str> = t.free_names_in_order().iter().map(|s| s.as_str()).collect();
            let json = json!({
                "calculus": "lambda",
                "term": t.to_string(),
                "debruijn": t.to_debruijn(),
                "size": t.size(),
                "free": free,
                "classification": t.classify(),
            });
            (t.to_string(), json)
        }
        Calculus::Rigid => {
            let a = parse_rigid(text)?;
            let json = json!({
                "calculus": "rigid",
                "term": a.to_string(),
                "size": a.size(),
                "normal": a.is_normal(),
                "positive": a.is_positive(),
            });
            (a.to_string(), json)
        }
        Calculus::Resource => {
            let s = parse_res_sum(text)?;
            let json = json!({
                "calculus": "resource",
                "term": s.to_string(),
                "summands": s.len(),
                "mass": s.mass().to_string(),
            });
            (s.to_string(), json)
        }
    };
    if render_only {
        return Ok(Report { text: format!("{rendered}\n"), json: json!({ "term": rendered }), code: EXIT_OK });
    }
    let mut text = String::new();
    if let Value::Object(fields) = &json {
        for (k, v) in fields {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            text.push_str(&format!("{k}: {v}\n"));
        }
    }
    Ok(Report { text, json, code: EXIT_OK })
}

enum Reducer {
    Lambda(StrategyKind),
    RigidRel(RigidRelation),
    RigidHead,
    RigidLeft,
    Sum(ResStrategyKind),
}

fn reducer(name: &str) -> Result<Reducer, Failure> {
    let bad = || Failure::Usage(format!("unknown strategy '{name}'"));
    if let Some(rest) = name.strip_prefix("r-") {
        return Ok(match rest {
            "beta" => Reducer::RigidRel(RigidRelation::R),
            "head" => Reducer::RigidHead,
            "left" => Reducer::RigidLeft,
            "non-erasing" => Reducer::RigidRel(RigidRelation::NonErasing),
            "erasing" => Reducer::RigidRel(RigidRelation::Erasing),
            "sigma1" => Reducer::RigidRel(RigidRelation::Sigma1),
            "epsilon-ne" => Reducer::RigidRel(RigidRelation::EpsilonNonErasing),
            _ => return Err(bad()),
        });
    }
    if let Some(rest) = name.strip_prefix("d-") {
        return rest.parse().map(Reducer::Sum).map_err(|_| bad());
    }
    name.parse().map(Reducer::Lambda).map_err(|_| bad())
}

/// Runs `step` until it returns `None` or `fuel` steps were taken.
fn iterate<T: ToString>(start: T, fuel: usize, mut step: impl FnMut(&T) -> Option<T>) -> (T, Vec<String>, usize, bool) {
    let mut cur = start;
    let mut trace = vec![cur.to_string()];
    for n in 0..fuel {
        match step(&cur) {
            Some(next) => {
                cur = next;
                trace.push(cur.to_string());
            }
            None => return (cur, trace, n, true),
        }
    }
    let normal = step(&cur).is_none();
    (cur, trace, fuel, normal)
}

fn reduce_cmd(text: &str, strategy: &str, c: &Common) -> Result<Report, Failure> {
    let fuel = c.fuel;
    let (result, trace, steps, normal) = match reducer(strategy)? {
        Reducer::Lambda(kind) => {
            let t = parse(text)?;
            let (r, tr, n, nf) = iterate(t, fuel, |t: &Term| t.step(kind));
            (r.to_string(), tr, n, nf)
        }
        Reducer::RigidRel(rel) => {
            let a = parse_rigid(text)?;
            let (r, tr, n, nf) = iterate(a, fuel, |a: &Rigid| a.successors(rel).into_iter().next());
            (r.to_string(), tr, n, nf)
        }
        Reducer::RigidHead => {
            let a = parse_rigid(text)?;
            let (r, tr, n, nf) = iterate(a, fuel, |a: &Rigid| (!a.is_head_normal()).then(|| a.head_step()));
            (r.to_string(), tr, n, nf)
        }
        Reducer::RigidLeft => {
            let a = parse_rigid(text)?;
            let (r, tr, n, nf) = iterate(a, fuel, |a: &Rigid| (!a.is_normal()).then(|| a.left_parallel_step()));
            (r.to_string(), tr, n, nf)
        }
        Reducer::Sum(kind) => {
            let s = parse_res_sum(text)?;
            let (r, tr, n, nf) = iterate(s, fuel, |s| sum_successors(s, kind).into_iter().next());
            (r.to_string(), tr, n, nf)
        }
    };
    let mut out = String::new();
    if c.trace {
        for (i, t) in trace.iter().enumerate().skip(1) {
            out.push_str(&format!("{i}: {t}\n"));
        }
    }
    if normal {
        out.push_str(&format!("normal form after {steps} steps: {result}\n"));
    } else {
        out.push_str(&format!("fuel exhausted after {steps} steps: {result}\n"));
    }
    let json = json!({
        "strategy": strategy,
        "input": trace[0],
        "result": result,
        "normal": normal,
        "steps": steps,
        "fuel": fuel,
        "trace": if c.trace { trace.clone() } else { Vec::new() },
    });
    Ok(Report { text: out, json, code: if normal { EXIT_OK } else { EXIT_UNKNOWN } })
}

fn budget(c: &Common) -> Result<Budget, Failure> {
    Budget::new(c.max_size, c.max_count, c.fuel).map_err(|e| Failure::Usage(e.to_string()))
}

fn expand_cmd(text: &str, taylor: bool, c: &Common) -> Result<Report, Failure> {
    let m = parse(text)?;
    let b = budget(c)?;
    let items: Vec<String> = if taylor {
        taylor_support_expand(&m, &b).iter().map(ToString::to_string).collect()
    } else {
        rigid_expand(&m, &b).iter().map(ToString::to_string).collect()
    };
    let mut out = String::new();
    for a in &items {
        out.push_str(a);
        out.push('\n');
    }
    let json = json!({
        "term": m.to_string(),
        "kind": if taylor { "resource" } else { "rigid" },
        "max_size": c.max_size,
        "max_count": c.max_count,
        "count": items.len(),
        "approximants": items,
    });
    Ok(Report { text: out, json, code: EXIT_OK })
}

fn property_of(q: Query) -> Option<Property> {
    match q {
        Query::Head => Some(Property::Head),
        Query::Solvable => Some(Property::Solvable),
        Query::Beta => Some(Property::Beta),
        Query::Strong => Some(Property::Strong),
        Query::InS | Query::Conservation => None,
    }
}

fn verdict_text(v: &Verdict, trace: bool) -> String {
    let mut s = format!("{}: {}\n", v.property, v.outcome);
    if let Some(w) = &v.witness {
        s.push_str(&format!("  witness: {w}\n"));
    }
    s.push_str(&format!("  reason: {}\n", v.reason));
    if trace {
        for t in &v.trace {
            s.push_str(&format!("  | {t}\n"));
        }
    }
    s
}

fn analyze_cmd(text: &str, queries: &[Query], method: Method, c: &Common) -> Result<Report, Failure> {
    let m = parse(text)?;
    let b = budget(c)?;
    let queries: Vec<Query> = if queries.is_empty() {
        vec![Query::Head, Query::Solvable, Query::Beta, Query::Strong]
    } else {
        queries.to_vec()
    };
    let mut verdicts = Vec::new();
    for q in queries {
        let v = match (q, property_of(q)) {
            (_, Some(p)) if method == Method::Approx => analysis::analyze(&m, p, &b),
            (_, Some(p)) => analysis::oracle(&m, p, c.fuel),
            (Query::InS, None) => analysis::in_s(&m, c.fuel),
            _ => analysis::check_conservation(&m, c.fuel).map_err(|e| Failure::Usage(e.to_string()))?,
        };
        verdicts.push(v);
    }
    let code = if verdicts.iter().any(Verdict::is_no) {
        EXIT_NO
    } else if verdicts.iter().all(Verdict::is_yes) {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    };
    let text: String = verdicts.iter().map(|v| verdict_text(v, c.trace)).collect();
    let mut docs: Vec<Value> = verdicts
        .iter()
        .map(|v| {
            let mut d = serde_json::to_value(v).expect("serializable");
            if !c.trace {
                d["trace"] = json!([]);
            }
            d
        })
        .collect();
    let json = if docs.len() == 1 { docs.remove(0) } else { Value::Array(docs) };
    Ok(Report { text, json, code })
}

fn laws_cmd(names: &[String], size_bound: Option<usize>, c: &Common) -> Result<Report, Failure> {
    let names: Vec<String> =
        if names.is_empty() { LAWS.iter().map(|s| s.to_string()).collect() } else { names.to_vec() };
    let mut reports = Vec::new();
    for name in &names {
        let bound = match size_bound.or_else(|| analysis::default_size_bound(name)) {
            Some(b) => b,
            None => return Err(Failure::Usage(format!("unknown law '{name}'"))),
        };
        let r = analysis::check_law(name, c.cases, c.seed, bound).map_err(|e| Failure::Usage(e.to_string()))?;
        reports.push(r);
    }
    let mut text = String::new();
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        text.push_str(&format!(
            "{status} {}: {}/{} held, {} vacuous, {} skipped, {} failed (seed {}, size bound {})\n",
            r.law,
            r.held,
            r.cases,
            r.vacuous,
            r.skipped,
            r.failures.len(),
            r.seed,
            r.size_bound
        ));
        for f in &r.failures {
            text.push_str(&format!("  case {}: {}\n    shrunk: {}\n    {}\n", f.case, f.input, f.shrunk, f.detail));
        }
        for n in &r.notes {
            text.push_str(&format!("  {n}\n"));
        }
    }
    let code = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_NO };
    let json = serde_json::to_value(&reports).expect("serializable");
    Ok(Report { text, json, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("lambda-taylor").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn head_witness() {
        let (code, out, _) = run(&["analyze", "--property", "head", "x ((\\x. x x) (\\x. x x))", "--max-size", "6"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("witness: <x>()"), "{out}");
    }

    #[test]
    fn omega_head_fuel() {
        let (code, out, _) = run(&["reduce", "--strategy", "head", "(\\x. x x) (\\x. x x)", "--fuel", "5", "--trace"]);
        assert_eq!(code, EXIT_UNKNOWN);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[..5].iter().all(|l| l.ends_with("(\\x. x x) (\\x. x x)")));
        assert!(lines[5].starts_with("fuel exhausted after 5 steps"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["reduce", "--strategy", "bogus", "x"]).0, EXIT_USAGE);
        assert_eq!(run(&["reduce", "--fuel", "0", "x"]).0, EXIT_USAGE);
        assert_eq!(run(&["parse", "\\x."]).0, EXIT_USAGE);
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert!(run(&["parse", "(x"]).2.contains("syntax error at"));
    }
}
