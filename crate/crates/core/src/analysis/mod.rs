//! Normalization analyses: approximant search, direct-reduction oracles,
//! the inductive set `S`, the λI conservation check, and the law harness.

pub mod gen;
mod laws;
mod oracle;
mod search;
mod shrink;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use laws::{check_law, default_size_bound, Failure, LawReport, LAWS};
pub use oracle::{check_conservation, in_s, oracle};
pub use search::analyze;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("not a λI-term: {0}")]
    NotLambdaI(String),
    #[error("unknown law '{0}'")]
    UnknownLaw(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Head,
    Solvable,
    Beta,
    Strong,
}

impl Property {
    pub const ALL: [Property; 4] = [Property::Head, Property::Solvable, Property::Beta, Property::Strong];

    pub fn name(self) -> &'static str {
        match self {
            Property::Head => "head",
            Property::Solvable => "solvable",
            Property::Beta => "beta",
            Property::Strong => "strong",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown property '{s}'"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Unknown => "unknown",
        })
    }
}

/// Which grammar the witness string is written in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Lambda,
    Rigid,
    Resource,
}

/// The limits a verdict was computed under, and how much was spent.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct BudgetUsed {
    pub max_size: Option<usize>,
    pub max_count: Option<usize>,
    pub max_steps: Option<usize>,
    pub fuel: Option<usize>,
    pub spent: usize,
}

/// A three-valued answer. `Yes` carries a witness, `No` carries the
/// revisited term of a cycle or a graph certificate, `Unknown` carries the
/// exhausted budget.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub outcome: Outcome,
    pub witness: Option<String>,
    pub witness_kind: Option<WitnessKind>,
    pub trace: Vec<String>,
    pub budget: BudgetUsed,
    pub reason: String,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.outcome == Outcome::Yes
    }

    pub fn is_no(&self) -> bool {
        self.outcome == Outcome::No
    }

    pub fn is_definite(&self) -> bool {
        self.outcome != Outcome::Unknown
    }

    /// Number of reduction steps in the trace.
    pub fn steps(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }
}
