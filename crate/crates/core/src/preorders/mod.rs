//! Decision procedures for the three preorders, witness search and observer synthesis.

mod decide;
mod report;
mod synth;

pub use decide::{
    all_witnesses, decide, decide_problem, leq_ind, leq_must, leq_unc, verify_witness, Problem, SearchOptions,
    Verdict, Witness,
};
pub use report::{
    check, relate, CheckOptions, CheckResult, Consistency, Matrix, MatrixReport, Outcome, Report, SynthesisStatus,
    VerdictKind, WitnessReport,
};
pub use synth::{candidates, escape_chain, probe, separates, synthesize_observer, Construction, Synthesis};

use crate::semantics::SemanticsError;
use crate::traceclasses::TraceClassError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreorderError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    TraceClass(#[from] TraceClassError),
    #[error("`{term}` uses recursion; the deciders only handle finite terms")]
    NotFinite { term: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Must,
    Unc,
    Ind,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Must => "must",
            Relation::Unc => "unc",
            Relation::Ind => "ind",
        })
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "must" => Ok(Relation::Must),
            "unc" => Ok(Relation::Unc),
            "ind" => Ok(Relation::Ind),
            _ => Err(format!("unknown relation `{s}` (expected must, unc or ind)")),
        }
    }
}
