//! Operational semantics, weak traces and the must oracle.

mod lts;
mod must;
mod weak;

pub use lts::{hide, EdgeDump, HiddenView, Lts, LtsDump, Steppable};
pub use must::{must_pass, must_pass_lts, must_pass_with};
pub use weak::Analysis;

use crate::syntax::{Action, Process, Trace};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("state budget of {limit} exceeded (raise it with --budget or MTP_BUDGET)")]
    BudgetExceeded { limit: usize },
    #[error("the term has infinitely many traces")]
    InfiniteTraces,
}

pub const DEFAULT_BUDGET: usize = 10_000;

/// The exploration budget: `MTP_BUDGET` when set to a positive number, else 10^4.
pub fn default_budget() -> usize {
    std::env::var("MTP_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

pub fn analyse(p: &Process) -> Result<Analysis<Process>, SemanticsError> {
    Analysis::new(p, default_budget())
}

/// The tau-closed set of residuals of `p` after the weak trace `s`.
pub fn weak_after(p: &Process, s: &[Action]) -> Result<BTreeSet<Process>, SemanticsError> {
    let a = analyse(p)?;
    Ok(a.after(s)
        .map(|ids| ids.iter().map(|&i| a.state(i).clone()).collect())
        .unwrap_or_default())
}

/// Weak traces of `p`; tick never occurs in them.
pub fn traces(p: &Process) -> Result<BTreeSet<Trace>, SemanticsError> {
    Ok(analyse(p)?.traces().cloned().collect())
}

/// Visible actions weakly enabled by `p`.
pub fn initials(p: &Process) -> Result<BTreeSet<Action>, SemanticsError> {
    Ok(analyse(p)?.init(0).clone())
}

/// `P MUST L`.
pub fn must_holds(ps: &BTreeSet<Process>, l: &BTreeSet<Action>) -> Result<bool, SemanticsError> {
    for p in ps {
        let a = analyse(p)?;
        if !a.must(&[0].into_iter().collect(), l) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when `p` cannot perform an infinite sequence of tau steps.
pub fn converges(p: &Process) -> Result<bool, SemanticsError> {
    Ok(analyse(p)?.converges(0))
}
