use super::decide::{decide, SearchOptions, Verdict, Witness};
use super::synth::{synthesize_observer, Construction, Synthesis};
use super::{PreorderError, Relation};
use crate::semantics::default_budget;
use crate::syntax::{Action, Process};
use crate::traceclasses::Interface;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub budget: usize,
    pub prune: bool,
    /// Synthesize and validate a distinguishing observer on failure.
    pub observer: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: default_budget(), prune: true, observer: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails(Witness),
    Error(PreorderError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthesisStatus {
    /// No observer was asked for, or the relation holds.
    Skipped,
    Validated,
    /// A witness exists but no candidate observer passed the oracle.
    Unavailable,
}

/// One directed check `lhs <= rhs` with everything needed to report it.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub relation: Relation,
    pub lhs: Process,
    pub rhs: Process,
    pub interface: Interface,
    pub outcome: Outcome,
    pub observer: Option<Synthesis>,
    pub synthesis: SynthesisStatus,
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, Outcome::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn error(&self) -> Option<&PreorderError> {
        match &self.outcome {
            Outcome::Error(e) => Some(e),
            _ => None,
        }
    }

    pub fn report(&self) -> Report {
        let verdict = match self.outcome {
            Outcome::Holds => VerdictKind::Holds,
            Outcome::Fails(_) => VerdictKind::Fails,
            Outcome::Error(_) => VerdictKind::Error,
        };
        Report {
            relation: self.relation,
            direction: [self.lhs.to_string(), self.rhs.to_string()],
            verdict,
            witness: self.witness().map(|w| WitnessReport::new(w, &self.interface)),
            observer: self.observer.as_ref().map(|s| s.observer.to_string()),
            construction: self.observer.as_ref().map(|s| s.construction),
            synthesis: self.synthesis.clone(),
            error: self.error().map(|e| e.to_string()),
        }
    }
}

/// Runs one decider, and optionally observer synthesis, without ever failing:
/// errors become `Outcome::Error`.
pub fn check(relation: Relation, p: &Process, q: &Process, iface: &Interface, opts: CheckOptions) -> CheckResult {
    let search = SearchOptions { prune: opts.prune, budget: opts.budget };
    let used = match relation {
        Relation::Must => Interface::single(&BTreeSet::new()),
        _ => iface.clone(),
    };
    let mut result = CheckResult {
        relation,
        lhs: p.clone(),
        rhs: q.clone(),
        interface: used,
        outcome: Outcome::Holds,
        observer: None,
        synthesis: SynthesisStatus::Skipped,
    };
    match decide(relation, p, q, &result.interface, search) {
        Ok(Verdict::Holds) => {}
        Ok(Verdict::Fails(w)) => {
            if opts.observer {
                match synthesize_observer(relation, p, q, &result.interface, &w, opts.budget) {
                    Ok(Some(s)) => {
                        result.observer = Some(s);
                        result.synthesis = SynthesisStatus::Validated;
                    }
                    Ok(None) => result.synthesis = SynthesisStatus::Unavailable,
                    Err(e) => {
                        result.outcome = Outcome::Error(e);
                        return result;
                    }
                }
            }
            result.outcome = Outcome::Fails(w);
        }
        Err(e) => result.outcome = Outcome::Error(e),
    }
    result
}

/// All six directed verdicts for a pair, with the hierarchy checks.
#[derive(Clone, Debug)]
pub struct Matrix {
    /// must, unc, ind; each as `p <= q` then `q <= p`.
    pub results: Vec<CheckResult>,
    pub must_implies_unc: bool,
    pub unc_implies_ind: bool,
}

impl Matrix {
    pub fn get(&self, relation: Relation, forward: bool) -> &CheckResult {
        let row = match relation {
            Relation::Must => 0,
            Relation::Unc => 1,
            Relation::Ind => 2,
        };
        &self.results[row * 2 + usize::from(!forward)]
    }

    pub fn report(&self) -> MatrixReport {
        MatrixReport {
            results: self.results.iter().map(CheckResult::report).collect(),
            consistency: Consistency { must_implies_unc: self.must_implies_unc, unc_implies_ind: self.unc_implies_ind },
        }
    }
}

pub fn relate(p: &Process, q: &Process, iface: &Interface, opts: CheckOptions) -> Matrix {
    let mut results = Vec::with_capacity(6);
    for relation in [Relation::Must, Relation::Unc, Relation::Ind] {
        results.push(check(relation, p, q, iface, opts));
        results.push(check(relation, q, p, iface, opts));
    }
    // An errored entry makes an implication vacuous rather than violated.
    let implies = |a: &CheckResult, b: &CheckResult| !a.holds() || b.holds() || b.error().is_some();
    let must_implies_unc = (0..2).all(|d| implies(&results[d], &results[2 + d]));
    let unc_implies_ind = (0..2).all(|d| implies(&results[2 + d], &results[4 + d]));
    Matrix { results, must_implies_unc, unc_implies_ind }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictKind {
    Holds,
    Fails,
    Error,
}

/// The JSON form of a check, described by `docs/report.schema.json`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Report {
    pub relation: Relation,
    pub direction: [String; 2],
    pub verdict: VerdictKind,
    pub witness: Option<WitnessReport>,
    pub observer: Option<String>,
    pub construction: Option<Construction>,
    pub synthesis: SynthesisStatus,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct WitnessReport {
    pub trace: Vec<String>,
    /// The interface part as a sorted action list; absent for the classical relation.
    pub part: Option<Vec<String>>,
    pub must_set: Vec<String>,
    /// Actions outside the part added to the must set by the individualistic check.
    pub hidden: Vec<String>,
    pub class_members: Vec<Vec<String>>,
}

fn strings<'a>(xs: impl IntoIterator<Item = &'a Action>) -> Vec<String> {
    xs.into_iter().map(|a| a.to_string()).collect()
}

impl WitnessReport {
    pub fn new(w: &Witness, iface: &Interface) -> Self {
        WitnessReport {
            trace: strings(&w.trace),
            part: w.part.map(|i| strings(iface.part(i))),
            must_set: strings(&w.must_set),
            hidden: strings(&w.hidden),
            class_members: w.class.members.iter().map(|t| strings(t)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Consistency {
    pub must_implies_unc: bool,
    pub unc_implies_ind: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixReport {
    pub results: Vec<Report>,
    pub consistency: Consistency,
}

fn braces(xs: &[String]) -> String {
    format!("{{{}}}", xs.join(", "))
}

fn trace_text(xs: &[String]) -> String {
    if xs.is_empty() {
        "eps".to_string()
    } else {
        xs.join(" ")
    }
}

impl Report {
    /// A few indented lines for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            VerdictKind::Holds => "holds",
            VerdictKind::Fails => "fails",
            VerdictKind::Error => "error",
        };
        let _ = writeln!(out, "{}: {} <= {} {}", self.relation, self.direction[0], self.direction[1], verdict);
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "  trace: {}", trace_text(&w.trace));
            if let Some(p) = &w.part {
                let _ = writeln!(out, "  part: {}", braces(p));
            }
            let _ = writeln!(out, "  must set: {}", braces(&w.must_set));
            if !w.hidden.is_empty() {
                let _ = writeln!(out, "  plus hidden: {}", braces(&w.hidden));
            }
            let members: Vec<String> = w.class_members.iter().map(|t| trace_text(t)).collect();
            let _ = writeln!(out, "  class: [{}]", members.join(", "));
        }
        match (&self.observer, &self.synthesis) {
            (Some(o), _) => {
                let how = match self.construction {
                    Some(Construction::Window { hider }) => format!(" (window, hider part {hider})"),
                    _ => String::new(),
                };
                let _ = writeln!(out, "  observer: {o}{how}");
            }
            (None, SynthesisStatus::Unavailable) => {
                let _ = writeln!(out, "  observer: none of the candidate constructions passed the must oracle");
            }
            _ => {}
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  error: {e}");
        }
        out
    }
}
