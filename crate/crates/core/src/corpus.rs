//! Expected-results manifests over definition files.
//!
//! A manifest is a TOML file:
//!
//! ```toml
//! defs = ["trip.ccs"]            # definition files, relative to the manifest
//!
//! [[check]]
//! id = "b0-b1"
//! relation = "unc"              # must | unc | ind
//! interface = "trip"            # a named interface, an .iface path, or inline `{ {a}, {b} }`
//! lhs = "B0"                    # a definition name, a .ccs path, or an inline term
//! rhs = "B1"
//! expect = "equivalent"         # holds | fails | equivalent | incomparable
//! trace = "eps"                 # optional expected least witness
//! must_set = []
//! note = "where the expectation comes from"
//! ```
//!
//! Optional keys: `permissive_polarity` (compare must sets by name only),
//! `listed` (witnesses, each `{ trace, must_set }`, that must occur among all
//! witnesses) and `observer` (a configuration that must separate `lhs` from
//! `rhs` under the relation, checked with the must oracle).

use crate::preorders::{all_witnesses, check, separates, CheckOptions, CheckResult, Relation, Report, SynthesisStatus};
use crate::semantics::default_budget;
use crate::syntax::{
    format_trace, parse_configuration_with, parse_definitions, parse_interface_parts, parse_trace,
    Action, Configuration, DefinitionFile, ParseError, Process, Trace,
};
use crate::traceclasses::{Interface, TraceClassError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("cannot resolve `{reference}`: {reason}")]
    Unresolved { reference: String, reason: String },
    #[error("entry `{id}`: {message}")]
    Malformed { id: String, message: String },
    #[error(transparent)]
    Interface(#[from] TraceClassError),
}

fn read(path: &Path) -> Result<String, CorpusError> {
    std::fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

fn looks_like_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Loaded definitions plus the directory relative references are resolved against.
#[derive(Clone, Debug, Default)]
pub struct Sources {
    pub defs: DefinitionFile,
    pub base: PathBuf,
}

impl Sources {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Sources { defs: DefinitionFile::default(), base: base.into() }
    }

    pub fn load(&mut self, path: &Path) -> Result<(), CorpusError> {
        let path = self.path(path);
        let file = parse_definitions(&read(&path)?).map_err(|source| CorpusError::Parse { path: path.clone(), source })?;
        self.defs.merge(file).map_err(|source| CorpusError::Parse { path, source })
    }

    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn existing_file(&self, reference: &str) -> Option<PathBuf> {
        if reference.contains(['{', '(', '|', '+']) {
            return None;
        }
        let p = self.path(Path::new(reference));
        p.is_file().then_some(p)
    }

    /// A definition name, a file holding a term (or definitions, the last of
    /// which is taken), or an inline term.
    pub fn process(&self, reference: &str) -> Result<Process, CorpusError> {
        let c = self.configuration(reference)?;
        match c.components.len() {
            1 => Ok(c.components.into_iter().next().unwrap()),
            n => Err(CorpusError::Unresolved {
                reference: reference.to_string(),
                reason: format!("expected a sequential process, found {n} parallel components"),
            }),
        }
    }

    pub fn configuration(&self, reference: &str) -> Result<Configuration, CorpusError> {
        let reference = reference.trim();
        if let Some(d) = self.defs.get(reference) {
            return Ok(d.as_configuration());
        }
        if let Some(path) = self.existing_file(reference) {
            let src = read(&path)?;
            if let Ok(c) = parse_configuration_with(&src, &self.defs) {
                return Ok(c);
            }
            let file = parse_definitions(&src).map_err(|source| CorpusError::Parse { path: path.clone(), source })?;
            return file.defs.last().map(|(_, d)| d.as_configuration()).ok_or_else(|| CorpusError::Unresolved {
                reference: reference.to_string(),
                reason: "the file defines no process".to_string(),
            });
        }
        parse_configuration_with(reference, &self.defs)
            .map_err(|e| CorpusError::Unresolved { reference: reference.to_string(), reason: e.to_string() })
    }

    /// A named interface, a file holding one, or inline `{ ... }` syntax.
    pub fn interface(&self, reference: &str) -> Result<Interface, CorpusError> {
        let reference = reference.trim();
        if let Some(parts) = self.defs.interfaces.get(reference) {
            return Ok(Interface::closing(parts.clone())?);
        }
        if let Some(path) = self.existing_file(reference) {
            return load_interface_file(&path);
        }
        if looks_like_identifier(reference) {
            return Err(CorpusError::Unresolved {
                reference: reference.to_string(),
                reason: "no interface or file of that name".to_string(),
            });
        }
        let parts = parse_interface_parts(reference)
            .map_err(|e| CorpusError::Unresolved { reference: reference.to_string(), reason: e.to_string() })?;
        Ok(Interface::closing(parts)?)
    }
}

/// An interface file holds either bare `{ ... }` syntax or definitions with
/// exactly one `interface` item.
pub fn load_interface_file(path: &Path) -> Result<Interface, CorpusError> {
    let src = read(path)?;
    if let Ok(parts) = parse_interface_parts(&src) {
        return Ok(Interface::closing(parts)?);
    }
    let file = parse_definitions(&src).map_err(|source| CorpusError::Parse { path: path.to_path_buf(), source })?;
    match file.interfaces.len() {
        1 => Ok(Interface::closing(file.interfaces[0].clone())?),
        n => Err(CorpusError::Manifest {
            path: path.to_path_buf(),
            message: format!("expected exactly one interface, found {n}"),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Holds,
    Fails,
    /// Holds in both directions.
    Equivalent,
    /// Fails in both directions.
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWitness {
    trace: String,
    must_set: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    relation: Relation,
    interface: Option<String>,
    lhs: String,
    rhs: String,
    expect: Expectation,
    trace: Option<String>,
    must_set: Option<Vec<String>>,
    #[serde(default)]
    permissive_polarity: bool,
    #[serde(default)]
    listed: Vec<RawWitness>,
    observer: Option<String>,
    note: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    defs: Vec<PathBuf>,
    #[serde(default)]
    check: Vec<RawEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedWitness {
    pub trace: Trace,
    pub must_set: BTreeSet<Action>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: String,
    pub relation: Relation,
    pub interface: Interface,
    pub lhs_ref: String,
    pub rhs_ref: String,
    pub lhs: Process,
    pub rhs: Process,
    pub expect: Expectation,
    pub witness: Option<ExpectedWitness>,
    pub permissive_polarity: bool,
    pub listed: Vec<ExpectedWitness>,
    pub observer: Option<Configuration>,
    pub note: Option<String>,
}

fn malformed(id: &str, message: impl Into<String>) -> CorpusError {
    CorpusError::Malformed { id: id.to_string(), message: message.into() }
}

fn expected_witness(id: &str, trace: &str, must_set: &[String]) -> Result<ExpectedWitness, CorpusError> {
    let trace = parse_trace(trace).ok_or_else(|| malformed(id, format!("bad trace `{trace}`")))?;
    let must_set = must_set
        .iter()
        .map(|a| Action::parse(a).ok_or_else(|| malformed(id, format!("bad action `{a}`"))))
        .collect::<Result<_, _>>()?;
    Ok(ExpectedWitness { trace, must_set })
}

/// Parses a manifest and resolves every reference in it. Entries keep file order.
pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = read(path)?;
    let raw: RawManifest = toml::from_str(&text)
        .map_err(|e| CorpusError::Manifest { path: path.to_path_buf(), message: e.to_string() })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut sources = Sources::new(base);
    for d in &raw.defs {
        sources.load(d)?;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for e in raw.check {
        if !seen.insert(e.id.clone()) {
            return Err(malformed(&e.id, "duplicate id"));
        }
        let interface = match (&e.interface, e.relation) {
            (Some(r), _) => sources.interface(r)?,
            (None, Relation::Must) => Interface::single(&BTreeSet::new()),
            (None, _) => return Err(malformed(&e.id, "unc and ind checks need an interface")),
        };
        let witness = match (&e.trace, &e.must_set) {
            (Some(t), Some(l)) => Some(expected_witness(&e.id, t, l)?),
            (None, None) => None,
            _ => return Err(malformed(&e.id, "`trace` and `must_set` go together")),
        };
        if witness.is_some() && e.expect != Expectation::Fails {
            return Err(malformed(&e.id, "an expected witness needs `expect = \"fails\"`"));
        }
        let listed = e
            .listed
            .iter()
            .map(|w| expected_witness(&e.id, &w.trace, &w.must_set))
            .collect::<Result<Vec<_>, _>>()?;
        let observer = e.observer.as_deref().map(|o| sources.configuration(o)).transpose()?;
        out.push(CorpusEntry {
            id: e.id,
            relation: e.relation,
            interface,
            lhs: sources.process(&e.lhs)?,
            rhs: sources.process(&e.rhs)?,
            lhs_ref: e.lhs,
            rhs_ref: e.rhs,
            expect: e.expect,
            witness,
            permissive_polarity: e.permissive_polarity,
            listed,
            observer,
            note: e.note,
        });
    }
    Ok(out)
}

/// What happened to one entry.
#[derive(Clone, Debug, Serialize)]
pub struct EntryOutcome {
    pub id: String,
    pub passed: bool,
    /// One line per mismatch, as expected-versus-actual text.
    pub mismatches: Vec<String>,
    pub reports: Vec<Report>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub entries: Vec<EntryOutcome>,
    pub passed: usize,
    pub failed: usize,
}

impl CorpusSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

fn names(set: &BTreeSet<Action>) -> BTreeSet<String> {
    set.iter().map(|a| a.name.to_string()).collect()
}

fn show_set(set: &BTreeSet<Action>) -> String {
    let v: Vec<String> = set.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn same_witness(e: &CorpusEntry, trace: &Trace, must_set: &BTreeSet<Action>, want: &ExpectedWitness) -> bool {
    *trace == want.trace
        && if e.permissive_polarity { names(must_set) == names(&want.must_set) } else { *must_set == want.must_set }
}

fn verdict_word(r: &CheckResult) -> String {
    match (r.holds(), r.error()) {
        (_, Some(err)) => format!("error ({err})"),
        (true, None) => "holds".to_string(),
        (false, None) => "fails".to_string(),
    }
}

/// Checks one entry: verdicts, the least witness, listed witnesses, the
/// synthesized observer of every failing direction, and the given observer.
pub fn run_entry(e: &CorpusEntry, budget: usize) -> EntryOutcome {
    let opts = CheckOptions { budget, prune: true, observer: true };
    let mut mismatches = Vec::new();
    let forward = check(e.relation, &e.lhs, &e.rhs, &e.interface, opts);
    let mut results = vec![forward];
    if matches!(e.expect, Expectation::Equivalent | Expectation::Incomparable) {
        results.push(check(e.relation, &e.rhs, &e.lhs, &e.interface, opts));
    }
    let want_holds = matches!(e.expect, Expectation::Holds | Expectation::Equivalent);
    for (i, r) in results.iter().enumerate() {
        let dir = if i == 0 {
            format!("{} <= {}", e.lhs_ref, e.rhs_ref)
        } else {
            format!("{} <= {}", e.rhs_ref, e.lhs_ref)
        };
        if r.error().is_some() || r.holds() != want_holds {
            mismatches.push(format!(
                "{dir}: expected {}, got {}",
                if want_holds { "holds" } else { "fails" },
                verdict_word(r)
            ));
        }
        if r.witness().is_some() && r.synthesis != SynthesisStatus::Validated {
            mismatches.push(format!("{dir}: no synthesized observer passed the must oracle"));
        }
    }
    if let (Some(want), Some(w)) = (&e.witness, results[0].witness()) {
        if !same_witness(e, &w.trace, &w.must_set, want) {
            mismatches.push(format!(
                "witness: expected ({}, {}), got ({}, {})",
                format_trace(&want.trace),
                show_set(&want.must_set),
                format_trace(&w.trace),
                show_set(&w.must_set)
            ));
        }
    }
    if !e.listed.is_empty() {
        match all_witnesses(e.relation, &e.lhs, &e.rhs, &e.interface, budget, usize::MAX) {
            Ok(all) => {
                for want in &e.listed {
                    if !all.iter().any(|w| same_witness(e, &w.trace, &w.must_set, want)) {
                        mismatches.push(format!(
                            "listed witness ({}, {}) is not among the {} witnesses",
                            format_trace(&want.trace),
                            show_set(&want.must_set),
                            all.len()
                        ));
                    }
                }
            }
            Err(err) => mismatches.push(format!("witness enumeration: {err}")),
        }
    }
    if let Some(o) = &e.observer {
        match separates(e.relation, &e.lhs, &e.rhs, &e.interface, o, budget) {
            Ok(true) => {}
            Ok(false) => mismatches.push(format!("observer {o} does not separate {} from {}", e.lhs_ref, e.rhs_ref)),
            Err(err) => mismatches.push(format!("observer {o}: {err}")),
        }
    }
    EntryOutcome {
        id: e.id.clone(),
        passed: mismatches.is_empty(),
        mismatches,
        reports: results.iter().map(CheckResult::report).collect(),
    }
}

pub fn run_corpus(entries: &[CorpusEntry], budget: usize) -> CorpusSummary {
    let outcomes: Vec<EntryOutcome> = entries.iter().map(|e| run_entry(e, budget)).collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    CorpusSummary { failed: outcomes.len() - passed, passed, entries: outcomes }
}

/// Loads and runs a manifest with the default budget.
pub fn run_manifest(path: &Path) -> Result<CorpusSummary, CorpusError> {
    Ok(run_corpus(&load_corpus(path)?, default_budget()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn scratch(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("mtp-corpus-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn empty_manifest_has_no_entries() {
        let d = scratch("empty");
        let m = write(&d, "empty.toml", "");
        let s = run_manifest(&m).unwrap();
        assert!(s.ok());
        assert_eq!(s.entries.len(), 0);
    }

    #[test]
    fn references_resolve_against_the_manifest_directory() {
        let d = scratch("refs");
        write(&d, "x.ccs", "def AB = a.b\ninterface ab = { {a}, {b} }\n");
        write(&d, "ab.iface", "{ {a}, {b} }\n");
        write(&d, "ba.ccs", "b.a\n");
        let m = write(
            &d,
            "m.toml",
            r#"
defs = ["x.ccs"]
[[check]]
id = "one"
relation = "unc"
interface = "ab.iface"
lhs = "ba.ccs"
rhs = "AB"
expect = "fails"
trace = "eps"
must_set = ["b"]
[[check]]
id = "two"
relation = "ind"
interface = "ab"
lhs = "AB"
rhs = "b.a"
expect = "equivalent"
"#,
        );
        let entries = load_corpus(&m).unwrap();
        assert_eq!(entries[0].lhs.to_string(), "b.a.0");
        let s = run_corpus(&entries, 10_000);
        assert!(s.ok(), "{:?}", s.entries);
    }

    #[test]
    fn mismatches_are_reported() {
        let d = scratch("bad");
        let m = write(
            &d,
            "m.toml",
            r#"
[[check]]
id = "wrong"
relation = "must"
lhs = "0"
rhs = "tau.a + tau.b"
expect = "fails"
trace = "b"
must_set = []
"#,
        );
        let s = run_manifest(&m).unwrap();
        assert_eq!(s.failed, 1);
        assert_eq!(s.entries[0].mismatches, vec!["witness: expected (b, {}), got (a, {})".to_string()]);
    }

    #[test]
    fn malformed_entries_are_rejected() {
        let d = scratch("malformed");
        let m = write(&d, "m.toml", "[[check]]\nid = \"x\"\nrelation = \"unc\"\nlhs = \"a\"\nrhs = \"a\"\nexpect = \"holds\"\n");
        assert!(matches!(load_corpus(&m), Err(CorpusError::Malformed { .. })));
        let m = write(&d, "n.toml", "[[check]]\nid = \"x\"\nrelation = \"must\"\nlhs = \"Nope\"\nrhs = \"a\"\nexpect = \"holds\"\n");
        assert!(matches!(load_corpus(&m), Err(CorpusError::Unresolved { .. })));
    }
}
