use mtp::corpus::{run_manifest, Sources};
use mtp::preorders::{
    decide, leq_unc, relate, synthesize_observer, CheckOptions, PreorderError, Relation, SearchOptions,
    SynthesisStatus, Verdict,
};
use mtp::semantics::{converges, default_budget, traces, weak_after};
use mtp::syntax::{parse_process, parse_trace, Process};
use mtp::traceclasses::{class_after, maz_class, Interface};
use std::collections::BTreeSet;
use std::path::PathBuf;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn p(s: &str) -> Process {
    parse_process(s).unwrap()
}

fn set(xs: &[&str]) -> BTreeSet<Process> {
    xs.iter().map(|x| p(x)).collect()
}

#[test]
fn every_corpus_manifest_passes() {
    for file in ["swap.toml", "trip.toml", "cassandra.toml"] {
        let summary = run_manifest(&corpus(file)).unwrap();
        let failures: Vec<_> = summary.entries.iter().filter(|e| !e.passed).collect();
        assert!(summary.ok(), "{file}: {failures:?}");
        assert!(summary.passed > 0);
    }
}

#[test]
fn trip_broker_residuals() {
    let mut src = Sources::new(corpus(""));
    src.load("trip.ccs".as_ref()).unwrap();
    let b0 = src.process("B0").unwrap();
    assert!(converges(&b0).unwrap());
    let trip = src.interface("trip").unwrap();
    let class = maz_class(&parse_trace("req ~reqH").unwrap(), &trip.dependency()).unwrap();
    let after = class_after(&b0, &class).unwrap();
    assert!(after.is_superset(&set(&["0", "~reqF"])), "{after:?}");
    assert_eq!(weak_after(&b0, &parse_trace("req").unwrap()).unwrap().len(), 4);
}

#[test]
fn traces_of_a_broker() {
    let b1 = p("req.(tau.~reqF + tau.~reqH + tau.~reqF.~reqH)");
    let shown: BTreeSet<String> = traces(&b1).unwrap().iter().map(|t| mtp::syntax::format_trace(t)).collect();
    let expected: BTreeSet<String> = ["eps", "req", "req ~reqF", "req ~reqH", "req ~reqF ~reqH"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(shown, expected);
}

#[test]
fn the_relation_matrix_is_consistent_on_the_corpus_pairs() {
    let abcd = Interface::from_names(&[&["a", "b"], &["c", "d"]]).unwrap();
    let m = relate(&p("a.c + b.d"), &p("a.d + b.c"), &abcd, CheckOptions { observer: true, ..Default::default() });
    assert!(m.must_implies_unc && m.unc_implies_ind);
    let unc = m.get(Relation::Unc, true);
    assert_eq!(unc.synthesis, SynthesisStatus::Validated);
    assert!(m.get(Relation::Ind, false).holds());
}

#[test]
fn deciders_refuse_recursion() {
    let ab = Interface::from_names(&[&["a"], &["b"]]).unwrap();
    let err = leq_unc(&p("rec X.a.X"), &p("a"), &ab).unwrap_err();
    assert!(matches!(err, PreorderError::NotFinite { .. }));
}

/// A known gap in observer synthesis for unc: with three parts, two of which
/// are touched by the trace outside the witness part, none of the built-in
/// constructions separates this pair. A bounded exhaustive search over
/// canonical observers (kept below, ignored by default) finds none either, so
/// the verdict itself may be too strict here.
mod three_part_gap {
    use super::*;

    fn pair() -> (Process, Process, Interface) {
        (
            p("b.(tau.c.a + tau.0) + c.(tau.b.a + tau.0)"),
            p("b.c + c.b"),
            Interface::from_names(&[&["a"], &["b"], &["c"]]).unwrap(),
        )
    }

    #[test]
    fn synthesis_reports_no_observer() {
        let (l, r, i) = pair();
        let Verdict::Fails(w) = decide(Relation::Unc, &l, &r, &i, SearchOptions::default()).unwrap() else {
            panic!("expected a witness");
        };
        assert!(synthesize_observer(Relation::Unc, &l, &r, &i, &w, default_budget()).unwrap().is_none());
        let report = mtp::preorders::check(Relation::Unc, &l, &r, &i, CheckOptions { observer: true, ..Default::default() });
        assert_eq!(report.synthesis, SynthesisStatus::Unavailable);
    }

    use mtp::preorders::separates;
    use mtp::syntax::{Action, Configuration, Label};
    use std::collections::HashMap;

    /// Sums of distinct prefixes, optionally with `1`, using exactly `n` prefixes.
    fn terms(labels: &[Label], n: usize, memo: &mut HashMap<usize, Vec<Process>>) -> Vec<Process> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut summands: Vec<(usize, Process)> = Vec::new();
        for k in 1..=n {
            for t in terms(labels, k - 1, memo) {
                for l in labels {
                    summands.push((k, Process::prefix(l.clone(), t.clone())));
                }
            }
        }
        fn pick(all: &[(usize, Process)], start: usize, left: usize, cur: &mut Vec<Process>, out: &mut Vec<Vec<Process>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..all.len() {
                if all[i].0 <= left {
                    cur.push(all[i].1.clone());
                    pick(all, i + 1, left - all[i].0, cur, out);
                    cur.pop();
                }
            }
        }
        let mut sets = Vec::new();
        pick(&summands, 0, n, &mut Vec::new(), &mut sets);
        let mut out = Vec::new();
        for s in sets {
            out.push(Process::sum(s.clone()));
            out.push(Process::sum(std::iter::once(Process::One).chain(s)));
        }
        memo.insert(n, out.clone());
        out
    }

    fn up_to(name: &str, n: usize) -> Vec<Process> {
        let labels = [Label::Tau, Label::Act(Action::output(name))];
        let mut memo = HashMap::new();
        (0..=n).flat_map(|k| terms(&labels, k, &mut memo)).collect()
    }

    #[test]
    #[ignore = "exhaustive search, about 20 seconds in release mode"]
    fn no_small_observer_separates() {
        let (l, r, i) = pair();
        let (xs, ys, zs) = (up_to("a", 3), up_to("b", 2), up_to("c", 2));
        let mut checked = 0;
        for x in &xs {
            for y in &ys {
                for z in &zs {
                    let o = Configuration::new(vec![x.clone(), y.clone(), z.clone()]);
                    checked += 1;
                    assert!(!separates(Relation::Unc, &l, &r, &i, &o, 100_000).unwrap(), "{o} separates");
                }
            }
        }
        println!("{checked} observers checked");
    }
}
