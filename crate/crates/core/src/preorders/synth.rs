use super::decide::Witness;
use super::{PreorderError, Relation};
use crate::semantics::{hide, must_pass_with};
use crate::syntax::{Action, Configuration, Process};
use crate::traceclasses::{project, Interface};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// How an observer was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Each component follows its projection of the trace, may give up with
    /// `tau.1` before every step, and the witness component ends by offering
    /// the complements of the must set.
    EscapeChain,
    /// Non-witness components are ready to succeed while waiting; one of them
    /// becomes briefly unsuccessful after its last step, and the witness
    /// component opens a single success window that only that moment can mask.
    Window { hider: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub observer: Configuration,
    pub construction: Construction,
}

/// `~a1.1 + ... + ~an.1`, or `0` for the empty set.
pub fn probe(l: &BTreeSet<Action>) -> Process {
    Process::sum(l.iter().map(|a| Process::act(a.complement(), Process::One)))
}

/// `tau.1 + ~b1.(tau.1 + ~b2.(... end))`, or `end` for the empty trace.
pub fn escape_chain(letters: &[Action], end: Process) -> Process {
    match letters.split_first() {
        None => end,
        Some((b, rest)) => Process::choice(
            Process::tau(Process::One),
            Process::act(b.complement(), escape_chain(rest, end)),
        ),
    }
}

/// `1 + ~b1.(1 + ~b2.(... 1 + ~bk.end))`, or `1` for the empty trace.
fn waiting_chain(letters: &[Action], end: Process) -> Process {
    match letters.split_first() {
        None => Process::One,
        Some((b, rest)) => {
            let next = if rest.is_empty() { end } else { waiting_chain(rest, end) };
            Process::choice(Process::One, Process::act(b.complement(), next))
        }
    }
}

/// An escape chain whose state after `m` steps is preceded by `tau.(1 + tau.X)`.
fn windowed_chain(letters: &[Action], m: usize, end: Process) -> Process {
    if m == 0 {
        let rest = escape_chain(letters, end);
        return Process::tau(Process::choice(Process::One, Process::tau(rest)));
    }
    let (b, rest) = letters.split_first().expect("window position within the trace");
    Process::choice(
        Process::tau(Process::One),
        Process::act(b.complement(), windowed_chain(rest, m - 1, end)),
    )
}

/// Does `o` tell `p` apart from `q` in the sense of the relation?
pub fn separates(
    relation: Relation,
    p: &Process,
    q: &Process,
    iface: &Interface,
    o: &Configuration,
    budget: usize,
) -> Result<bool, PreorderError> {
    match relation {
        Relation::Must | Relation::Unc => {
            Ok(must_pass_with(p, o, budget)? && !must_pass_with(q, o, budget)?)
        }
        Relation::Ind => {
            if o.components.len() != iface.len() {
                return Ok(false);
            }
            let mut q_fails = false;
            for (i, oi) in o.components.iter().enumerate() {
                let names = iface.part_names(i);
                let single = Configuration::single(oi.clone());
                if !must_pass_with(&hide(p, &names), &single, budget)? {
                    return Ok(false);
                }
                if !q_fails && !must_pass_with(&hide(q, &names), &single, budget)? {
                    q_fails = true;
                }
            }
            Ok(q_fails)
        }
    }
}

fn escape_unc(w: &Witness, iface: &Interface, j: usize) -> Configuration {
    let comps = (0..iface.len())
        .map(|i| {
            let proj = project(&w.trace, iface.part(i));
            if i == j {
                escape_chain(&proj, probe(&w.must_set))
            } else {
                escape_chain(&proj, Process::One)
            }
        })
        .collect();
    Configuration::new(comps)
}

fn window_unc(w: &Witness, iface: &Interface, j: usize, member: &[Action], hider: usize) -> Configuration {
    let hider_part = iface.part(hider);
    let witness_part = iface.part(j);
    let last = member.iter().rposition(|a| hider_part.contains(a)).unwrap_or(0);
    let m = member[..last].iter().filter(|a| witness_part.contains(*a)).count();
    let comps = (0..iface.len())
        .map(|i| {
            let proj = project(&w.trace, iface.part(i));
            if i == j {
                windowed_chain(&proj, m, probe(&w.must_set))
            } else if i == hider {
                waiting_chain(&proj, Process::tau(Process::One))
            } else {
                waiting_chain(&proj, Process::One)
            }
        })
        .collect();
    Configuration::new(comps)
}

const MAX_MEMBERS: usize = 32;

/// Candidate observers for a witness, most canonical first.
pub fn candidates(relation: Relation, w: &Witness, iface: &Interface) -> Vec<(Configuration, Construction)> {
    let mut out: Vec<(Configuration, Construction)> = Vec::new();
    match (relation, w.part) {
        (Relation::Must, _) | (_, None) => {
            let o = Configuration::single(escape_chain(&w.trace, probe(&w.must_set)));
            out.push((o, Construction::EscapeChain));
        }
        (Relation::Unc, Some(w_part)) => {
            // An empty must set fits in any part, so any part can carry the probe.
            let probe_parts: Vec<usize> = if w.must_set.is_empty() {
                std::iter::once(w_part).chain((0..iface.len()).filter(|&i| i != w_part)).collect()
            } else {
                vec![w_part]
            };
            for &j in &probe_parts {
                let o = escape_unc(w, iface, j);
                if !out.iter().any(|(x, _)| *x == o) {
                    out.push((o, Construction::EscapeChain));
                }
            }
            for &j in &probe_parts {
                let hiders: Vec<usize> = (0..iface.len())
                    .filter(|&i| i != j && !project(&w.trace, iface.part(i)).is_empty())
                    .collect();
                for member in w.failing.iter().take(MAX_MEMBERS) {
                    for &h in &hiders {
                        let o = window_unc(w, iface, j, member, h);
                        if !out.iter().any(|(x, _)| *x == o) {
                            out.push((o, Construction::Window { hider: h }));
                        }
                    }
                }
            }
        }
        (Relation::Ind, Some(j)) => {
            let comps = (0..iface.len())
                .map(|i| {
                    let proj = project(&w.trace, iface.part(i));
                    let end = if i == j { probe(&w.must_set) } else { Process::One };
                    escape_chain(&proj, end)
                })
                .collect();
            out.push((Configuration::new(comps), Construction::EscapeChain));
        }
    }
    out
}

/// The first candidate observer that the must oracle confirms, if any.
pub fn synthesize_observer(
    relation: Relation,
    p: &Process,
    q: &Process,
    iface: &Interface,
    w: &Witness,
    budget: usize,
) -> Result<Option<Synthesis>, PreorderError> {
    for (o, construction) in candidates(relation, w, iface) {
        if separates(relation, p, q, iface, &o, budget)? {
            return Ok(Some(Synthesis { observer: o, construction }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorders::{decide, SearchOptions, Verdict};
    use crate::syntax::{parse_process, parse_trace};

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    fn acts(xs: &[&str]) -> BTreeSet<Action> {
        xs.iter().map(|x| Action::parse(x).unwrap()).collect()
    }

    #[test]
    fn chain_shapes() {
        let t = parse_trace("a ~b").unwrap();
        assert_eq!(escape_chain(&t, probe(&acts(&["c"]))).to_string(), "tau.1 + ~a.(tau.1 + b.~c.1)");
        assert_eq!(escape_chain(&[], probe(&BTreeSet::new())).to_string(), "0");
        assert_eq!(probe(&acts(&["a", "b", "c"])).to_string(), "~a.1 + (~b.1 + ~c.1)");
        assert_eq!(waiting_chain(&t, Process::tau(Process::One)).to_string(), "1 + ~a.(1 + b.tau.1)");
        assert_eq!(windowed_chain(&t, 1, Process::Nil).to_string(), "tau.1 + ~a.tau.(1 + tau.(tau.1 + b.0))");
    }

    fn synth(rel: Relation, l: &str, r: &str, iface: &Interface) -> Option<Synthesis> {
        let (l, r) = (p(l), p(r));
        match decide(rel, &l, &r, iface, SearchOptions::default()).unwrap() {
            Verdict::Holds => panic!("expected a witness"),
            Verdict::Fails(w) => synthesize_observer(rel, &l, &r, iface, &w, 10_000).unwrap(),
        }
    }

    #[test]
    fn must_observer_for_internal_choice() {
        let s = synth(Relation::Must, "a.b + a + b", "b.a + a + b", &Interface::single(&BTreeSet::new())).unwrap();
        assert_eq!(s.construction, Construction::EscapeChain);
    }

    #[test]
    fn unc_escape_chain() {
        let ab = Interface::from_names(&[&["a"], &["b"]]).unwrap();
        let s = synth(Relation::Unc, "b.a", "a.b", &ab).unwrap();
        assert_eq!(s.observer.to_string(), "1 | ~b.1");
    }

    #[test]
    fn unc_window_when_the_escape_chain_fails() {
        let ab = Interface::from_names(&[&["a"], &["b"]]).unwrap();
        let s = synth(Relation::Unc, "tau.b.a + tau.0", "b.0", &ab).unwrap();
        assert_eq!(s.construction, Construction::Window { hider: 1 });
    }

    #[test]
    fn ind_observer_uses_hidden_views() {
        let one = Interface::from_names(&[&["a", "b"]]).unwrap();
        let s = synth(Relation::Ind, "a.b", "b.a", &one).unwrap();
        assert_eq!(s.observer.to_string(), "~a.1");
    }
}
