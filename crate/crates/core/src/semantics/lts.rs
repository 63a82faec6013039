use crate::syntax::{Action, Configuration, Label, Name, Process};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use super::SemanticsError;

/// Anything with a labelled transition relation.
pub trait Steppable: Clone + Eq + Hash {
    fn successors(&self) -> Vec<(Label, Self)>;
}

impl Process {
    /// One step transitions. Recursion unfolds on demand; an unguarded
    /// occurrence of a variable under its own binder contributes nothing.
    pub fn step(&self) -> Vec<(Label, Process)> {
        fn go(p: &Process, out: &mut Vec<(Label, Process)>, unfolding: &mut Vec<Process>) {
            match p {
                Process::Nil | Process::Var(_) => {}
                Process::One => out.push((Label::Tick, Process::Nil)),
                Process::Prefix(l, b) => out.push((l.clone(), (**b).clone())),
                Process::Choice(a, b) => {
                    go(a, out, unfolding);
                    go(b, out, unfolding);
                }
                Process::Rec(x, b) => {
                    if unfolding.contains(p) {
                        return;
                    }
                    unfolding.push(p.clone());
                    let u = b.subst(x, p);
                    go(&u, out, unfolding);
                    unfolding.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out, &mut Vec::new());
        out.sort();
        out.dedup();
        out
    }
}

impl Steppable for Process {
    fn successors(&self) -> Vec<(Label, Self)> {
        self.step()
    }
}

impl Configuration {
    /// Components interleave on every label except tick, complementary actions
    /// of two components synchronise into tau, and tick is only possible when
    /// every component can tick at once.
    pub fn step(&self) -> Vec<(Label, Configuration)> {
        let steps: Vec<Vec<(Label, Process)>> = self.components.iter().map(|c| c.step()).collect();
        let replace = |i: usize, c: &Process| {
            let mut comps = self.components.clone();
            comps[i] = c.clone();
            Configuration { components: comps }
        };
        let mut out = Vec::new();
        for (i, si) in steps.iter().enumerate() {
            for (l, c) in si {
                if *l != Label::Tick {
                    out.push((l.clone(), replace(i, c)));
                }
            }
        }
        for i in 0..steps.len() {
            for j in (i + 1)..steps.len() {
                for (li, ci) in &steps[i] {
                    let Label::Act(a) = li else { continue };
                    for (lj, cj) in &steps[j] {
                        if matches!(lj, Label::Act(b) if *b == a.complement()) {
                            let mut comps = self.components.clone();
                            comps[i] = ci.clone();
                            comps[j] = cj.clone();
                            out.push((Label::Tau, Configuration { components: comps }));
                        }
                    }
                }
            }
        }
        let ticks: Vec<Vec<&Process>> = steps
            .iter()
            .map(|s| s.iter().filter(|(l, _)| *l == Label::Tick).map(|(_, c)| c).collect())
            .collect();
        if ticks.iter().all(|t| !t.is_empty()) {
            let mut acc: Vec<Vec<Process>> = vec![Vec::new()];
            for t in &ticks {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        t.iter().map(move |c| {
                            let mut v = prefix.clone();
                            v.push((*c).clone());
                            v
                        })
                    })
                    .collect();
            }
            for comps in acc {
                out.push((Label::Tick, Configuration { components: comps }));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn can_tick(&self) -> bool {
        self.components.iter().all(|c| c.step().iter().any(|(l, _)| *l == Label::Tick))
    }
}

impl Steppable for Configuration {
    fn successors(&self) -> Vec<(Label, Self)> {
        self.step()
    }
}

/// A process whose actions outside a set of names are turned into tau.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HiddenView {
    pub base: Process,
    pub visible: Arc<BTreeSet<Name>>,
}

/// Hides every action of `p` whose name is not in `visible`.
pub fn hide(p: &Process, visible: &BTreeSet<Name>) -> HiddenView {
    HiddenView { base: p.clone(), visible: Arc::new(visible.clone()) }
}

impl HiddenView {
    pub fn relabel(&self, l: Label) -> Label {
        match l {
            Label::Act(a) if !self.visible.contains(&a.name) => Label::Tau,
            l => l,
        }
    }
}

impl Steppable for HiddenView {
    fn successors(&self) -> Vec<(Label, Self)> {
        let mut out: Vec<(Label, Self)> = self
            .base
            .step()
            .into_iter()
            .map(|(l, b)| (self.relabel(l), HiddenView { base: b, visible: self.visible.clone() }))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// The reachable part of a transition system, with states numbered from the root (0).
#[derive(Clone, Debug)]
pub struct Lts<S> {
    pub states: Vec<S>,
    pub edges: Vec<Vec<(Label, usize)>>,
}

impl<S: Steppable> Lts<S> {
    pub fn explore(root: &S, budget: usize) -> Result<Self, SemanticsError> {
        let mut index: HashMap<S, usize> = HashMap::new();
        let mut states = vec![root.clone()];
        let mut edges: Vec<Vec<(Label, usize)>> = Vec::new();
        index.insert(root.clone(), 0);
        let mut next = 0;
        while next < states.len() {
            let succ = states[next].successors();
            let mut out = Vec::with_capacity(succ.len());
            for (l, t) in succ {
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= budget {
                            return Err(SemanticsError::BudgetExceeded { limit: budget });
                        }
                        let id = states.len();
                        index.insert(t.clone(), id);
                        states.push(t);
                        id
                    }
                };
                out.push((l, id));
            }
            edges.push(out);
            next += 1;
        }
        Ok(Lts { states, edges })
    }
}

/// A printable copy of an [`Lts`]: states as canonical text, edges by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtsDump {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDump {
    pub source: usize,
    pub label: String,
    pub target: usize,
}

impl<S: fmt::Display> Lts<S> {
    pub fn dump(&self) -> LtsDump {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(i, es)| es.iter().map(move |(l, t)| EdgeDump { source: i, label: l.to_string(), target: *t }))
            .collect();
        LtsDump { nodes: self.states.iter().map(|s| s.to_string()).collect(), edges }
    }
}

impl<S> Lts<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn can_tick(&self, i: usize) -> bool {
        self.edges[i].iter().any(|(l, _)| *l == Label::Tick)
    }

    pub fn visible(&self, i: usize) -> impl Iterator<Item = (&Action, usize)> {
        self.edges[i].iter().filter_map(|(l, t)| l.action().map(|a| (a, *t)))
    }

    pub fn taus(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[i].iter().filter(|(l, _)| *l == Label::Tau).map(|(_, t)| *t)
    }

    /// Same graph with labels rewritten; hidden actions become tau.
    pub fn relabelled(&self, visible: &BTreeSet<Name>) -> Lts<S>
    where
        S: Clone,
    {
        let edges = self
            .edges
            .iter()
            .map(|es| {
                es.iter()
                    .map(|(l, t)| match l {
                        Label::Act(a) if !visible.contains(&a.name) => (Label::Tau, *t),
                        l => (l.clone(), *t),
                    })
                    .collect()
            })
            .collect();
        Lts { states: self.states.clone(), edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_configuration, parse_process};

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    #[test]
    fn one_ticks_to_nil() {
        assert_eq!(p("1").step(), vec![(Label::Tick, Process::Nil)]);
        assert!(p("0").step().is_empty());
    }

    #[test]
    fn choice_collects_both_sides() {
        let s = p("a.1 + tau.0").step();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn recursion_unfolds() {
        let r = p("rec X.a.X");
        let s = r.step();
        assert_eq!(s, vec![(Label::Act(Action::input("a")), r.clone())]);
    }

    #[test]
    fn unguarded_recursion_is_stuck() {
        assert!(p("rec X.X").step().is_empty());
        assert_eq!(p("rec X.(X + a)").step().len(), 1);
    }

    #[test]
    fn configuration_synchronises_and_ticks_jointly() {
        let c = parse_configuration("a.1 | ~a.1").unwrap();
        let s = c.step();
        assert!(s.iter().any(|(l, t)| *l == Label::Tau && t.components == vec![Process::One, Process::One]));
        assert!(!c.can_tick());
        let d = parse_configuration("1 | 1 + a").unwrap();
        assert!(d.can_tick());
        let e = parse_configuration("1 | a").unwrap();
        assert!(!e.can_tick());
        assert!(e.step().iter().all(|(l, _)| *l != Label::Tick));
    }

    #[test]
    fn hidden_view_turns_actions_into_tau() {
        let v = hide(&p("a.b"), &[Name::new("b")].into_iter().collect());
        let s = v.successors();
        assert_eq!(s[0].0, Label::Tau);
        assert_eq!(s[0].1.successors()[0].0, Label::Act(Action::input("b")));
    }

    #[test]
    fn explore_respects_budget() {
        let q = p("a.b.c.d");
        assert_eq!(Lts::explore(&q, 100).unwrap().len(), 5);
        assert!(matches!(Lts::explore(&q, 3), Err(SemanticsError::BudgetExceeded { .. })));
    }
}
