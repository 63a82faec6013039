use super::action::{Action, Label, Name};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Sequential process terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    Nil,
    One,
    Prefix(Label, Arc<Process>),
    Choice(Arc<Process>, Arc<Process>),
    Var(Name),
    Rec(Name, Arc<Process>),
}

impl Process {
    pub fn nil() -> Self {
        Process::Nil
    }

    pub fn one() -> Self {
        Process::One
    }

    /// `label.body`. Panics on `Label::Tick`, which is not a prefix.
    pub fn prefix(label: Label, body: Process) -> Self {
        assert!(label != Label::Tick, "tick cannot be used as a prefix");
        Process::Prefix(label, Arc::new(body))
    }

    pub fn act(action: Action, body: Process) -> Self {
        Process::prefix(Label::Act(action), body)
    }

    pub fn tau(body: Process) -> Self {
        Process::prefix(Label::Tau, body)
    }

    pub fn choice(l: Process, r: Process) -> Self {
        Process::Choice(Arc::new(l), Arc::new(r))
    }

    /// Right nested choice over all terms, `0` for an empty iterator.
    pub fn sum<I: IntoIterator<Item = Process>>(terms: I) -> Self {
        let terms: Vec<Process> = terms.into_iter().collect();
        let mut it = terms.into_iter().rev();
        match it.next() {
            None => Process::Nil,
            Some(last) => it.fold(last, |acc, t| Process::choice(t, acc)),
        }
    }

    pub fn rec(var: &str, body: Process) -> Self {
        Process::Rec(Name::new(var), Arc::new(body))
    }

    pub fn var(var: &str) -> Self {
        Process::Var(Name::new(var))
    }

    /// Capture avoiding substitution of a closed term for a free variable.
    pub fn subst(&self, x: &Name, r: &Process) -> Process {
        match self {
            Process::Nil | Process::One => self.clone(),
            Process::Var(y) if y == x => r.clone(),
            Process::Var(_) => self.clone(),
            Process::Prefix(l, b) => Process::Prefix(l.clone(), Arc::new(b.subst(x, r))),
            Process::Choice(a, b) => {
                Process::Choice(Arc::new(a.subst(x, r)), Arc::new(b.subst(x, r)))
            }
            Process::Rec(y, _) if y == x => self.clone(),
            Process::Rec(y, b) => Process::Rec(y.clone(), Arc::new(b.subst(x, r))),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn go(p: &Process, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match p {
                Process::Nil | Process::One => {}
                Process::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Process::Prefix(_, b) => go(b, bound, out),
                Process::Choice(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Process::Rec(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when the term contains no recursion.
    pub fn is_finite(&self) -> bool {
        match self {
            Process::Nil | Process::One => true,
            Process::Var(_) | Process::Rec(..) => false,
            Process::Prefix(_, b) => b.is_finite(),
            Process::Choice(a, b) => a.is_finite() && b.is_finite(),
        }
    }

    /// Every visible action occurring syntactically.
    pub fn actions(&self) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        self.collect_actions(&mut out);
        out
    }

    fn collect_actions(&self, out: &mut BTreeSet<Action>) {
        match self {
            Process::Nil | Process::One | Process::Var(_) => {}
            Process::Prefix(l, b) => {
                if let Label::Act(a) = l {
                    out.insert(a.clone());
                }
                b.collect_actions(out);
            }
            Process::Choice(a, b) => {
                a.collect_actions(out);
                b.collect_actions(out);
            }
            Process::Rec(_, b) => b.collect_actions(out),
        }
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.actions().into_iter().map(|a| a.name).collect()
    }

    /// Number of prefix operators.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil | Process::One | Process::Var(_) => 0,
            Process::Prefix(_, b) => 1 + b.size(),
            Process::Choice(a, b) => a.size() + b.size(),
            Process::Rec(_, b) => b.size(),
        }
    }

    /// Longest chain of nested prefixes.
    pub fn depth(&self) -> usize {
        match self {
            Process::Nil | Process::One | Process::Var(_) => 0,
            Process::Prefix(_, b) => 1 + b.depth(),
            Process::Choice(a, b) => a.depth().max(b.depth()),
            Process::Rec(_, b) => b.depth(),
        }
    }
}

impl fmt::Debug for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A parallel composition of sequential components. Components never
/// synchronise with each other on visible names when used as observers, since
/// their alphabets are disjoint by construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub components: Vec<Process>,
}

impl Configuration {
    pub fn new(components: Vec<Process>) -> Self {
        assert!(!components.is_empty(), "a configuration has at least one component");
        Configuration { components }
    }

    pub fn single(p: Process) -> Self {
        Configuration { components: vec![p] }
    }

    pub fn actions(&self) -> BTreeSet<Action> {
        self.components.iter().flat_map(|c| c.actions()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Process::is_finite)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
