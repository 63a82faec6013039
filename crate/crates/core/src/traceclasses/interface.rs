use super::TraceClassError;
use crate::syntax::{parse_interface_parts, Action, Name};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A partition of (part of) the action alphabet into complement-closed,
/// pairwise disjoint parts. Names outside every part belong to an implicit
/// remainder part, which only matters for dependency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interface {
    parts: Vec<BTreeSet<Action>>,
}

impl Interface {
    /// Strict constructor: every part must already be complement closed.
    pub fn new(parts: Vec<BTreeSet<Action>>) -> Result<Self, TraceClassError> {
        for part in &parts {
            if part.is_empty() {
                return Err(TraceClassError::EmptyPart);
            }
            for a in part {
                if !part.contains(&a.complement()) {
                    return Err(TraceClassError::NotComplementClosed { action: a.to_string() });
                }
            }
        }
        let mut seen: BTreeSet<&Action> = BTreeSet::new();
        for part in &parts {
            for a in part {
                if !seen.insert(a) {
                    return Err(TraceClassError::Overlap { action: a.to_string() });
                }
            }
        }
        Ok(Interface { parts })
    }

    /// Closes every part under complement first, so `{ {a}, {b} }` is accepted
    /// as shorthand for `{ {a, ~a}, {b, ~b} }`.
    pub fn closing(parts: Vec<Vec<Action>>) -> Result<Self, TraceClassError> {
        let closed = parts
            .into_iter()
            .map(|p| p.into_iter().flat_map(|a| [a.complement(), a]).collect())
            .collect();
        Self::new(closed)
    }

    /// One part per group of names.
    pub fn from_names<S: AsRef<str>>(groups: &[&[S]]) -> Result<Self, TraceClassError> {
        Self::closing(
            groups
                .iter()
                .map(|g| g.iter().map(|n| Action::input(n.as_ref())).collect())
                .collect(),
        )
    }

    /// Parses `{ {a, ~a}, {b} }`, closing parts under complement.
    pub fn parse(src: &str) -> Result<Self, TraceClassError> {
        let parts = parse_interface_parts(src).map_err(|e| TraceClassError::Parse(e.to_string()))?;
        Self::closing(parts)
    }

    /// The interface with a single part holding both polarities of every name.
    pub fn single(names: &BTreeSet<Name>) -> Self {
        let part: BTreeSet<Action> = names
            .iter()
            .flat_map(|n| [Action::input(n.as_str()), Action::output(n.as_str())])
            .collect();
        if part.is_empty() {
            return Interface { parts: Vec::new() };
        }
        Interface { parts: vec![part] }
    }

    pub fn parts(&self) -> &[BTreeSet<Action>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &BTreeSet<Action> {
        &self.parts[i]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_names(&self, i: usize) -> BTreeSet<Name> {
        self.parts[i].iter().map(|a| a.name.clone()).collect()
    }

    /// Every action mentioned by some part.
    pub fn universe(&self) -> BTreeSet<Action> {
        self.parts.iter().flatten().cloned().collect()
    }

    pub fn part_of(&self, a: &Action) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(a))
    }

    /// Fails with the first name that no part covers.
    pub fn covers(&self, names: &BTreeSet<Name>) -> Result<(), TraceClassError> {
        let known: BTreeSet<&Name> = self.parts.iter().flatten().map(|a| &a.name).collect();
        match names.iter().find(|n| !known.contains(n)) {
            Some(n) => Err(TraceClassError::UncoveredName { name: n.to_string() }),
            None => Ok(()),
        }
    }

    /// Dependency relation: two actions depend on each other when they lie in
    /// the same part, or both lie outside every part.
    pub fn dependency(&self) -> Dependency {
        let mut part_of = BTreeMap::new();
        for (i, p) in self.parts.iter().enumerate() {
            for a in p {
                part_of.insert(a.clone(), i);
            }
        }
        Dependency { part_of, rest: self.parts.len() }
    }

    /// True when every part of `self` lies inside some part of `coarser`.
    pub fn is_refinement_of(&self, coarser: &Interface) -> bool {
        self.parts.iter().all(|p| coarser.parts.iter().any(|q| p.is_subset(q)))
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{ ")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let items: Vec<String> = p.iter().map(|a| a.to_string()).collect();
            write!(f, "{{{}}}", items.join(", "))?;
        }
        f.write_str(" }")
    }
}

#[derive(Clone, Debug)]
pub struct Dependency {
    part_of: BTreeMap<Action, usize>,
    rest: usize,
}

impl Dependency {
    pub fn class_of(&self, a: &Action) -> usize {
        self.part_of.get(a).copied().unwrap_or(self.rest)
    }

    pub fn depends(&self, a: &Action, b: &Action) -> bool {
        self.class_of(a) == self.class_of(b)
    }
}
