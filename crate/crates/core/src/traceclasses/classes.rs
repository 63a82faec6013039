use super::interface::Dependency;
use super::TraceClassError;
use crate::semantics::{Analysis, SemanticsError};
use crate::syntax::{Action, Process, Trace};
use std::collections::{BTreeSet, VecDeque};

pub const MAZ_CLASS_LIMIT: usize = 1_000_000;

/// A set of traces with the trace it was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceClass {
    pub representative: Trace,
    pub members: BTreeSet<Trace>,
}

impl TraceClass {
    pub fn contains(&self, t: &[Action]) -> bool {
        self.members.contains(t)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The Mazurkiewicz class of `s`: all traces obtained by repeatedly swapping
/// adjacent independent actions.
pub fn maz_class(s: &[Action], dep: &Dependency) -> Result<TraceClass, TraceClassError> {
    maz_class_limited(s, dep, MAZ_CLASS_LIMIT)
}

pub fn maz_class_limited(s: &[Action], dep: &Dependency, limit: usize) -> Result<TraceClass, TraceClassError> {
    let mut members: BTreeSet<Trace> = BTreeSet::new();
    let mut queue = VecDeque::new();
    members.insert(s.to_vec());
    queue.push_back(s.to_vec());
    while let Some(t) = queue.pop_front() {
        for i in 0..t.len().saturating_sub(1) {
            if dep.depends(&t[i], &t[i + 1]) {
                continue;
            }
            let mut u = t.clone();
            u.swap(i, i + 1);
            if !members.contains(&u) {
                if members.len() >= limit {
                    return Err(TraceClassError::ClassTooLarge { limit });
                }
                members.insert(u.clone());
                queue.push_back(u);
            }
        }
    }
    Ok(TraceClass { representative: s.to_vec(), members })
}

/// Keeps only the actions of `s` that lie in `part`.
pub fn project(s: &[Action], part: &BTreeSet<Action>) -> Trace {
    s.iter().filter(|a| part.contains(a)).cloned().collect()
}

/// Traces of `universe`, together with `s` itself, whose projection on `part`
/// equals that of `s`.
pub fn filtered_class<'a, I>(s: &[Action], part: &BTreeSet<Action>, universe: I) -> TraceClass
where
    I: IntoIterator<Item = &'a Trace>,
{
    let target = project(s, part);
    let mut members: BTreeSet<Trace> =
        universe.into_iter().filter(|t| project(t, part) == target).cloned().collect();
    members.insert(s.to_vec());
    TraceClass { representative: s.to_vec(), members }
}

/// State ids reachable after some member of the class.
pub fn class_after_ids<S>(a: &Analysis<S>, class: &TraceClass) -> BTreeSet<usize> {
    class.members.iter().filter_map(|t| a.after(t)).flatten().copied().collect()
}

/// `p after C`: the union of `p after t` over the members `t` of `C`.
pub fn class_after(p: &Process, class: &TraceClass) -> Result<BTreeSet<Process>, SemanticsError> {
    let a = crate::semantics::analyse(p)?;
    Ok(class_after_ids(&a, class).into_iter().map(|i| a.state(i).clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::traces;
    use crate::syntax::{format_trace, parse_process, parse_trace};
    use crate::traceclasses::Interface;

    fn t(s: &str) -> Trace {
        parse_trace(s).unwrap()
    }

    #[test]
    fn maz_class_swaps_independent_letters() {
        let i = Interface::from_names(&[&["a"], &["b"], &["c"]]).unwrap();
        let c = maz_class(&t("a b c"), &i.dependency()).unwrap();
        assert_eq!(c.len(), 6);
        let j = Interface::from_names(&[&["a", "b"], &["c"]]).unwrap();
        let d = maz_class(&t("a b c"), &j.dependency()).unwrap();
        let got: Vec<String> = d.members.iter().map(|x| format_trace(x)).collect();
        assert_eq!(got, vec!["a b c", "a c b", "c a b"]);
    }

    #[test]
    fn dependent_letters_keep_their_order() {
        let i = Interface::from_names(&[&["a"], &["b"]]).unwrap();
        let c = maz_class(&t("a ~a b"), &i.dependency()).unwrap();
        assert_eq!(c.len(), 3);
        assert!(!c.contains(&t("~a a b")));
    }

    #[test]
    fn class_limit_is_enforced() {
        let i = Interface::from_names(&[&["a"], &["b"], &["c"]]).unwrap();
        let r = maz_class_limited(&t("a b c"), &i.dependency(), 4);
        assert!(matches!(r, Err(TraceClassError::ClassTooLarge { .. })));
    }

    #[test]
    fn projection_and_filtered_class() {
        let cd: BTreeSet<Action> = ["c", "~c", "d", "~d"].iter().map(|x| Action::parse(x).unwrap()).collect();
        assert_eq!(project(&t("a c b d"), &cd), t("c d"));
        let p1 = parse_process("a.c + b.d").unwrap();
        let p2 = parse_process("a.d + b.c").unwrap();
        let mut u = traces(&p1).unwrap();
        u.extend(traces(&p2).unwrap());
        let c = filtered_class(&t("eps"), &cd, &u);
        let got: Vec<String> = c.members.iter().map(|x| format_trace(x)).collect();
        assert_eq!(got, vec!["eps", "a", "b"]);
        let after = class_after(&p1, &c).unwrap();
        let expect: BTreeSet<Process> =
            ["a.c + b.d", "c", "d"].iter().map(|s| parse_process(s).unwrap()).collect();
        assert_eq!(after, expect);
    }

    #[test]
    fn filtered_class_includes_its_representative() {
        let a: BTreeSet<Action> = [Action::input("a")].into_iter().collect();
        let c = filtered_class(&t("a"), &a, std::iter::empty());
        assert_eq!(c.len(), 1);
    }
}
