use super::{PreorderError, Relation};
use crate::semantics::{default_budget, Analysis};
use crate::syntax::{shortlex, Action, Name, Process, Trace};
use crate::traceclasses::{class_after_ids, filtered_class, maz_class, project, Interface, TraceClass};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A distinguishing triple: after the class of `trace` the left process must
/// perform something in `must_set` (plus `hidden`, for the individualistic
/// relation) while the right process need not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub trace: Trace,
    /// Interface part the must set is drawn from; `None` for the classical relation.
    pub part: Option<usize>,
    pub must_set: BTreeSet<Action>,
    /// Actions outside the part that are added to the must set (individualistic only).
    pub hidden: BTreeSet<Action>,
    pub class: TraceClass,
    /// Members of the class after which the right process fails the must set.
    pub failing: Vec<Trace>,
}

impl Witness {
    pub fn effective_must_set(&self) -> BTreeSet<Action> {
        self.must_set.union(&self.hidden).cloned().collect()
    }

    fn key(&self) -> (usize, &Trace, usize, &BTreeSet<Action>, Option<usize>) {
        (self.trace.len(), &self.trace, self.must_set.len(), &self.must_set, self.part)
    }
}

impl PartialOrd for Witness {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Witness {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key()).then_with(|| self.hidden.cmp(&other.hidden))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Restrict candidate must sets to actions the left process can weakly perform.
    pub prune: bool,
    pub budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true, budget: default_budget() }
    }
}

/// Both processes explored, with their joint alphabet and trace universe.
pub struct Problem {
    pub p: Analysis<Process>,
    pub q: Analysis<Process>,
    /// Both polarities of every name of either process.
    pub alphabet: BTreeSet<Action>,
    /// Weak traces of either process in shortlex order.
    pub universe: Vec<Trace>,
}

impl Problem {
    pub fn new(p: &Process, q: &Process, budget: usize) -> Result<Self, PreorderError> {
        for t in [p, q] {
            if !t.is_finite() {
                return Err(PreorderError::NotFinite { term: t.to_string() });
            }
        }
        let pa = Analysis::new(p, budget)?;
        let qa = Analysis::new(q, budget)?;
        let names: BTreeSet<Name> = p.names().into_iter().chain(q.names()).collect();
        let alphabet = names
            .iter()
            .flat_map(|n| [Action::input(n.as_str()), Action::output(n.as_str())])
            .collect();
        let set: BTreeSet<&Trace> = pa.traces().chain(qa.traces()).collect();
        let mut universe: Vec<Trace> = set.into_iter().cloned().collect();
        universe.sort_by(|a, b| shortlex(a, b));
        Ok(Problem { p: pa, q: qa, alphabet, universe })
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.alphabet.iter().map(|a| a.name.clone()).collect()
    }

    fn after_p(&self, class: &TraceClass) -> BTreeSet<usize> {
        class_after_ids(&self.p, class)
    }

    fn after_q(&self, class: &TraceClass) -> BTreeSet<usize> {
        class_after_ids(&self.q, class)
    }

    fn failing_members(&self, class: &TraceClass, l: &BTreeSet<Action>) -> Vec<Trace> {
        let mut v: Vec<Trace> = class
            .members
            .iter()
            .filter(|t| self.q.after(t).is_some_and(|set| !self.q.must(set, l)))
            .cloned()
            .collect();
        v.sort_by(|a, b| shortlex(a, b));
        v
    }
}

fn combinations(pool: &[Action], k: usize, mut f: impl FnMut(&[Action]) -> bool) -> bool {
    let n = pool.len();
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<Action> = Vec::with_capacity(k);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| pool[i].clone()));
        if f(&buf) {
            return true;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The least must set `L` (by size, then lexicographically) drawn from `pool`
/// with `P MUST L + extra` and not `Q MUST L + extra`.
pub(crate) fn least_must_set(
    prob: &Problem,
    ps: &BTreeSet<usize>,
    qs: &BTreeSet<usize>,
    pool: &[Action],
    extra: &BTreeSet<Action>,
) -> Option<BTreeSet<Action>> {
    // Existence first: some residual of Q must avoid L + extra, and L can at
    // best be everything that residual cannot do.
    let exists = prob.q.residual_inits(qs).into_iter().any(|init| {
        if init.iter().any(|a| extra.contains(a)) {
            return false;
        }
        let l: BTreeSet<Action> =
            pool.iter().filter(|a| !init.contains(*a)).cloned().chain(extra.iter().cloned()).collect();
        prob.p.must(ps, &l)
    });
    if !exists {
        return None;
    }
    let mut found = None;
    for k in 0..=pool.len() {
        let hit = combinations(pool, k, |c| {
            let l: BTreeSet<Action> = c.iter().cloned().chain(extra.iter().cloned()).collect();
            if prob.p.must(ps, &l) && !prob.q.must(qs, &l) {
                found = Some(c.iter().cloned().collect());
                true
            } else {
                false
            }
        });
        if hit {
            return found;
        }
    }
    None
}

fn all_must_sets(
    prob: &Problem,
    ps: &BTreeSet<usize>,
    qs: &BTreeSet<usize>,
    pool: &[Action],
    extra: &BTreeSet<Action>,
    limit: usize,
    out: &mut Vec<BTreeSet<Action>>,
) {
    for k in 0..=pool.len() {
        combinations(pool, k, |c| {
            let l: BTreeSet<Action> = c.iter().cloned().chain(extra.iter().cloned()).collect();
            if prob.p.must(ps, &l) && !prob.q.must(qs, &l) {
                out.push(c.iter().cloned().collect());
            }
            out.len() >= limit
        });
        if out.len() >= limit {
            return;
        }
    }
}

fn pool_for(prob: &Problem, part: Option<&BTreeSet<Action>>, ps: &BTreeSet<usize>, prune: bool) -> Vec<Action> {
    let enabled = if prune { Some(prob.p.enabled(ps)) } else { None };
    prob.alphabet
        .iter()
        .filter(|a| part.is_none_or(|p| p.contains(*a)))
        .filter(|a| enabled.as_ref().is_none_or(|e| e.contains(*a)))
        .cloned()
        .collect()
}

fn single(t: &Trace) -> TraceClass {
    TraceClass { representative: t.clone(), members: [t.clone()].into_iter().collect() }
}

/// Per-trace, per-part inputs to the must-set search.
struct Slot {
    part: Option<usize>,
    class: TraceClass,
    extra: BTreeSet<Action>,
}

/// Enumerates the search slots of a relation for one trace, reusing classes
/// already computed.
struct Slots<'a> {
    relation: Relation,
    iface: &'a Interface,
    prob: &'a Problem,
    maz: HashMap<Trace, usize>,
    maz_classes: Vec<TraceClass>,
    filtered: BTreeMap<(usize, Trace), TraceClass>,
    complements: Vec<BTreeSet<Action>>,
}

impl<'a> Slots<'a> {
    fn new(relation: Relation, iface: &'a Interface, prob: &'a Problem) -> Self {
        let everything: BTreeSet<Action> = iface.universe().union(&prob.alphabet).cloned().collect();
        let complements = iface.parts().iter().map(|part| everything.difference(part).cloned().collect()).collect();
        Slots {
            relation,
            iface,
            prob,
            maz: HashMap::new(),
            maz_classes: Vec::new(),
            filtered: BTreeMap::new(),
            complements,
        }
    }

    fn for_trace(&mut self, s: &Trace) -> Result<Vec<Slot>, PreorderError> {
        match self.relation {
            Relation::Must => Ok(vec![Slot { part: None, class: single(s), extra: BTreeSet::new() }]),
            Relation::Unc => {
                let id = match self.maz.get(s) {
                    Some(&id) => id,
                    None => {
                        let c = maz_class(s, &self.iface.dependency())?;
                        let id = self.maz_classes.len();
                        for m in &c.members {
                            self.maz.insert(m.clone(), id);
                        }
                        self.maz_classes.push(c);
                        id
                    }
                };
                let mut class = self.maz_classes[id].clone();
                class.representative = s.clone();
                Ok((0..self.iface.len())
                    .map(|i| Slot { part: Some(i), class: class.clone(), extra: BTreeSet::new() })
                    .collect())
            }
            Relation::Ind => {
                let mut out = Vec::new();
                for i in 0..self.iface.len() {
                    let part = self.iface.part(i);
                    let key = (i, project(s, part));
                    let class = self
                        .filtered
                        .entry(key)
                        .or_insert_with(|| filtered_class(s, part, &self.prob.universe))
                        .clone();
                    let mut class = class;
                    class.representative = s.clone();
                    class.members.insert(s.clone());
                    out.push(Slot { part: Some(i), class, extra: self.complements[i].clone() });
                }
                Ok(out)
            }
        }
    }
}

fn check_interface(relation: Relation, iface: &Interface, prob: &Problem) -> Result<(), PreorderError> {
    if relation != Relation::Must {
        iface.covers(&prob.names())?;
    }
    Ok(())
}

/// Searches for the least witness; `Verdict::Holds` when there is none.
pub fn decide(
    relation: Relation,
    p: &Process,
    q: &Process,
    iface: &Interface,
    opts: SearchOptions,
) -> Result<Verdict, PreorderError> {
    let prob = Problem::new(p, q, opts.budget)?;
    decide_problem(relation, &prob, iface, opts.prune)
}

pub fn decide_problem(
    relation: Relation,
    prob: &Problem,
    iface: &Interface,
    prune: bool,
) -> Result<Verdict, PreorderError> {
    check_interface(relation, iface, prob)?;
    let mut slots = Slots::new(relation, iface, prob);
    for s in &prob.universe {
        let mut best: Option<Witness> = None;
        for slot in slots.for_trace(s)? {
            let ps = prob.after_p(&slot.class);
            let qs = prob.after_q(&slot.class);
            let part = slot.part.map(|i| iface.part(i));
            let pool = pool_for(prob, part, &ps, prune);
            if let Some(l) = least_must_set(prob, &ps, &qs, &pool, &slot.extra) {
                let eff: BTreeSet<Action> = l.union(&slot.extra).cloned().collect();
                let w = Witness {
                    trace: s.clone(),
                    part: slot.part,
                    failing: prob.failing_members(&slot.class, &eff),
                    must_set: l,
                    hidden: slot.extra,
                    class: slot.class,
                };
                if best.as_ref().is_none_or(|b| w < *b) {
                    best = Some(w);
                }
            }
        }
        if let Some(w) = best {
            return Ok(Verdict::Fails(w));
        }
    }
    Ok(Verdict::Holds)
}

/// Every witness, with unpruned must sets, in witness order. Stops after `limit`.
pub fn all_witnesses(
    relation: Relation,
    p: &Process,
    q: &Process,
    iface: &Interface,
    budget: usize,
    limit: usize,
) -> Result<Vec<Witness>, PreorderError> {
    let prob = Problem::new(p, q, budget)?;
    check_interface(relation, iface, &prob)?;
    let mut slots = Slots::new(relation, iface, &prob);
    let mut out = Vec::new();
    for s in &prob.universe {
        for slot in slots.for_trace(s)? {
            let ps = prob.after_p(&slot.class);
            let qs = prob.after_q(&slot.class);
            let pool = pool_for(&prob, slot.part.map(|i| iface.part(i)), &ps, false);
            let mut sets = Vec::new();
            all_must_sets(&prob, &ps, &qs, &pool, &slot.extra, limit.saturating_sub(out.len()), &mut sets);
            for l in sets {
                let eff: BTreeSet<Action> = l.union(&slot.extra).cloned().collect();
                out.push(Witness {
                    trace: s.clone(),
                    part: slot.part,
                    failing: prob.failing_members(&slot.class, &eff),
                    must_set: l,
                    hidden: slot.extra.clone(),
                    class: slot.class.clone(),
                });
            }
            if out.len() >= limit {
                out.sort();
                return Ok(out);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Re-checks the defining condition of a witness from scratch.
pub fn verify_witness(
    relation: Relation,
    p: &Process,
    q: &Process,
    iface: &Interface,
    w: &Witness,
    budget: usize,
) -> Result<bool, PreorderError> {
    let prob = Problem::new(p, q, budget)?;
    let class = match (relation, w.part) {
        (Relation::Must, None) => single(&w.trace),
        (Relation::Unc, Some(_)) => maz_class(&w.trace, &iface.dependency())?,
        (Relation::Ind, Some(i)) => filtered_class(&w.trace, iface.part(i), &prob.universe),
        _ => return Ok(false),
    };
    if let Some(i) = w.part {
        if i >= iface.len() || !w.must_set.is_subset(iface.part(i)) {
            return Ok(false);
        }
    }
    let l = w.effective_must_set();
    Ok(prob.p.must(&prob.after_p(&class), &l) && !prob.q.must(&prob.after_q(&class), &l))
}

pub fn leq_must(p: &Process, q: &Process) -> Result<Verdict, PreorderError> {
    decide(Relation::Must, p, q, &Interface::single(&BTreeSet::new()), SearchOptions::default())
}

pub fn leq_unc(p: &Process, q: &Process, iface: &Interface) -> Result<Verdict, PreorderError> {
    decide(Relation::Unc, p, q, iface, SearchOptions::default())
}

pub fn leq_ind(p: &Process, q: &Process, iface: &Interface) -> Result<Verdict, PreorderError> {
    decide(Relation::Ind, p, q, iface, SearchOptions::default())
}
