use super::lts::{Lts, Steppable};
use super::SemanticsError;
use crate::syntax::{Action, Label, Trace};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Weak views of an explored LTS: tau closures, weakly enabled actions and
/// the table of tau-closed residual sets after each weak trace.
#[derive(Clone, Debug)]
pub struct Analysis<S> {
    pub lts: Lts<S>,
    closure: Vec<Vec<usize>>,
    init: Vec<BTreeSet<Action>>,
    table: BTreeMap<Trace, BTreeSet<usize>>,
}

impl<S: Steppable> Analysis<S> {
    pub fn new(root: &S, budget: usize) -> Result<Self, SemanticsError> {
        Self::from_lts(Lts::explore(root, budget)?, budget)
    }
}

impl<S> Analysis<S> {
    pub fn from_lts(lts: Lts<S>, budget: usize) -> Result<Self, SemanticsError> {
        let n = lts.len();
        let mut closure = Vec::with_capacity(n);
        for i in 0..n {
            let mut seen = vec![false; n];
            let mut stack = vec![i];
            seen[i] = true;
            let mut out = Vec::new();
            while let Some(x) = stack.pop() {
                out.push(x);
                for t in lts.taus(x) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            out.sort_unstable();
            closure.push(out);
        }
        let init = (0..n)
            .map(|i| {
                closure[i]
                    .iter()
                    .flat_map(|&j| lts.visible(j).map(|(a, _)| a.clone()))
                    .collect()
            })
            .collect();
        let mut a = Analysis { lts, closure, init, table: BTreeMap::new() };
        a.build_table(budget)?;
        Ok(a)
    }

    fn build_table(&mut self, budget: usize) -> Result<(), SemanticsError> {
        if has_visible_cycle(&self.lts) {
            return Err(SemanticsError::InfiniteTraces);
        }
        let start: BTreeSet<usize> = self.closure[0].iter().copied().collect();
        let mut queue = VecDeque::new();
        self.table.insert(Vec::new(), start.clone());
        queue.push_back((Vec::new(), start));
        while let Some((t, set)) = queue.pop_front() {
            let mut by_action: BTreeMap<Action, BTreeSet<usize>> = BTreeMap::new();
            for &s in &set {
                for (a, x) in self.lts.visible(s) {
                    by_action.entry(a.clone()).or_default().extend(self.closure[x].iter().copied());
                }
            }
            for (a, next) in by_action {
                if self.table.len() >= budget {
                    return Err(SemanticsError::BudgetExceeded { limit: budget });
                }
                let mut t2 = t.clone();
                t2.push(a);
                self.table.insert(t2.clone(), next.clone());
                queue.push_back((t2, next));
            }
        }
        Ok(())
    }

    pub fn state(&self, i: usize) -> &S {
        &self.lts.states[i]
    }

    pub fn closure(&self, i: usize) -> &[usize] {
        &self.closure[i]
    }

    /// Visible actions weakly enabled at state `i`.
    pub fn init(&self, i: usize) -> &BTreeSet<Action> {
        &self.init[i]
    }

    /// All weak traces with their tau-closed residual sets.
    pub fn table(&self) -> &BTreeMap<Trace, BTreeSet<usize>> {
        &self.table
    }

    pub fn after(&self, t: &[Action]) -> Option<&BTreeSet<usize>> {
        self.table.get(t)
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.table.keys()
    }

    /// `set MUST l`: every residual reachable by tau weakly enables something in `l`.
    pub fn must(&self, set: &BTreeSet<usize>, l: &BTreeSet<Action>) -> bool {
        set.iter()
            .all(|&i| self.closure[i].iter().all(|&j| self.init[j].iter().any(|a| l.contains(a))))
    }

    /// Actions weakly enabled by some member of the closure of `set`.
    pub fn enabled(&self, set: &BTreeSet<usize>) -> BTreeSet<Action> {
        set.iter().flat_map(|&i| self.init[i].iter().cloned()).collect()
    }

    /// The initials of every residual in the closure of `set`.
    pub fn residual_inits(&self, set: &BTreeSet<usize>) -> Vec<&BTreeSet<Action>> {
        let mut ids: BTreeSet<usize> = BTreeSet::new();
        for &i in set {
            ids.extend(self.closure[i].iter().copied());
        }
        ids.into_iter().map(|j| &self.init[j]).collect()
    }

    /// True when no infinite tau path starts at state `i`.
    pub fn converges(&self, i: usize) -> bool {
        let n = self.lts.len();
        // 0 unvisited, 1 on stack, 2 done
        let mut colour = vec![0u8; n];
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(i, self.lts.taus(i).collect())];
        colour[i] = 1;
        while let Some((x, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(t) => match colour[t] {
                    1 => return false,
                    0 => {
                        colour[t] = 1;
                        let succ = self.lts.taus(t).collect();
                        stack.push((t, succ));
                    }
                    _ => {}
                },
                None => {
                    colour[*x] = 2;
                    stack.pop();
                }
            }
        }
        true
    }
}

fn moves<S>(lts: &Lts<S>, i: usize) -> impl Iterator<Item = (bool, usize)> + '_ {
    lts.edges[i].iter().filter(|(l, _)| *l != Label::Tick).map(|(l, t)| (*l != Label::Tau, *t))
}

/// Whether some cycle of the graph performs a visible action, in which case
/// the weak traces are infinitely many.
fn has_visible_cycle<S>(lts: &Lts<S>) -> bool {
    let n = lts.len();
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for (_, t) in moves(lts, i) {
            indegree[t] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut removed = 0;
    while let Some(x) = ready.pop() {
        removed += 1;
        for (_, t) in moves(lts, x) {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push(t);
            }
        }
    }
    if removed == n {
        return false;
    }
    (0..n).any(|x| {
        moves(lts, x).any(|(visible, y)| {
            if !visible {
                return false;
            }
            let mut seen = vec![false; n];
            let mut stack = vec![y];
            seen[y] = true;
            while let Some(z) = stack.pop() {
                if z == x {
                    return true;
                }
                for (_, t) in moves(lts, z) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            false
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_process, parse_trace, Process};

    fn an(s: &str) -> Analysis<Process> {
        Analysis::new(&parse_process(s).unwrap(), 10_000).unwrap()
    }

    fn acts(s: &[&str]) -> BTreeSet<Action> {
        s.iter().map(|x| Action::parse(x).unwrap()).collect()
    }

    #[test]
    fn traces_skip_tau_and_tick() {
        let a = an("tau.a.1 + b.tau.c");
        let ts: Vec<String> = a.traces().map(|t| crate::syntax::format_trace(t)).collect();
        assert_eq!(ts, vec!["eps", "a", "b", "b c"]);
    }

    #[test]
    fn after_is_tau_closed() {
        let a = an("a.(tau.b + tau.c)");
        let set = a.after(&parse_trace("a").unwrap()).unwrap();
        assert_eq!(set.len(), 3);
    }

    #[test]
    fn must_sets() {
        let a = an("tau.a + tau.b");
        let root = a.after(&[]).unwrap().clone();
        assert!(a.must(&root, &acts(&["a", "b"])));
        assert!(!a.must(&root, &acts(&["a"])));
        assert!(!a.must(&root, &BTreeSet::new()));
        assert!(a.must(&BTreeSet::new(), &BTreeSet::new()));
    }

    #[test]
    fn divergence_is_detected() {
        let a = an("rec X.(tau.X + a)");
        assert!(!a.converges(0));
        assert!(an("tau.tau.a").converges(0));
    }

    #[test]
    fn weak_initials() {
        let a = an("tau.a + b");
        assert_eq!(a.init(0), &acts(&["a", "b"]));
        assert_eq!(a.enabled(a.after(&[]).unwrap()), acts(&["a", "b"]));
    }

    #[test]
    fn visible_loops_have_infinitely_many_traces() {
        let r = Analysis::new(&parse_process("rec X.(a.X + tau.1)").unwrap(), 10_000);
        assert!(matches!(r, Err(SemanticsError::InfiniteTraces)));
        let t = an("rec X.(tau.X + a.0)");
        assert_eq!(t.traces().count(), 2);
    }
}
