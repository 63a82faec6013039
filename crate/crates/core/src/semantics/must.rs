use super::lts::{Lts, Steppable};
use super::SemanticsError;
use crate::syntax::{Configuration, Process};
use std::collections::HashMap;

/// The exhaustive must oracle. `p` passes `o` when every maximal tau
/// computation of `p | o` reaches a point where `o` can tick.
pub fn must_pass_lts<S>(p: &Lts<S>, o: &[Lts<Process>], limit: usize) -> Result<bool, SemanticsError> {
    let n = o.len();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut nodes: Vec<Vec<u32>> = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut success: Vec<bool> = Vec::new();

    let root = vec![0u32; n + 1];
    index.insert(root.clone(), 0);
    nodes.push(root);
    let mut next = 0;
    while next < nodes.len() {
        let node = nodes[next].clone();
        let ok = (0..n).all(|i| o[i].can_tick(node[i + 1] as usize));
        success.push(ok);
        let mut targets: Vec<Vec<u32>> = Vec::new();
        if !ok {
            let ps = node[0] as usize;
            for t in p.taus(ps) {
                let mut m = node.clone();
                m[0] = t as u32;
                targets.push(m);
            }
            for i in 0..n {
                let oi = node[i + 1] as usize;
                for t in o[i].taus(oi) {
                    let mut m = node.clone();
                    m[i + 1] = t as u32;
                    targets.push(m);
                }
                for (a, t) in o[i].visible(oi) {
                    let co = a.complement();
                    for (b, pt) in p.visible(ps) {
                        if *b == co {
                            let mut m = node.clone();
                            m[0] = pt as u32;
                            m[i + 1] = t as u32;
                            targets.push(m);
                        }
                    }
                    for j in (i + 1)..n {
                        let oj = node[j + 1] as usize;
                        for (b, tj) in o[j].visible(oj) {
                            if *b == co {
                                let mut m = node.clone();
                                m[i + 1] = t as u32;
                                m[j + 1] = tj as u32;
                                targets.push(m);
                            }
                        }
                    }
                }
            }
        }
        let mut ids = Vec::with_capacity(targets.len());
        for m in targets {
            let id = match index.get(&m) {
                Some(&id) => id,
                None => {
                    if nodes.len() >= limit {
                        return Err(SemanticsError::BudgetExceeded { limit });
                    }
                    let id = nodes.len();
                    index.insert(m.clone(), id);
                    nodes.push(m);
                    id
                }
            };
            ids.push(id);
        }
        ids.sort_unstable();
        ids.dedup();
        succ.push(ids);
        next += 1;
    }

    // Greatest fixpoint: unsuccessful nodes from which some maximal path avoids success.
    let total = nodes.len();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (x, ss) in succ.iter().enumerate() {
        for &y in ss {
            preds[y].push(x);
        }
    }
    let mut bad: Vec<bool> = success.iter().map(|s| !s).collect();
    let mut live: Vec<usize> = succ.iter().map(|ss| ss.len()).collect();
    let mut work: Vec<usize> = (0..total).filter(|&x| !bad[x]).collect();
    while let Some(y) = work.pop() {
        for &x in &preds[y] {
            if bad[x] {
                live[x] -= 1;
                if live[x] == 0 {
                    bad[x] = false;
                    work.push(x);
                }
            }
        }
    }
    Ok(!bad[0])
}

fn observer_lts(o: &Configuration, budget: usize) -> Result<Vec<Lts<Process>>, SemanticsError> {
    o.components.iter().map(|c| Lts::explore(c, budget)).collect()
}

/// `p must o` for any steppable process side.
pub fn must_pass_with<S: Steppable>(p: &S, o: &Configuration, budget: usize) -> Result<bool, SemanticsError> {
    let pl = Lts::explore(p, budget)?;
    let ol = observer_lts(o, budget)?;
    must_pass_lts(&pl, &ol, budget.saturating_mul(100))
}

pub fn must_pass(p: &Process, o: &Configuration) -> Result<bool, SemanticsError> {
    must_pass_with(p, o, super::default_budget())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::hide;
    use crate::syntax::{parse_configuration, parse_process, Name};

    fn pass(p: &str, o: &str) -> bool {
        must_pass(&parse_process(p).unwrap(), &parse_configuration(o).unwrap()).unwrap()
    }

    #[test]
    fn trivial_observers() {
        assert!(pass("0", "1"));
        assert!(!pass("0", "0"));
        assert!(!pass("a", "~b.1"));
        assert!(pass("a", "~a.1"));
    }

    #[test]
    fn internal_choice_is_demonic() {
        assert!(!pass("tau.a + tau.b", "~a.1"));
        assert!(pass("tau.a + tau.b", "~a.1 + ~b.1"));
        assert!(pass("a + b", "~a.1"));
    }

    #[test]
    fn tick_requires_every_component() {
        assert!(!pass("0", "1 | 0"));
        assert!(pass("a", "~a.1 | 1"));
        assert!(!pass("tau.0 + tau.a", "~a.1 | 1"));
        assert!(pass("tau.0 + tau.a", "tau.1 + ~a.1 | 1"));
    }

    #[test]
    fn success_before_a_later_deadlock_counts() {
        assert!(pass("a.b", "1 + ~a.0"));
    }

    #[test]
    fn divergence_fails_unless_already_successful() {
        assert!(!pass("rec X.tau.X", "tau.1"));
        assert!(pass("rec X.tau.X", "1"));
    }

    #[test]
    fn observer_components_may_synchronise() {
        assert!(pass("0", "c.1 | ~c.1"));
    }

    #[test]
    fn hidden_views() {
        let p = parse_process("a.b").unwrap();
        let v = hide(&p, &[Name::new("b")].into_iter().collect());
        let o = parse_configuration("~b.1").unwrap();
        assert!(must_pass_with(&v, &o, 1000).unwrap());
        assert!(!must_pass(&p, &o).unwrap());
    }
}
