mod common;

use mtp::preorders::{
    all_witnesses, decide, leq_must, verify_witness, Relation, SearchOptions, Verdict,
};
use mtp::semantics::{default_budget, must_pass, traces};
use mtp::syntax::{parse_configuration, parse_process, Action, Configuration, Label, Process};
use mtp::traceclasses::{filtered_class, maz_class, project, Interface};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn action() -> impl Strategy<Value = Action> {
    (0..common::NAMES.len(), any::<bool>()).prop_map(|(i, out)| {
        let n = common::NAMES[i];
        if out {
            Action::output(n)
        } else {
            Action::input(n)
        }
    })
}

fn process() -> impl Strategy<Value = Process> {
    let leaf = prop_oneof![Just(Process::Nil), Just(Process::One)];
    leaf.prop_recursive(5, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Process::tau),
            (action(), inner.clone()).prop_map(|(a, p)| Process::act(a, p)),
            (inner.clone(), inner).prop_map(|(l, r)| Process::choice(l, r)),
        ]
    })
    .prop_filter("at most 8 prefixes", |p| p.size() <= 8)
}

fn interface() -> impl Strategy<Value = Interface> {
    (any::<u64>(), 2usize..=3).prop_map(|(seed, parts)| common::interface(&mut common::rng(seed), &common::NAMES, parts))
}

fn word() -> impl Strategy<Value = Vec<Action>> {
    prop::collection::vec(action(), 0..6)
}

fn holds(rel: Relation, p: &Process, q: &Process, i: &Interface) -> bool {
    decide(rel, p, q, i, SearchOptions::default()).unwrap().holds()
}

const RELATIONS: [Relation; 3] = [Relation::Must, Relation::Unc, Relation::Ind];

fn letters(s: &[Action]) -> Vec<Action> {
    let mut v = s.to_vec();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_the_identity(p in process()) {
        prop_assert_eq!(parse_process(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn preorders_are_reflexive(p in process(), i in interface()) {
        for rel in RELATIONS {
            prop_assert!(holds(rel, &p, &p, &i), "{} not reflexive on {}", rel, p);
        }
    }

    #[test]
    fn preorders_are_transitive(x in process(), y in process(), z in process(), i in interface()) {
        // Internal choice only ever loses tests, so this chain has true premises for must.
        let chain = [
            Process::sum([Process::tau(x.clone()), Process::tau(y.clone()), Process::tau(z.clone())]),
            Process::sum([Process::tau(x.clone()), Process::tau(y.clone())]),
            x.clone(),
        ];
        for triple in [[&chain[0], &chain[1], &chain[2]], [&x, &y, &z]] {
            for rel in RELATIONS {
                let [a, b, c] = triple;
                if holds(rel, a, b, &i) && holds(rel, b, c, &i) {
                    prop_assert!(holds(rel, a, c, &i), "{} not transitive on {} {} {}", rel, a, b, c);
                }
            }
        }
        prop_assert!(holds(Relation::Must, &chain[0], &chain[2], &i));
    }

    #[test]
    fn a_trace_only_on_the_right_breaks_must(p in process(), q in process()) {
        let (tp, tq) = (traces(&p).unwrap(), traces(&q).unwrap());
        if let Some(s) = tq.difference(&tp).next() {
            let w = leq_must(&p, &q).unwrap();
            let w = w.witness().expect("a witness");
            prop_assert!(w.trace.len() <= s.len());
        }
    }

    #[test]
    fn every_process_passes_the_observer_one(p in process()) {
        prop_assert!(must_pass(&p, &parse_configuration("1").unwrap()).unwrap());
    }

    #[test]
    fn decided_witnesses_verify_and_lead_the_enumeration(p in process(), q in process(), i in interface()) {
        for rel in RELATIONS {
            let used = if rel == Relation::Must { Interface::single(&BTreeSet::new()) } else { i.clone() };
            if let Verdict::Fails(w) = decide(rel, &p, &q, &used, SearchOptions::default()).unwrap() {
                prop_assert!(verify_witness(rel, &p, &q, &used, &w, default_budget()).unwrap());
                let all = all_witnesses(rel, &p, &q, &used, default_budget(), 1_000).unwrap();
                prop_assert_eq!(&all[0].trace, &w.trace);
                prop_assert_eq!(all[0].part, w.part);
                prop_assert!(all.iter().all(|x| verify_witness(rel, &p, &q, &used, x, default_budget()).unwrap()));
            }
        }
    }

    #[test]
    fn pruning_does_not_change_verdicts(p in process(), q in process(), i in interface()) {
        for rel in RELATIONS {
            let pruned = decide(rel, &p, &q, &i, SearchOptions { prune: true, budget: default_budget() }).unwrap();
            let full = decide(rel, &p, &q, &i, SearchOptions { prune: false, budget: default_budget() }).unwrap();
            prop_assert_eq!(pruned.holds(), full.holds());
            if let (Verdict::Fails(a), Verdict::Fails(b)) = (pruned, full) {
                prop_assert_eq!((a.trace, a.part), (b.trace, b.part));
            }
        }
    }

    #[test]
    fn mazurkiewicz_classes_are_equivalence_classes(s in word(), i in interface()) {
        let dep = i.dependency();
        let class = maz_class(&s, &dep).unwrap();
        prop_assert!(class.contains(&s));
        for t in &class.members {
            prop_assert_eq!(letters(t), letters(&s));
            prop_assert_eq!(&maz_class(t, &dep).unwrap().members, &class.members);
        }
    }

    #[test]
    fn mazurkiewicz_classes_sit_inside_filtered_ones(s in word(), i in interface()) {
        let class = maz_class(&s, &i.dependency()).unwrap();
        for k in 0..i.len() {
            let filtered = filtered_class(&s, i.part(k), &class.members);
            prop_assert_eq!(&filtered.members, &class.members);
        }
    }

    #[test]
    fn finer_interfaces_give_larger_classes(s in word(), i in interface()) {
        let names = |k: usize| i.part_names(k).into_iter().map(|n| n.as_str().to_string()).collect::<Vec<_>>();
        let mut groups = vec![[names(0), names(1)].concat()];
        groups.extend((2..i.len()).map(names));
        let refs: Vec<&[String]> = groups.iter().map(Vec::as_slice).collect();
        let coarser = Interface::from_names(&refs).unwrap();
        let trivial = Interface::from_names(&[&common::NAMES[..]]).unwrap();
        prop_assert!(i.is_refinement_of(&coarser) && coarser.is_refinement_of(&trivial));
        let fine = maz_class(&s, &i.dependency()).unwrap();
        let coarse = maz_class(&s, &coarser.dependency()).unwrap();
        let single = maz_class(&s, &trivial.dependency()).unwrap();
        prop_assert_eq!(single.members.len(), 1);
        prop_assert!(single.members.is_subset(&coarse.members));
        prop_assert!(coarse.members.is_subset(&fine.members));
    }

    #[test]
    fn projection_is_idempotent_and_distributes(s in word(), t in word(), i in interface()) {
        for part in i.parts() {
            let once = project(&s, part);
            prop_assert_eq!(project(&once, part), once.clone());
            let st: Vec<Action> = s.iter().chain(&t).cloned().collect();
            let mut joined = once;
            joined.extend(project(&t, part));
            prop_assert_eq!(project(&st, part), joined);
        }
    }

    #[test]
    fn configurations_tick_only_jointly(x in process(), y in process()) {
        let c = Configuration::new(vec![x.clone(), y.clone()]);
        let ticks = |p: &Process| p.step().iter().any(|(l, _)| *l == Label::Tick);
        prop_assert_eq!(c.can_tick(), ticks(&x) && ticks(&y));
    }
}
