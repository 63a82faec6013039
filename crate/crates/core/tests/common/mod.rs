#![allow(dead_code)]

use mtp::syntax::{Action, Configuration, Process};
use mtp::traceclasses::Interface;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn action(rng: &mut ChaCha8Rng, names: &[&str]) -> Action {
    let n = names[rng.gen_range(0..names.len())];
    if rng.gen_bool(0.5) {
        Action::input(n)
    } else {
        Action::output(n)
    }
}

/// A random finite term with at most `prefixes` prefix operators.
pub fn process(rng: &mut ChaCha8Rng, names: &[&str], prefixes: usize) -> Process {
    if prefixes == 0 {
        return if rng.gen_bool(0.7) { Process::Nil } else { Process::One };
    }
    match rng.gen_range(0..10) {
        0 => Process::Nil,
        1 => Process::One,
        2..=3 => Process::tau(process(rng, names, prefixes - 1)),
        4..=6 => {
            let a = action(rng, names);
            Process::act(a, process(rng, names, prefixes - 1))
        }
        _ => {
            let left = rng.gen_range(1..=prefixes.max(1));
            let right = prefixes - left.min(prefixes);
            let l = process(rng, names, left);
            let r = process(rng, names, right);
            Process::choice(l, r)
        }
    }
}

/// Either a fresh term or a small mutation of `p`, so that both verdicts occur.
pub fn partner(rng: &mut ChaCha8Rng, p: &Process, names: &[&str], prefixes: usize) -> Process {
    match rng.gen_range(0..4) {
        0 => process(rng, names, prefixes),
        1 => Process::choice(p.clone(), process(rng, names, prefixes.saturating_sub(p.size()).min(2))),
        2 => Process::choice(Process::tau(p.clone()), Process::tau(process(rng, names, 1))),
        _ => mutate(rng, p, names),
    }
}

fn mutate(rng: &mut ChaCha8Rng, p: &Process, names: &[&str]) -> Process {
    match p {
        Process::Prefix(l, b) if rng.gen_bool(0.5) => Process::Prefix(l.clone(), mutate(rng, b, names).into()),
        Process::Choice(l, r) => {
            if rng.gen_bool(0.5) {
                Process::Choice(mutate(rng, l, names).into(), r.clone())
            } else {
                Process::Choice(l.clone(), mutate(rng, r, names).into())
            }
        }
        _ => process(rng, names, 2),
    }
}

/// A random partition of `names` into `parts` non-empty groups.
pub fn interface(rng: &mut ChaCha8Rng, names: &[&str], parts: usize) -> Interface {
    let mut shuffled: Vec<&str> = names.to_vec();
    shuffled.shuffle(rng);
    let mut groups: Vec<Vec<&str>> = vec![Vec::new(); parts];
    for (i, n) in shuffled.iter().enumerate() {
        let g = if i < parts { i } else { rng.gen_range(0..parts) };
        groups[g].push(n);
    }
    let refs: Vec<&[&str]> = groups.iter().map(|g| g.as_slice()).collect();
    Interface::from_names(&refs).expect("random partition is an interface")
}

/// A random pair of terms of size at most 8 over at most 4 names, with an
/// interface of 2 or 3 parts covering every name.
pub fn instance(seed: u64) -> (Process, Process, Interface) {
    let mut r = rng(seed);
    let parts = r.gen_range(2..=3);
    let count = r.gen_range(parts..=4);
    let names = &NAMES[..count];
    let p = process(&mut r, names, 8);
    let mut q = partner(&mut r, &p, names, 8);
    while q.size() > 8 {
        q = process(&mut r, names, 8);
    }
    let iface = interface(&mut r, names, parts);
    (p, q, iface)
}

/// A random sequential observer component of the given depth over `acts`.
pub fn observer_component(rng: &mut ChaCha8Rng, acts: &[Action], depth: usize) -> Process {
    if depth == 0 || acts.is_empty() {
        return if rng.gen_bool(0.6) { Process::One } else { Process::Nil };
    }
    match rng.gen_range(0..8) {
        0 => Process::One,
        1 => Process::Nil,
        2 => Process::tau(observer_component(rng, acts, depth - 1)),
        3..=5 => {
            let a = acts[rng.gen_range(0..acts.len())].clone();
            Process::act(a, observer_component(rng, acts, depth - 1))
        }
        _ => Process::choice(observer_component(rng, acts, depth - 1), observer_component(rng, acts, depth - 1)),
    }
}

/// One random component per part, drawn over that part's actions.
pub fn uncoordinated_observer(rng: &mut ChaCha8Rng, iface: &Interface, depth: usize) -> Configuration {
    let comps = iface
        .parts()
        .iter()
        .map(|part| {
            let acts: Vec<Action> = part.iter().cloned().collect();
            observer_component(rng, &acts, depth)
        })
        .collect();
    Configuration::new(comps)
}
