//! Browser bindings. Each export takes plain strings and returns JSON text;
//! failures come back as a thrown string. The `api` module holds the same
//! operations as ordinary Rust functions so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use mtp::corpus::Sources;
    use mtp::preorders::{check, relate, CheckOptions, Relation};
    use mtp::semantics::{default_budget, Analysis, Lts, LtsDump};
    use mtp::syntax::{format_trace, parse_definitions, parse_trace, shortlex, Trace};
    use mtp::traceclasses::{filtered_class, maz_class, Interface};
    use serde::Serialize;
    use std::collections::BTreeSet;

    fn sources(defs: &str) -> Result<Sources, String> {
        let mut s = Sources::new("");
        if !defs.trim().is_empty() {
            s.defs = parse_definitions(defs).map_err(|e| format!("definitions: {e}"))?;
        }
        Ok(s)
    }

    fn json<T: Serialize>(v: &T) -> String {
        serde_json::to_string(v).expect("serializable")
    }

    fn interface(src: &Sources, r: &str) -> Result<Interface, String> {
        if r.trim().is_empty() {
            return Ok(Interface::single(&BTreeSet::new()));
        }
        src.interface(r).map_err(|e| e.to_string())
    }

    /// One directed check with a synthesized observer; `relation` is must, unc or ind.
    pub fn check_pair(relation: &str, lhs: &str, rhs: &str, iface: &str, defs: &str) -> Result<String, String> {
        let relation: Relation = relation.parse()?;
        let src = sources(defs)?;
        let i = interface(&src, iface)?;
        if relation != Relation::Must && i.is_empty() {
            return Err(format!("the {relation} relation needs an interface"));
        }
        let p = src.process(lhs).map_err(|e| e.to_string())?;
        let q = src.process(rhs).map_err(|e| e.to_string())?;
        let opts = CheckOptions { budget: default_budget(), prune: true, observer: true };
        Ok(json(&check(relation, &p, &q, &i, opts).report()))
    }

    /// All six directed verdicts.
    pub fn relate_pair(lhs: &str, rhs: &str, iface: &str, defs: &str) -> Result<String, String> {
        let src = sources(defs)?;
        let i = interface(&src, iface)?;
        let p = src.process(lhs).map_err(|e| e.to_string())?;
        let q = src.process(rhs).map_err(|e| e.to_string())?;
        let opts = CheckOptions { budget: default_budget(), prune: true, observer: true };
        Ok(json(&relate(&p, &q, &i, opts).report()))
    }

    #[derive(Serialize)]
    pub struct Explored {
        pub lts: LtsDump,
        /// `null` when the term has infinitely many traces.
        pub traces: Option<Vec<String>>,
    }

    /// The transition graph of a term or configuration and its weak traces.
    pub fn explore(term: &str, defs: &str) -> Result<String, String> {
        let src = sources(defs)?;
        let c = src.configuration(term).map_err(|e| e.to_string())?;
        let budget = default_budget();
        let (lts, traces) = if c.len() == 1 {
            let lts = Lts::explore(&c.components[0], budget).map_err(|e| e.to_string())?;
            let traces = Analysis::from_lts(lts.clone(), budget).ok().map(|a| a.traces().cloned().collect::<Vec<_>>());
            (lts.dump(), traces)
        } else {
            let lts = Lts::explore(&c, budget).map_err(|e| e.to_string())?;
            let traces = Analysis::from_lts(lts.clone(), budget).ok().map(|a| a.traces().cloned().collect::<Vec<_>>());
            (lts.dump(), traces)
        };
        let traces = traces.map(|mut ts: Vec<Trace>| {
            ts.sort_by(|a, b| shortlex(a, b));
            ts.iter().map(|t| format_trace(t)).collect()
        });
        Ok(json(&Explored { lts, traces }))
    }

    /// The Mazurkiewicz class of `trace`, or with `part` set, its filtered
    /// class within the traces of the `among` terms (one per line).
    pub fn trace_class(trace: &str, iface: &str, part: Option<usize>, among: &str, defs: &str) -> Result<String, String> {
        let src = sources(defs)?;
        let i = interface(&src, iface)?;
        let s = parse_trace(trace).ok_or_else(|| format!("cannot read trace `{trace}`"))?;
        let class = match part {
            None => maz_class(&s, &i.dependency()).map_err(|e| e.to_string())?,
            Some(k) if k < i.len() => {
                let mut universe = BTreeSet::new();
                for line in among.lines().filter(|l| !l.trim().is_empty()) {
                    let p = src.process(line).map_err(|e| e.to_string())?;
                    let a = Analysis::new(&p, default_budget()).map_err(|e| e.to_string())?;
                    universe.extend(a.traces().cloned());
                }
                filtered_class(&s, i.part(k), &universe)
            }
            Some(k) => return Err(format!("part {k} does not exist; the interface has {} parts", i.len())),
        };
        let mut members: Vec<Trace> = class.members.into_iter().collect();
        members.sort_by(|a, b| shortlex(a, b));
        Ok(json(&members.iter().map(|t| format_trace(t)).collect::<Vec<_>>()))
    }
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = checkPair)]
pub fn check_pair(relation: &str, lhs: &str, rhs: &str, iface: &str, defs: &str) -> Result<String, JsValue> {
    js(api::check_pair(relation, lhs, rhs, iface, defs))
}

#[wasm_bindgen(js_name = relatePair)]
pub fn relate_pair(lhs: &str, rhs: &str, iface: &str, defs: &str) -> Result<String, JsValue> {
    js(api::relate_pair(lhs, rhs, iface, defs))
}

#[wasm_bindgen]
pub fn explore(term: &str, defs: &str) -> Result<String, JsValue> {
    js(api::explore(term, defs))
}

/// `part` below zero asks for the Mazurkiewicz class.
#[wasm_bindgen(js_name = traceClass)]
pub fn trace_class(trace: &str, iface: &str, part: i32, among: &str, defs: &str) -> Result<String, JsValue> {
    js(api::trace_class(trace, iface, usize::try_from(part).ok(), among, defs))
}
