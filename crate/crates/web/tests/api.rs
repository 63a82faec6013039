use mtp_web::api;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn check_reports_a_validated_observer() {
    let v = parse(api::check_pair("unc", "b.a", "a.b", "{ {a}, {b} }", "").unwrap());
    assert_eq!(v["verdict"], "fails");
    assert_eq!(v["observer"], "1 | ~b.1");
    assert_eq!(v["synthesis"], "validated");
}

#[test]
fn check_resolves_definitions_and_named_interfaces() {
    let defs = "def P1 = a.c + b.d\ndef P2 = a.d + b.c\ninterface i = { {a, b}, {c, d} }\n";
    let v = parse(api::check_pair("ind", "P1", "P2", "i", defs).unwrap());
    assert_eq!(v["verdict"], "holds");
    let m = parse(api::relate_pair("P1", "P2", "i", defs).unwrap());
    let verdicts: Vec<&str> = m["results"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert_eq!(verdicts, vec!["fails", "fails", "fails", "fails", "holds", "holds"]);
    assert_eq!(m["consistency"]["mustImpliesUnc"], true);
}

#[test]
fn must_needs_no_interface_but_unc_does() {
    assert!(api::check_pair("must", "a", "a", "", "").is_ok());
    assert!(api::check_pair("unc", "a", "a", "", "").is_err());
    assert!(api::check_pair("fair", "a", "a", "", "").is_err());
}

#[test]
fn explore_lists_graph_and_traces() {
    let v = parse(api::explore("a.b + tau.1", "").unwrap());
    assert_eq!(v["traces"], serde_json::json!(["eps", "a", "a b"]));
    assert_eq!(v["lts"]["nodes"][0], "a.b.0 + tau.1");
    let r = parse(api::explore("rec X.(a.X + tau.1)", "").unwrap());
    assert!(r["traces"].is_null());
    let c = parse(api::explore("1 | 1", "").unwrap());
    assert_eq!(c["lts"]["edges"][0]["label"], "tick");
}

#[test]
fn classes_both_kinds() {
    let v = parse(api::trace_class("a b", "{ {a}, {b} }", None, "", "").unwrap());
    assert_eq!(v, serde_json::json!(["a b", "b a"]));
    let f = parse(api::trace_class("eps", "{ {a, b}, {c, d} }", Some(1), "a.c + b.d\na.d + b.c", "").unwrap());
    assert_eq!(f, serde_json::json!(["eps", "a", "b"]));
    assert!(api::trace_class("eps", "{ {a} }", Some(3), "", "").is_err());
}
