use qftr_wasm::{sweep_csv, Session, MAX_QUBITS};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn summary_reports_metrics_and_graph() {
    let s = Session::create("lnn", 6, "strict").unwrap();
    let v = parse(&s.summary_json());
    assert_eq!(v["depth_steps"], 18);
    assert_eq!(v["swaps"], 15);
    assert_eq!(v["verified"], true);
    assert_eq!(v["edges"].as_array().unwrap().len(), 5);
    assert_eq!(v["coords"].as_array().unwrap().len(), 6);
}

#[test]
fn layers_follow_the_mapping() {
    let s = Session::create("sycamore", 2, "relaxed").unwrap();
    let first = parse(&s.layer_json(0).unwrap());
    let occ: Vec<Value> = first["occupant"].as_array().unwrap().clone();
    assert_eq!(occ.len(), 4);
    assert!(occ.iter().all(|o| o.is_u64()));
    let last = s.layer_count() - 1;
    assert!(s.layer_json(last).is_ok());
    assert!(s.layer_json(last + 1).unwrap_err().contains("out of range"));
}

#[test]
fn lattice_marks_cnot_built_swaps() {
    let s = Session::create("lattice", 4, "relaxed").unwrap();
    let any_slow = (0..s.layer_count()).any(|i| s.layer_json(i).unwrap().contains("\"swap3\""));
    assert!(any_slow);
}

#[test]
fn bad_requests_are_errors() {
    assert!(Session::create("torus", 4, "relaxed").is_err());
    assert!(Session::create("sycamore", 3, "relaxed").err().unwrap().contains("even"));
    assert!(Session::create("lnn", MAX_QUBITS + 1, "relaxed").is_err());
    assert!(Session::create("lnn", 4, "loose").is_err());
}

#[test]
fn sweep_lists_every_size() {
    let csv = sweep_csv("heavyhex", "2, 4, 6", "relaxed").unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "arch,n,depth_steps,depth_weighted,swaps");
    assert!(lines[1].starts_with("heavyhex,10,39,"));
    assert!(lines.last().unwrap().starts_with("# fit"));
    assert!(sweep_csv("lnn", "4,x", "relaxed").is_err());
}
