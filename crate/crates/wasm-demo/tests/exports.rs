use nobody::fixtures;
use nobody_wasm_demo::{body_with_svg, dual_graph_dot, invariants_json};

#[test]
fn body_carries_svg() {
    let out = body_with_svg(&fixtures::example3().to_json()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["shape"], "quadrilateral");
    assert!(v["svg"].as_str().unwrap().starts_with("<svg"));
}

#[test]
fn graph_and_invariants() {
    let dot = dual_graph_dot(&fixtures::enric().to_json()).unwrap();
    assert!(dot.contains("\"8\" -- \"10\""));
    let inv = invariants_json(&fixtures::enric().to_json()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&inv).unwrap();
    assert_eq!(v["betabar"], serde_json::json!(["24", "57", "458", "1374"]));
}

#[test]
fn errors_are_json() {
    let e = body_with_svg("{").unwrap_err();
    let v: serde_json::Value = serde_json::from_str(&e).unwrap();
    assert_eq!(v["code"], "Schema");
    let e = body_with_svg(&fixtures::example1().to_json().replace("\"npi\"", "\"minimal\"")).unwrap();
    assert!(e.contains("\"minimal\":true"));
}
