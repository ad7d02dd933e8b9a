use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nobody::document::ProblemDocument;
use nobody::report::{BodyReport, InvariantsReport, ZariskiReport};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn nobody(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nobody"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).expect("error json on stderr");
    v["code"].as_str().unwrap().to_string()
}

fn write_doc(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("doc.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn example1_body() {
    let o = nobody(&["body", fixture("example1").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["shape"], "triangle");
    let q3 = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|p| p["x"]["a"] == "18/1")
        .expect("Q3 present");
    assert_eq!(q3["y"]["a"], "6/1");
    assert_eq!(v["area"]["a"], "1/2");
}

#[test]
fn example2_and_3_shapes() {
    let o = nobody(&["body", fixture("example2").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["shape"], "triangle");
    let o = nobody(&["body", fixture("example3").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["shape"], "quadrilateral");
    assert_eq!(v["branch_classes"], serde_json::json!(["OppositeRoot", "SameAsRoot"]));
}

#[test]
fn fixtures_match_library() {
    for (name, doc) in nobody::fixtures::all() {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(ProblemDocument::parse(&text).unwrap(), doc, "{name}");
        let o = nobody(&["fixture", name]);
        assert_eq!(stdout(&o), text);
    }
}

#[test]
fn malformed_satellite_is_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_doc(
        &dir,
        r#"{"cluster":[{"id":1},{"id":2},{"id":3},{"id":4,"satellite_of":1}],
            "flag":{"q":"free"},"mu_source":{"kind":"minimal"}}"#,
    );
    let o = nobody(&["body", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "SatelliteTargetInvalid");

    let o = nobody(&["validate", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("SatelliteTargetInvalid"));

    let bad = write_doc(&dir, "{\"cluster\": 3}");
    let o = nobody(&["invariants", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "Schema");
}

#[test]
fn math_errors_exit_3() {
    let o = nobody(&["zariski", fixture("example2").to_str().unwrap(), "--t", "1/2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_code(&o), "NotNPI");
    let o = nobody(&["zariski", fixture("example1").to_str().unwrap(), "--t", "19"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_code(&o), "TOutOfRange");
    let o = nobody(&["zariski", fixture("example1").to_str().unwrap(), "--t", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_lists_points() {
    let o = nobody(&["validate", fixture("example1").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"][4]["kind"], "satellite");
    assert_eq!(v["points"][4]["proximate_to"], serde_json::json!([3, 4]));
}

#[test]
fn json_round_trips() {
    let body = stdout(&nobody(&["body", fixture("example3").to_str().unwrap()]));
    let parsed: BodyReport = serde_json::from_str(&body).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", body);

    let inv = stdout(&nobody(&["invariants", fixture("enric").to_str().unwrap()]));
    let parsed: InvariantsReport = serde_json::from_str(&inv).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", inv);
    assert_eq!(parsed.beta_prime.len(), 3);

    let z = stdout(&nobody(&["zariski", fixture("example1").to_str().unwrap(), "--t", "303/18"]));
    let parsed: ZariskiReport = serde_json::from_str(&z).unwrap();
    assert!(parsed.checks.all());
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", z);
}

#[test]
fn dot_and_svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let dot1 = stdout(&nobody(&["dualgraph", "--dot", fixture("example3").to_str().unwrap()]));
    let dot2 = stdout(&nobody(&["dualgraph", "--dot", fixture("example3").to_str().unwrap()]));
    assert_eq!(dot1, dot2);
    assert!(dot1.contains("\"7\" -- \"C\""));

    let svg = dir.path().join("body.svg");
    let out = dir.path().join("body.json");
    let o = nobody(&[
        "body",
        fixture("example2").to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polygon"));
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"shape\": \"triangle\""));
}
