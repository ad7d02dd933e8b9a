//! Browser bindings: body, dual graph and invariants of a problem document.
//!
//! Each export takes the document as JSON text and returns JSON (or DOT)
//! text; failures come back as `{"code", "message"}` JSON in the thrown
//! error.

use nobody::document::ProblemDocument;
use nobody::report::{self, ErrorReport};
use nobody::Error;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn fail(e: &Error) -> String {
    serde_json::to_string(&ErrorReport::from(e)).expect("error serializes")
}

fn parse(doc: &str) -> Result<ProblemDocument, String> {
    ProblemDocument::parse(doc).map_err(|e| fail(&e))
}

/// Body report with an SVG drawing under `"svg"`.
pub fn body_with_svg(doc: &str) -> Result<String, String> {
    let rep = report::body(&parse(doc)?).map_err(|e| fail(&e))?;
    let mut v = serde_json::to_value(&rep).expect("report serializes");
    v["svg"] = json!(report::body_svg(&rep.body));
    Ok(v.to_string())
}

pub fn dual_graph_dot(doc: &str) -> Result<String, String> {
    report::dual_graph(&parse(doc)?)
        .map(|g| g.to_dot())
        .map_err(|e| fail(&e))
}

pub fn invariants_json(doc: &str) -> Result<String, String> {
    let rep = report::invariants(&parse(doc)?).map_err(|e| fail(&e))?;
    Ok(serde_json::to_string(&rep).expect("report serializes"))
}

#[wasm_bindgen(js_name = body)]
pub fn js_body(doc: &str) -> Result<String, JsError> {
    body_with_svg(doc).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = dualGraph)]
pub fn js_dual_graph(doc: &str) -> Result<String, JsError> {
    dual_graph_dot(doc).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = invariants)]
pub fn js_invariants(doc: &str) -> Result<String, JsError> {
    invariants_json(doc).map_err(|e| JsError::new(&e))
}
