//! Browser demo bindings. Each exported function takes and returns JSON text;
//! the `*_json` functions hold the logic and are usable without a browser.

use polytol::intersection::{capped_intersection, Margin};
use polytol::io::{polytope_from_json, polytope_to_value, report_to_text, report_to_value};
use polytol::mechanism::{evaluate, load_mechanism_str, CapStrategy, EvalOptions};
use polytol::minkowski::minkowski_sum;
use polytol::scalar::{parse_scalar, to_f64};
use polytol::Polytope;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Fixtures offered as starting inputs by the page.
pub fn sample(name: &str) -> Option<&'static str> {
    match name {
        "quad" => Some(include_str!("../../core/fixtures/quad_p1.json")),
        "strip" => Some(include_str!("../../core/fixtures/strip_p2.json")),
        "mechanism" => Some(include_str!("../../core/fixtures/three_part_mechanism.json")),
        _ => None,
    }
}

/// Edges of a polygon in R², each with its tag, plus the vertices as floats
/// for drawing.
fn polygon_view(p: &Polytope) -> Value {
    let pts: Vec<[f64; 2]> = p
        .vertices()
        .iter()
        .map(|v| [to_f64(&v.coords[0]), to_f64(&v.coords[1])])
        .collect();
    let edges: Vec<Value> = p
        .halfspaces()
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            let f = p.facet_vertices(i);
            (f.len() == 2).then(|| json!({"from": f[0], "to": f[1], "tag": h.tag, "prov": h.provenance}))
        })
        .collect();
    json!({"points": pts, "edges": edges})
}

fn load_planar(text: &str, what: &str) -> Result<Polytope, String> {
    let p = polytope_from_json(text).map_err(|e| format!("{what}: {e}"))?;
    if p.ambient_dim() != 2 {
        return Err(format!("{what}: the demo draws polygons, got a polytope of R^{}", p.ambient_dim()));
    }
    Ok(p)
}

fn with_view(p: &Polytope) -> Value {
    json!({"polytope": polytope_to_value(p), "view": polygon_view(p)})
}

pub fn minkowski_json(a: &str, b: &str) -> Result<String, String> {
    let pa = load_planar(a, "first operand")?;
    let pb = load_planar(b, "second operand")?;
    let (s, cert) = minkowski_sum(&pa, &pb).map_err(|e| e.to_string())?;
    Ok(json!({
        "operands": [with_view(&pa), with_view(&pb)],
        "result": with_view(&s),
        "diagnostics": cert.diagnostics,
    })
    .to_string())
}

fn margin(text: &str) -> Result<Margin, String> {
    match text.trim() {
        "" | "auto" => Ok(Margin::Auto),
        t => parse_scalar(t).map(Margin::Fixed).map_err(|e| format!("margin: {e}")),
    }
}

pub fn intersection_json(a: &str, b: &str, delta: &str) -> Result<String, String> {
    let pa = load_planar(a, "first operand")?;
    let pb = load_planar(b, "second operand")?;
    let r = capped_intersection(&[pa.clone(), pb.clone()], &margin(delta)?).map_err(|e| e.to_string())?;
    Ok(json!({
        "operands": [with_view(&pa), with_view(&pb)],
        "result": with_view(&r.result),
        "diagnostics": if r.naive_differs { vec!["plain intersection of the tagged operands differs"] } else { vec![] },
    })
    .to_string())
}

pub fn mechanism_json(doc: &str, cap_c: &str) -> Result<String, String> {
    let model = load_mechanism_str(doc).map_err(|e| e.to_string())?;
    let caps = match cap_c.trim() {
        "" | "auto" => CapStrategy::Auto,
        t => CapStrategy::Fixed(parse_scalar(t).map_err(|e| format!("C: {e}"))?),
    };
    let options = EvalOptions {
        caps: Some(caps),
        margin: None,
        check_c_invariance: true,
    };
    let report = evaluate(&model, &options).map_err(|e| e.to_string())?;
    Ok(json!({
        "report": report_to_value(&report, false),
        "text": report_to_text(&report),
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_input(name: &str) -> Result<String, JsValue> {
    js(sample(name).map(str::to_string).ok_or_else(|| format!("no sample named {name}")))
}

#[wasm_bindgen]
pub fn minkowski(a: &str, b: &str) -> Result<String, JsValue> {
    js(minkowski_json(a, b))
}

#[wasm_bindgen]
pub fn intersect(a: &str, b: &str, margin: &str) -> Result<String, JsValue> {
    js(intersection_json(a, b, margin))
}

#[wasm_bindgen]
pub fn analyze(doc: &str, cap_c: &str) -> Result<String, JsValue> {
    js(mechanism_json(doc, cap_c))
}
