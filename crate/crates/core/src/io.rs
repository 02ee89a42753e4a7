//! Polytope JSON exchange format, OFF mesh export and plain-text listings.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfspace::{HalfSpace, Tag};
use crate::linalg::{dot, sub};
use crate::intersection::Margin;
use crate::mechanism::ComplianceReport;
use crate::polytope::{h_to_v, Polytope};
use crate::scalar::{format_scalar, serde_text, to_decimal, to_significant, Scalar};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfSpaceDoc {
    #[serde(with = "serde_text::vec")]
    a: Vec<Scalar>,
    #[serde(with = "serde_text")]
    b: Scalar,
    tag: Tag,
    #[serde(default)]
    prov: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    #[serde(with = "serde_text::vec")]
    coords: Vec<Scalar>,
    tag: Tag,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeDoc {
    dim: usize,
    halfspaces: Vec<HalfSpaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexDoc>>,
}

pub fn polytope_to_value(p: &Polytope) -> serde_json::Value {
    let doc = PolytopeDoc {
        dim: p.ambient_dim(),
        halfspaces: p
            .halfspaces()
            .iter()
            .map(|h| HalfSpaceDoc {
                a: h.normal().to_vec(),
                b: h.offset().clone(),
                tag: h.tag,
                prov: h.provenance.clone(),
            })
            .collect(),
        vertices: Some(
            p.vertices()
                .iter()
                .map(|v| VertexDoc {
                    coords: v.coords.clone(),
                    tag: v.tag,
                })
                .collect(),
        ),
    };
    serde_json::to_value(doc).expect("polytope document serializes")
}

/// Pretty-printed Polytope JSON; byte-identical for equal polytopes.
pub fn polytope_to_json(p: &Polytope) -> String {
    let mut s = serde_json::to_string_pretty(&polytope_to_value(p)).expect("serializable");
    s.push('\n');
    s
}

fn schema_error(e: serde_json::Error) -> Error {
    Error::schema("$", e.to_string())
}

/// Reads Polytope JSON. Vertices are recomputed from the half-spaces; when the
/// document lists vertices they must match and their tags are kept.
pub fn polytope_from_value(v: &serde_json::Value) -> Result<Polytope> {
    let doc: PolytopeDoc = serde_json::from_value(v.clone()).map_err(schema_error)?;
    let mut rows = Vec::with_capacity(doc.halfspaces.len());
    for (i, h) in doc.halfspaces.into_iter().enumerate() {
        if h.a.len() != doc.dim {
            return Err(Error::schema(
                format!("$.halfspaces[{i}].a"),
                format!("expected {} coefficients, found {}", doc.dim, h.a.len()),
            ));
        }
        rows.push(HalfSpace::new(h.a, h.b, h.tag, h.prov)?);
    }
    let mut p = h_to_v(&rows, doc.dim)?;
    if let Some(vertices) = doc.vertices {
        if vertices.len() != p.vertices().len() {
            return Err(Error::schema(
                "$.vertices",
                format!(
                    "{} vertices listed, the half-spaces have {}",
                    vertices.len(),
                    p.vertices().len()
                ),
            ));
        }
        let mut tags = vec![Tag::NonCap; vertices.len()];
        let mut seen = vec![false; vertices.len()];
        for (i, v) in vertices.iter().enumerate() {
            match p.vertex_index(&v.coords) {
                Some(k) if !seen[k] => {
                    seen[k] = true;
                    tags[k] = v.tag;
                }
                _ => {
                    return Err(Error::schema(
                        format!("$.vertices[{i}]"),
                        "not a vertex of the half-space system",
                    ))
                }
            }
        }
        p.set_vertex_tags(&tags);
    }
    Ok(p)
}

pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(schema_error)?;
    polytope_from_value(&v)
}

/// An OFF mesh plus its sidecar listing which faces are caps.
#[derive(Clone, Debug)]
pub struct OffExport {
    pub off: String,
    pub sidecar: String,
}

fn cross3(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Orders the points of a planar convex polygon counterclockwise around `axis`.
fn cyclic_order(points: &[Vec<Scalar>], idx: &mut [usize], axis: &[Scalar]) {
    if idx.len() < 3 {
        return;
    }
    let n = Scalar::from_integer(idx.len().into());
    let mut centre = vec![Scalar::zero(); 3];
    for &i in idx.iter() {
        for k in 0..3 {
            centre[k] += &points[i][k];
        }
    }
    for c in centre.iter_mut() {
        *c /= &n;
    }
    let e0 = sub(&points[idx[0]], &centre);
    let half = |d: &[Scalar]| {
        let s = dot(axis, &cross3(&e0, d));
        if s.is_positive() || (s.is_zero() && dot(&e0, d).is_positive()) {
            0
        } else {
            1
        }
    };
    idx.sort_by(|&i, &j| {
        let di = sub(&points[i], &centre);
        let dj = sub(&points[j], &centre);
        half(&di).cmp(&half(&dj)).then_with(|| {
            let s = dot(axis, &cross3(&di, &dj));
            if s.is_positive() {
                Ordering::Less
            } else if s.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
}

#[derive(Serialize)]
struct FaceDoc {
    index: usize,
    tag: Tag,
    prov: String,
}

#[derive(Serialize)]
struct Sidecar {
    off: String,
    cap_faces: Vec<usize>,
    noncap_faces: Vec<usize>,
    faces: Vec<FaceDoc>,
}

/// OFF export of a polytope of R³. Faces are listed NonCap first, each wound
/// counterclockwise seen from outside; `places` sets the decimal precision.
pub fn polytope_to_off(p: &Polytope, places: usize, name: &str) -> Result<OffExport> {
    if p.ambient_dim() != 3 {
        return Err(Error::Unsupported("OFF export requires dim 3".into()));
    }
    let points = p.vertex_coords();
    let mut faces: Vec<(Tag, String, Vec<usize>)> = Vec::new();
    match p.dimension() {
        3 => {
            for (i, h) in p.halfspaces().iter().enumerate() {
                let mut idx = p.facet_vertices(i);
                cyclic_order(&points, &mut idx, h.normal());
                faces.push((h.tag, h.provenance.clone(), idx));
            }
        }
        2 => {
            let mut idx: Vec<usize> = (0..points.len()).collect();
            let e1 = sub(&points[1], &points[0]);
            let axis = (2..points.len())
                .map(|k| cross3(&e1, &sub(&points[k], &points[0])))
                .find(|c| c.iter().any(|x| !x.is_zero()))
                .expect("polygon has three affinely independent vertices");
            cyclic_order(&points, &mut idx, &axis);
            faces.push((p.face_tag(&idx), "polygon".into(), idx));
        }
        _ => {}
    }
    faces.sort_by_key(|f| f.0.is_cap());

    let mut off = String::from("OFF\n");
    let _ = writeln!(off, "{} {} 0", points.len(), faces.len());
    for v in &points {
        let cells: Vec<String> = v.iter().map(|q| to_decimal(q, places)).collect();
        let _ = writeln!(off, "{}", cells.join(" "));
    }
    for (_, _, idx) in &faces {
        let cells: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(off, "{} {}", idx.len(), cells.join(" "));
    }

    let sidecar = Sidecar {
        off: name.to_string(),
        cap_faces: (0..faces.len()).filter(|&i| faces[i].0.is_cap()).collect(),
        noncap_faces: (0..faces.len()).filter(|&i| !faces[i].0.is_cap()).collect(),
        faces: faces
            .iter()
            .enumerate()
            .map(|(index, (tag, prov, _))| FaceDoc {
                index,
                tag: *tag,
                prov: prov.clone(),
            })
            .collect(),
    };
    let mut sidecar = serde_json::to_string_pretty(&sidecar).expect("serializable");
    sidecar.push('\n');
    Ok(OffExport { off, sidecar })
}

/// Rational shown as `p/q (decimal)`.
pub fn human(q: &Scalar) -> String {
    if q.is_integer() {
        format_scalar(q)
    } else {
        format!("{} ({})", format_scalar(q), to_significant(q, 6))
    }
}

/// Plain-text listing of half-spaces and vertices.
pub fn polytope_to_text(p: &Polytope) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "polytope in R^{} (dimension {}): {} half-spaces ({} cap), {} vertices",
        p.ambient_dim(),
        p.dimension(),
        p.halfspaces().len(),
        p.count_tag(Tag::Cap),
        p.vertices().len()
    );
    for (i, h) in p.halfspaces().iter().enumerate() {
        let a: Vec<String> = h.normal().iter().map(human).collect();
        let _ = writeln!(
            out,
            "  h{i} [{}] ({}) . x <= {}  {}",
            h.tag,
            a.join(", "),
            human(h.offset()),
            h.provenance
        );
    }
    for (i, v) in p.vertices().iter().enumerate() {
        let c: Vec<String> = v.coords.iter().map(human).collect();
        let _ = writeln!(out, "  v{i} [{}] ({})", v.tag, c.join(", "));
    }
    out
}

fn scalars(v: &[Scalar]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|q| format_scalar(q).into()).collect())
}

fn margin_value(m: &Margin) -> serde_json::Value {
    match m {
        Margin::Auto => "auto".into(),
        Margin::Fixed(d) => format_scalar(d).into(),
    }
}

/// Compliance report as JSON. Every intermediate polytope is included when
/// `snapshots` is set; otherwise nodes carry only their facet counts.
pub fn report_to_value(r: &ComplianceReport, snapshots: bool) -> serde_json::Value {
    use serde_json::json;
    let nodes: Vec<serde_json::Value> = r
        .nodes
        .iter()
        .map(|n| {
            let mut v = json!({
                "path": n.path,
                "label": n.label,
                "vertices": n.polytope.vertices().len(),
                "cap_facets": n.cap_facets(),
                "noncap_facets": n.noncap_facets(),
                "diagnostics": n.diagnostics,
            });
            if snapshots {
                v["polytope"] = polytope_to_value(&n.polytope);
            }
            v
        })
        .collect();
    let mut out = json!({
        "cap_offset": format_scalar(&r.cap_offset),
        "calculated": polytope_to_value(r.calculated()),
        "nodes": nodes,
    });
    if let Some(f) = &r.functional {
        out["functional"] = json!({
            "compliant": f.compliant,
            "extreme": {"min": format_scalar(&f.extreme.0), "max": format_scalar(&f.extreme.1)},
            "halfspaces": f.halfspaces.iter().map(|h| json!({
                "a": scalars(h.normal()),
                "b": format_scalar(h.offset()),
                "prov": h.provenance,
            })).collect::<Vec<_>>(),
            "witness": f.witness.as_ref().map(|w| scalars(w)),
        });
    }
    if let Some(i) = &r.invariance {
        out["invariance"] = json!({
            "holds": i.holds(),
            "cap_offset": format_scalar(&i.cap_offset),
            "margin": margin_value(&i.margin),
            "drifting_nodes": i.drift,
            "extreme_matches": i.extreme_matches,
            "verdict_matches": i.verdict_matches,
        });
    }
    out
}

pub fn report_to_json(r: &ComplianceReport, snapshots: bool) -> String {
    let mut s = serde_json::to_string_pretty(&report_to_value(r, snapshots)).expect("serializable");
    s.push('\n');
    s
}

pub fn report_to_text(r: &ComplianceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "cap offset C = {}", human(&r.cap_offset));
    for n in &r.nodes {
        let _ = writeln!(
            out,
            "{:<40} {:<10} vertices {:>4}  cap facets {:>3}  non-cap facets {:>3}",
            n.path,
            n.label,
            n.polytope.vertices().len(),
            n.cap_facets(),
            n.noncap_facets()
        );
        for d in &n.diagnostics {
            let _ = writeln!(out, "    note: {d}");
        }
    }
    if let Some(f) = &r.functional {
        let _ = writeln!(
            out,
            "deviation range: [{}, {}]",
            human(&f.extreme.0),
            human(&f.extreme.1)
        );
        let _ = writeln!(out, "verdict: {}", if f.compliant { "COMPLIANT" } else { "NON-COMPLIANT" });
        if let Some(w) = &f.witness {
            let c: Vec<String> = w.iter().map(human).collect();
            let _ = writeln!(out, "  violating vertex: ({})", c.join(", "));
        }
    }
    if let Some(i) = &r.invariance {
        let _ = writeln!(
            out,
            "rerun with C = {}: {}",
            human(&i.cap_offset),
            if i.holds() { "non-cap content unchanged" } else { "non-cap content CHANGED" }
        );
        for p in &i.drift {
            let _ = writeln!(out, "    drift at {p}");
        }
    }
    out
}
