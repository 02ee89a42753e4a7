//! Mechanism documents: loading, expression evaluation and compliance checks.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed};
use serde_json::Value;

use crate::constraints::{
    contact_polytope, geometric_polytope, unit_normal, ConstraintPoint, ContactNature,
    DisplacementSpace, Frame, JointSpec, JointType, SpaceMode, SurfaceClass, SurfaceSpec,
    ToleranceZone,
};
use crate::error::{Error, Result};
use crate::halfspace::{HalfSpace, Tag};
use crate::intersection::{capped_intersection, Margin};
use crate::linalg::is_zero_vec;
use crate::minkowski::minkowski_sum;
use crate::polytope::{inclusion_witness, support_value, Polytope};
use crate::scalar::{parse_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Surface(usize),
    Joint(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Leaf {
        name: String,
        operand: Operand,
        negated: bool,
    },
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Intersect(Vec<Expr>),
}

impl Expr {
    fn kind(&self) -> &'static str {
        match self {
            Expr::Leaf { .. } => "leaf",
            Expr::Neg(_) => "neg",
            Expr::Sum(_) => "sum",
            Expr::Intersect(_) => "intersect",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapStrategy {
    /// 1000 times the largest bound of the model (and at least 1000).
    Auto,
    Fixed(Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalCondition {
    /// Measured direction of `t_M`, in physical coordinates.
    pub direction: Vec<Scalar>,
    pub dev_inf: Scalar,
    pub dev_sup: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismModel {
    pub space: DisplacementSpace,
    pub points: BTreeMap<String, Vec<Scalar>>,
    pub surfaces: Vec<SurfaceSpec>,
    pub joints: Vec<JointSpec>,
    pub functional: Option<FunctionalCondition>,
    pub expression: Expr,
    pub caps: CapStrategy,
    pub margin: Margin,
}

impl MechanismModel {
    /// Part numbers appearing in surface and joint ids (`i` in `i,j`).
    pub fn parts(&self) -> BTreeSet<String> {
        let ids = self
            .surfaces
            .iter()
            .map(|s| s.id.as_str())
            .chain(self.joints.iter().map(|j| j.id.as_str()));
        let mut out = BTreeSet::new();
        for id in ids {
            for side in id.split('/') {
                if let Some((part, surf)) = side.split_once(',') {
                    if surf.trim() != "0" {
                        out.insert(part.trim().to_string());
                    }
                }
            }
        }
        out
    }

    /// Cap offset for a strategy: 1000 × the largest zone bound, clearance,
    /// offset or 1.
    pub fn cap_offset(&self, strategy: &CapStrategy) -> Result<Scalar> {
        match strategy {
            CapStrategy::Fixed(c) => {
                if c.is_positive() {
                    Ok(c.clone())
                } else {
                    Err(Error::NonPositiveC)
                }
            }
            CapStrategy::Auto => {
                let mut m = Scalar::one();
                for s in &self.surfaces {
                    m = m.max(s.zone.d_inf.abs()).max(s.zone.d_sup.abs());
                }
                for j in &self.joints {
                    match &j.nature {
                        ContactNature::Bilateral { clearance } => {
                            m = m.max(clearance.abs() / Scalar::from_integer(2.into()))
                        }
                        ContactNature::Unilateral { offset } => m = m.max(offset.abs()),
                        ContactNature::Sliding => {}
                    }
                }
                Ok(m * Scalar::from_integer(1000.into()))
            }
        }
    }

    pub fn build_operand(&self, operand: &Operand, c: &Scalar) -> Result<Polytope> {
        match operand {
            Operand::Surface(i) => geometric_polytope(&self.surfaces[*i], &self.space, c),
            Operand::Joint(i) => contact_polytope(&self.joints[*i], &self.space, c),
        }
    }

    pub fn operand_id(&self, operand: &Operand) -> &str {
        match operand {
            Operand::Surface(i) => &self.surfaces[*i].id,
            Operand::Joint(i) => &self.joints[*i].id,
        }
    }
}

// ---------------------------------------------------------------------------
// Document parsing

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(path, format!("expected an object, found {}", kind(v))))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(path, format!("expected an array, found {}", kind(v))))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::schema(path, format!("expected a string, found {}", kind(v))))
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(path, format!("missing field `{key}`")))
}

fn number(v: &Value, path: &str) -> Result<Scalar> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(Error::schema(
                path,
                format!("expected a number or numeric string, found {}", kind(other)),
            ))
        }
    };
    parse_scalar(&text).map_err(|_| Error::schema(path, format!("cannot parse number `{text}`")))
}

fn vector(v: &Value, len: usize, path: &str) -> Result<Vec<Scalar>> {
    if let Some(axis) = v.as_str() {
        if len == 3 {
            if let Some(e) = axis_vector(axis) {
                return Ok(e);
            }
        }
    }
    let items = array(v, path)?;
    if items.len() != len {
        return Err(Error::schema(
            path,
            format!("expected {len} components, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

/// `"x"`, `"-y"`, ... as unit vectors.
fn axis_vector(name: &str) -> Option<Vec<Scalar>> {
    let (sign, axis) = match name.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, name.strip_prefix('+').unwrap_or(name)),
    };
    let i = ["x", "y", "z"].iter().position(|a| *a == axis)?;
    let mut v = vec![Scalar::from_integer(0.into()); 3];
    v[i] = Scalar::from_integer(sign.into());
    Some(v)
}

fn auto_or<T>(v: &Value, path: &str, f: impl Fn(Scalar) -> T, auto: T) -> Result<T> {
    if v.as_str() == Some("auto") {
        Ok(auto)
    } else {
        Ok(f(number(v, path)?))
    }
}

fn parse_space(v: &Value, path: &str) -> Result<DisplacementSpace> {
    let obj = object(v, path)?;
    check_keys(obj, &["dim", "point_M", "coordinates"], path)?;
    let dim_v = field(obj, "dim", path)?;
    let dim = dim_v
        .as_u64()
        .ok_or_else(|| Error::schema(format!("{path}.dim"), "expected an integer"))?;
    let mode = SpaceMode::from_dim(dim as usize).ok_or_else(|| {
        Error::InconsistentDimension(format!("displacement space must have dim 3 or 6, found {dim}"))
    })?;
    let m = match obj.get("point_M") {
        Some(p) => vector(p, 3, &format!("{path}.point_M"))?,
        None => vec![Scalar::from_integer(0.into()); 3],
    };
    if let Some(c) = obj.get("coordinates") {
        let names = array(c, &format!("{path}.coordinates"))?;
        let expected = mode.coordinates();
        let got: Vec<&str> = names
            .iter()
            .enumerate()
            .map(|(i, n)| string(n, &format!("{path}.coordinates[{i}]")))
            .collect::<Result<_>>()?;
        if got != expected {
            return Err(Error::InconsistentDimension(format!(
                "coordinates {got:?} do not match the {dim}-dimensional space {expected:?}"
            )));
        }
    }
    DisplacementSpace::new(mode, m)
}

fn parse_points(v: Option<&Value>, path: &str) -> Result<BTreeMap<String, Vec<Scalar>>> {
    let mut out = BTreeMap::new();
    if let Some(v) = v {
        for (name, p) in object(v, path)? {
            let pp = format!("{path}.{name}");
            if let Some(items) = p.as_array() {
                if items.len() != 3 {
                    return Err(Error::InconsistentDimension(format!(
                        "point {pp} has {} coordinates, physical points have 3",
                        items.len()
                    )));
                }
            }
            out.insert(name.clone(), vector(p, 3, &pp)?);
        }
    }
    Ok(out)
}

fn parse_frame(v: Option<&Value>, path: &str) -> Result<Frame> {
    let Some(v) = v else {
        return Ok(Frame::standard());
    };
    let obj = object(v, path)?;
    check_keys(obj, &["u", "v", "w"], path)?;
    let axis = |k: &str| vector(field(obj, k, path)?, 3, &format!("{path}.{k}"));
    Frame::new(axis("u")?, axis("v")?, axis("w")?)
}

fn parse_contact_points(
    v: &Value,
    points: &BTreeMap<String, Vec<Scalar>>,
    path: &str,
) -> Result<Vec<ConstraintPoint>> {
    let mut out = Vec::new();
    for (i, item) in array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let obj = object(item, &p)?;
        check_keys(obj, &["point", "normal"], &p)?;
        let pv = field(obj, "point", &p)?;
        let (name, coords) = match pv.as_str() {
            Some(n) => (
                n.to_string(),
                points
                    .get(n)
                    .cloned()
                    .ok_or_else(|| Error::UnknownReference(format!("point {n}")))?,
            ),
            None => (format!("#{i}"), vector(pv, 3, &format!("{p}.point"))?),
        };
        let normal = vector(field(obj, "normal", &p)?, 3, &format!("{p}.normal"))?;
        if is_zero_vec(&normal) {
            return Err(Error::ZeroNormal);
        }
        unit_normal(&normal)?;
        out.push(ConstraintPoint {
            name,
            point: coords,
            normal,
        });
    }
    Ok(out)
}

fn parse_enum<T: serde::de::DeserializeOwned>(v: &Value, path: &str, what: &str) -> Result<T> {
    serde_json::from_value(v.clone())
        .map_err(|_| Error::schema(path, format!("unknown {what} {v}")))
}

fn parse_surface(v: &Value, points: &BTreeMap<String, Vec<Scalar>>, path: &str) -> Result<SurfaceSpec> {
    let obj = object(v, path)?;
    check_keys(obj, &["id", "class", "frame", "zone", "constraint_points"], path)?;
    let id = string(field(obj, "id", path)?, &format!("{path}.id"))?.to_string();
    let class: SurfaceClass = parse_enum(field(obj, "class", path)?, &format!("{path}.class"), "surface class")?;
    let frame = parse_frame(obj.get("frame"), &format!("{path}.frame"))?;
    let zp = format!("{path}.zone");
    let zone = object(field(obj, "zone", path)?, &zp)?;
    check_keys(zone, &["t", "d_inf", "d_sup"], &zp)?;
    let t = number(field(zone, "t", &zp)?, &format!("{zp}.t"))?;
    let half = &t / Scalar::from_integer(2.into());
    let d_inf = match zone.get("d_inf") {
        Some(x) => number(x, &format!("{zp}.d_inf"))?,
        None => -half.clone(),
    };
    let d_sup = match zone.get("d_sup") {
        Some(x) => number(x, &format!("{zp}.d_sup"))?,
        None => half,
    };
    let zone = ToleranceZone::new(t, d_inf, d_sup)?;
    let pts = parse_contact_points(field(obj, "constraint_points", path)?, points, &format!("{path}.constraint_points"))?;
    Ok(SurfaceSpec {
        id,
        class,
        frame,
        zone,
        points: pts,
    })
}

fn parse_joint(v: &Value, points: &BTreeMap<String, Vec<Scalar>>, path: &str) -> Result<JointSpec> {
    let obj = object(v, path)?;
    check_keys(
        obj,
        &["id", "type", "frame", "nature", "clearance_J", "offset_d", "contact_points"],
        path,
    )?;
    let id = string(field(obj, "id", path)?, &format!("{path}.id"))?.to_string();
    let joint_type: JointType = parse_enum(field(obj, "type", path)?, &format!("{path}.type"), "joint type")?;
    let frame = parse_frame(obj.get("frame"), &format!("{path}.frame"))?;
    let np = format!("{path}.nature");
    let nature = match string(field(obj, "nature", path)?, &np)? {
        "bilateral" => ContactNature::Bilateral {
            clearance: number(field(obj, "clearance_J", path)?, &format!("{path}.clearance_J"))?,
        },
        "unilateral" => ContactNature::Unilateral {
            offset: number(field(obj, "offset_d", path)?, &format!("{path}.offset_d"))?,
        },
        "sliding" => ContactNature::Sliding,
        other => return Err(Error::schema(np, format!("unknown contact nature `{other}`"))),
    };
    let pts = parse_contact_points(field(obj, "contact_points", path)?, points, &format!("{path}.contact_points"))?;
    Ok(JointSpec {
        id,
        joint_type,
        frame,
        nature,
        points: pts,
    })
}

fn reversed(id: &str) -> Option<String> {
    let (a, b) = id.split_once('/')?;
    Some(format!("{}/{}", b.trim(), a.trim()))
}

fn resolve_leaf(name: &str, surfaces: &[SurfaceSpec], joints: &[JointSpec]) -> Result<(Operand, bool)> {
    let find = |id: &str| {
        surfaces
            .iter()
            .position(|s| s.id == id)
            .map(Operand::Surface)
            .or_else(|| joints.iter().position(|j| j.id == id).map(Operand::Joint))
    };
    if let Some(op) = find(name) {
        return Ok((op, false));
    }
    if let Some(op) = reversed(name).and_then(|r| find(&r)) {
        return Ok((op, true));
    }
    Err(Error::UnknownReference(name.to_string()))
}

fn parse_expr(v: &Value, surfaces: &[SurfaceSpec], joints: &[JointSpec], path: &str) -> Result<Expr> {
    if let Some(name) = v.as_str() {
        let (operand, negated) = resolve_leaf(name, surfaces, joints)?;
        return Ok(Expr::Leaf {
            name: name.to_string(),
            operand,
            negated,
        });
    }
    let obj = object(v, path)?;
    if obj.len() != 1 {
        return Err(Error::schema(path, "expression node must have exactly one key"));
    }
    let (key, inner) = obj.iter().next().expect("one entry");
    let sub = format!("{path}.{key}");
    match key.as_str() {
        "neg" => Ok(Expr::Neg(Box::new(parse_expr(inner, surfaces, joints, &sub)?))),
        "sum" | "intersect" => {
            let items = array(inner, &sub)?;
            if items.is_empty() {
                return Err(Error::schema(sub, "needs at least one operand"));
            }
            let children = items
                .iter()
                .enumerate()
                .map(|(i, x)| parse_expr(x, surfaces, joints, &format!("{sub}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(if key == "sum" {
                Expr::Sum(children)
            } else {
                Expr::Intersect(children)
            })
        }
        other => Err(Error::schema(path, format!("unknown expression node `{other}`"))),
    }
}

fn parse_caps(v: Option<&Value>, path: &str) -> Result<CapStrategy> {
    match v {
        None => Ok(CapStrategy::Auto),
        Some(v) => {
            let obj = object(v, path)?;
            check_keys(obj, &["C"], path)?;
            match obj.get("C") {
                None => Ok(CapStrategy::Auto),
                Some(c) => auto_or(c, &format!("{path}.C"), CapStrategy::Fixed, CapStrategy::Auto),
            }
        }
    }
}

fn parse_margin(v: Option<&Value>, path: &str) -> Result<Margin> {
    match v {
        None => Ok(Margin::Auto),
        Some(v) => {
            let obj = object(v, path)?;
            check_keys(obj, &["delta"], path)?;
            match obj.get("delta") {
                None => Ok(Margin::Auto),
                Some(d) => auto_or(d, &format!("{path}.delta"), Margin::Fixed, Margin::Auto),
            }
        }
    }
}

fn parse_functional(v: Option<&Value>, path: &str) -> Result<Option<FunctionalCondition>> {
    let Some(v) = v else {
        return Ok(None);
    };
    let obj = object(v, path)?;
    check_keys(obj, &["direction", "dev_inf", "dev_sup"], path)?;
    let direction = vector(field(obj, "direction", path)?, 3, &format!("{path}.direction"))?;
    if is_zero_vec(&direction) {
        return Err(Error::ZeroNormal);
    }
    let dev_inf = number(field(obj, "dev_inf", path)?, &format!("{path}.dev_inf"))?;
    let dev_sup = number(field(obj, "dev_sup", path)?, &format!("{path}.dev_sup"))?;
    if dev_inf > dev_sup {
        return Err(Error::schema(path, "dev_inf exceeds dev_sup"));
    }
    Ok(Some(FunctionalCondition {
        direction,
        dev_inf,
        dev_sup,
    }))
}

fn check_keys(obj: &serde_json::Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::schema(format!("{path}.{k}"), "unknown field"));
        }
    }
    Ok(())
}

/// Parses and resolves a mechanism document.
pub fn load_mechanism(doc: &Value) -> Result<MechanismModel> {
    let root = object(doc, "$")?;
    check_keys(
        root,
        &["space", "points", "surfaces", "joints", "functional_condition", "expression", "caps", "margin", "notes"],
        "$",
    )?;
    let space = parse_space(field(root, "space", "$")?, "$.space")?;
    let points = parse_points(root.get("points"), "$.points")?;
    let surfaces = match root.get("surfaces") {
        Some(v) => array(v, "$.surfaces")?
            .iter()
            .enumerate()
            .map(|(i, s)| parse_surface(s, &points, &format!("$.surfaces[{i}]")))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let joints = match root.get("joints") {
        Some(v) => array(v, "$.joints")?
            .iter()
            .enumerate()
            .map(|(i, j)| parse_joint(j, &points, &format!("$.joints[{i}]")))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let mut ids = BTreeSet::new();
    for id in surfaces.iter().map(|s| &s.id).chain(joints.iter().map(|j| &j.id)) {
        if !ids.insert(id.clone()) {
            return Err(Error::schema("$", format!("duplicate operand id `{id}`")));
        }
    }
    let expression = parse_expr(field(root, "expression", "$")?, &surfaces, &joints, "$.expression")?;
    Ok(MechanismModel {
        space,
        points,
        surfaces,
        joints,
        functional: parse_functional(root.get("functional_condition"), "$.functional_condition")?,
        expression,
        caps: parse_caps(root.get("caps"), "$.caps")?,
        margin: parse_margin(root.get("margin"), "$.margin")?,
    })
}

/// Parses a mechanism document from text.
pub fn load_mechanism_str(text: &str) -> Result<MechanismModel> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::schema(format!("$ (line {}, column {})", e.line(), e.column()), e.to_string()))?;
    load_mechanism(&doc)
}

/// A single operand description: `space`, optional `points` and `caps`, and
/// exactly one of `surface` or `joint`.
pub fn build_operand_document(doc: &Value) -> Result<(Polytope, String)> {
    let root = object(doc, "$")?;
    check_keys(root, &["space", "points", "surface", "joint", "caps", "notes"], "$")?;
    let space = parse_space(field(root, "space", "$")?, "$.space")?;
    let points = parse_points(root.get("points"), "$.points")?;
    let (surfaces, joints) = match (root.get("surface"), root.get("joint")) {
        (Some(s), None) => (vec![parse_surface(s, &points, "$.surface")?], vec![]),
        (None, Some(j)) => (vec![], vec![parse_joint(j, &points, "$.joint")?]),
        _ => return Err(Error::schema("$", "expected exactly one of `surface` or `joint`")),
    };
    let operand = if surfaces.is_empty() {
        Operand::Joint(0)
    } else {
        Operand::Surface(0)
    };
    let model = MechanismModel {
        space,
        points,
        expression: Expr::Leaf {
            name: String::new(),
            operand: operand.clone(),
            negated: false,
        },
        surfaces,
        joints,
        functional: None,
        caps: parse_caps(root.get("caps"), "$.caps")?,
        margin: Margin::Auto,
    };
    let c = model.cap_offset(&model.caps)?;
    let id = model.operand_id(&operand).to_string();
    Ok((model.build_operand(&operand, &c)?, id))
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Clone, Debug, Default)]
pub struct EvalOptions {
    /// Overrides the document's cap strategy.
    pub caps: Option<CapStrategy>,
    /// Overrides the document's margin.
    pub margin: Option<Margin>,
    /// Reruns with `C × 10` and compares the NonCap parts.
    pub check_c_invariance: bool,
}

/// One evaluated expression node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSnapshot {
    /// JSON-path-like location, e.g. `$.sum[3].intersect[0]`.
    pub path: String,
    pub label: String,
    pub polytope: Polytope,
    pub diagnostics: Vec<String>,
}

impl NodeSnapshot {
    pub fn cap_facets(&self) -> usize {
        self.polytope.count_tag(Tag::Cap)
    }

    pub fn noncap_facets(&self) -> usize {
        self.polytope.count_tag(Tag::NonCap)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalVerdict {
    pub halfspaces: Vec<HalfSpace>,
    pub compliant: bool,
    /// A vertex of the calculated polytope outside the functional polyhedron.
    pub witness: Option<Vec<Scalar>>,
    pub extreme: (Scalar, Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    pub cap_offset: Scalar,
    pub margin: Margin,
    /// Node paths whose NonCap half-spaces changed.
    pub drift: Vec<String>,
    pub extreme_matches: bool,
    pub verdict_matches: bool,
}

impl InvarianceCheck {
    pub fn holds(&self) -> bool {
        self.drift.is_empty() && self.extreme_matches && self.verdict_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplianceReport {
    pub cap_offset: Scalar,
    pub nodes: Vec<NodeSnapshot>,
    pub functional: Option<FunctionalVerdict>,
    pub invariance: Option<InvarianceCheck>,
}

impl ComplianceReport {
    /// The polytope of the whole expression.
    pub fn calculated(&self) -> &Polytope {
        &self.root().polytope
    }

    pub fn root(&self) -> &NodeSnapshot {
        self.nodes.iter().find(|n| n.path == "$").expect("root node")
    }

    pub fn node(&self, path: &str) -> Option<&NodeSnapshot> {
        self.nodes.iter().find(|n| n.path == path)
    }

    pub fn compliant(&self) -> Option<bool> {
        self.functional.as_ref().map(|f| f.compliant)
    }
}

/// `±(direction · t_M)` bounded by `dev_sup` and `-dev_inf`.
pub fn functional_polyhedron(fc: &FunctionalCondition, space: SpaceMode) -> Result<Vec<HalfSpace>> {
    let row = functional_row(&fc.direction, space)?;
    let neg: Vec<Scalar> = row.iter().map(|x| -x).collect();
    Ok(vec![
        HalfSpace::noncap(row, fc.dev_sup.clone(), "fc:sup")?,
        HalfSpace::noncap(neg, -fc.dev_inf.clone(), "fc:inf")?,
    ])
}

/// Coordinates of `direction · t_M` in the displacement space.
pub fn functional_row(direction: &[Scalar], space: SpaceMode) -> Result<Vec<Scalar>> {
    let dir = unit_normal(direction)?;
    let mut full = vec![Scalar::from_integer(0.into()); 3];
    full.extend(dir);
    let row = space.project(&full);
    if is_zero_vec(&row) {
        return Err(Error::Unsupported(
            "functional direction has no component in the displacement space".into(),
        ));
    }
    Ok(row)
}

/// `(min, max)` of `direction · x` over `p`.
pub fn extreme_deviation(p: &Polytope, direction: &[Scalar]) -> (Scalar, Scalar) {
    let neg: Vec<Scalar> = direction.iter().map(|x| -x).collect();
    (-support_value(p, &neg), support_value(p, direction))
}

struct Evaluator<'a> {
    model: &'a MechanismModel,
    c: Scalar,
    margin: Margin,
    nodes: Vec<NodeSnapshot>,
}

impl Evaluator<'_> {
    fn eval(&mut self, e: &Expr, path: &str) -> Result<Polytope> {
        let (p, label, diagnostics) = self.eval_node(e, path).map_err(|err| err.at_node(path))?;
        self.nodes.push(NodeSnapshot {
            path: path.to_string(),
            label,
            polytope: p.clone(),
            diagnostics,
        });
        Ok(p)
    }

    fn eval_node(&mut self, e: &Expr, path: &str) -> Result<(Polytope, String, Vec<String>)> {
        let sub = |i: usize| format!("{path}.{}[{i}]", e.kind());
        match e {
            Expr::Leaf {
                name,
                operand,
                negated,
            } => {
                let p = self.model.build_operand(operand, &self.c)?;
                let p = if *negated { p.negated() } else { p };
                Ok((p, name.clone(), Vec::new()))
            }
            Expr::Neg(inner) => {
                let p = self.eval(inner, &format!("{path}.neg"))?;
                Ok((p.negated(), "neg".into(), Vec::new()))
            }
            Expr::Sum(items) => {
                let mut acc = self.eval(&items[0], &sub(0))?;
                let mut diagnostics = Vec::new();
                for (i, item) in items.iter().enumerate().skip(1) {
                    let next = self.eval(item, &sub(i))?;
                    let (s, cert) = minkowski_sum(&acc, &next)?;
                    diagnostics.extend(cert.diagnostics);
                    acc = s;
                }
                Ok((acc, "sum".into(), diagnostics))
            }
            Expr::Intersect(items) => {
                let ops = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.eval(x, &sub(i)))
                    .collect::<Result<Vec<_>>>()?;
                if ops.len() == 1 {
                    return Ok((ops.into_iter().next().unwrap(), "intersect".into(), Vec::new()));
                }
                let r = capped_intersection(&ops, &self.margin)?;
                let mut diagnostics = Vec::new();
                if r.naive_differs {
                    diagnostics.push("plain intersection of the tagged operands differs".into());
                }
                Ok((r.result, "intersect".into(), diagnostics))
            }
        }
    }
}

fn run(model: &MechanismModel, c: Scalar, margin: Margin) -> Result<ComplianceReport> {
    let mut ev = Evaluator {
        model,
        c: c.clone(),
        margin,
        nodes: Vec::new(),
    };
    let p = ev.eval(&model.expression, "$")?;
    let functional = match &model.functional {
        None => None,
        Some(fc) => {
            let hs = functional_polyhedron(fc, model.space.mode)?;
            let witness = inclusion_witness(&p, &hs).map(|i| p.vertices()[i].coords.clone());
            let extreme = extreme_deviation(&p, &functional_row(&fc.direction, model.space.mode)?);
            Some(FunctionalVerdict {
                halfspaces: hs,
                compliant: witness.is_none(),
                witness,
                extreme,
            })
        }
    };
    let mut nodes = ev.nodes;
    nodes.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(ComplianceReport {
        cap_offset: c,
        nodes,
        functional,
        invariance: None,
    })
}

/// Evaluates the expression and checks the functional condition.
pub fn evaluate(model: &MechanismModel, options: &EvalOptions) -> Result<ComplianceReport> {
    let strategy = options.caps.clone().unwrap_or_else(|| model.caps.clone());
    let margin = options.margin.clone().unwrap_or_else(|| model.margin.clone());
    let c = model.cap_offset(&strategy)?;
    let mut report = run(model, c.clone(), margin.clone())?;
    if options.check_c_invariance {
        let c2 = &c * Scalar::from_integer(10.into());
        let m2 = margin.scaled(&Scalar::from_integer(3.into()));
        let other = run(model, c2.clone(), m2.clone())?;
        report.invariance = Some(compare_runs(&report, &other, c2, m2));
    }
    Ok(report)
}

/// Compares the NonCap content of two evaluations of the same expression.
pub fn compare_runs(a: &ComplianceReport, b: &ComplianceReport, c: Scalar, margin: Margin) -> InvarianceCheck {
    let mut drift = Vec::new();
    for n in &a.nodes {
        match b.node(&n.path) {
            Some(m) if m.polytope.noncap_keys() == n.polytope.noncap_keys() => {}
            _ => drift.push(n.path.clone()),
        }
    }
    let fa = a.functional.as_ref();
    let fb = b.functional.as_ref();
    InvarianceCheck {
        cap_offset: c,
        margin,
        drift,
        extreme_matches: fa.map(|f| &f.extreme) == fb.map(|f| &f.extreme),
        verdict_matches: fa.map(|f| f.compliant) == fb.map(|f| f.compliant),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use serde_json::json;

    fn tiny() -> Value {
        json!({
            "space": {"dim": 3, "point_M": [0, 0, 0]},
            "points": {"A": [-10, 0, 0], "B": [10, 0, 0]},
            "surfaces": [{
                "id": "1,1/1,0", "class": "plane",
                "frame": {"u": "x", "v": "z", "w": "y"},
                "zone": {"t": "0.2"},
                "constraint_points": [{"point": "A", "normal": "y"}, {"point": "B", "normal": "y"}]
            }],
            "functional_condition": {"direction": "y", "dev_inf": "-1/2", "dev_sup": "1/2"},
            "expression": "1,1/1,0"
        })
    }

    #[test]
    fn single_leaf_model() {
        let model = load_mechanism(&tiny()).unwrap();
        assert_eq!(model.parts().len(), 1);
        let report = evaluate(&model, &EvalOptions::default()).unwrap();
        assert_eq!(report.nodes.len(), 1);
        assert_eq!(report.compliant(), Some(true));
        let f = report.functional.unwrap();
        assert_eq!(f.extreme, (ratio(-1, 10), ratio(1, 10)));
    }

    #[test]
    fn unknown_leaf() {
        let mut doc = tiny();
        doc["expression"] = json!("9,9/1,0");
        assert_eq!(load_mechanism(&doc).unwrap_err(), Error::UnknownReference("9,9/1,0".into()));
    }

    #[test]
    fn reversed_leaf_is_negated() {
        let mut doc = tiny();
        doc["expression"] = json!("1,0/1,1");
        let model = load_mechanism(&doc).unwrap();
        assert!(matches!(model.expression, Expr::Leaf { negated: true, .. }));
    }

    #[test]
    fn schema_paths() {
        let mut doc = tiny();
        doc["surfaces"][0]["zone"]["t"] = json!(true);
        match load_mechanism(&doc).unwrap_err() {
            Error::Schema { path, .. } => assert_eq!(path, "$.surfaces[0].zone.t"),
            e => panic!("unexpected {e}"),
        }
        let mut doc = tiny();
        doc["space"]["dim"] = json!(4);
        assert!(matches!(load_mechanism(&doc), Err(Error::InconsistentDimension(_))));
    }

    #[test]
    fn functional_halfspaces() {
        let fc = FunctionalCondition {
            direction: vec![int(0), int(1), int(0)],
            dev_inf: ratio(-1, 10),
            dev_sup: ratio(2, 5),
        };
        let hs = functional_polyhedron(&fc, SpaceMode::Planar).unwrap();
        assert_eq!(hs[0].normal(), &[int(0), int(0), int(1)]);
        assert_eq!(hs[0].offset(), &ratio(2, 5));
        assert_eq!(hs[1].offset(), &ratio(1, 10));
    }

    #[test]
    fn auto_cap_offset() {
        let model = load_mechanism(&tiny()).unwrap();
        assert_eq!(model.cap_offset(&CapStrategy::Auto).unwrap(), int(1000));
        assert_eq!(model.cap_offset(&CapStrategy::Fixed(int(0))).unwrap_err(), Error::NonPositiveC);
    }
}
