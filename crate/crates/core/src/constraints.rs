//! Operand polytopes from tolerancing data.
//!
//! Displacements are small-displacement torsors `x = (r, t_M)` expressed at a
//! common point `M`. A constraint at point `N` with unit normal `n` reads
//! `t_N · n = (MN × n) · r + n · t_M`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfspace::{HalfSpace, Tag};
use crate::linalg::{dot, is_zero_vec};
use crate::polytope::{h_to_v, Polytope};
use crate::scalar::{format_scalar, Scalar};

pub const PLANAR_COORDINATES: [&str; 3] = ["r_z", "t_Mx", "t_My"];
pub const SPATIAL_COORDINATES: [&str; 6] = ["r_x", "r_y", "r_z", "t_Mx", "t_My", "t_Mz"];

/// Which torsor components are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceMode {
    /// `(r_z, t_Mx, t_My)`: planar problems in the xy plane.
    Planar,
    /// `(r_x, r_y, r_z, t_Mx, t_My, t_Mz)`.
    Spatial,
}

impl SpaceMode {
    pub fn dim(self) -> usize {
        match self {
            SpaceMode::Planar => 3,
            SpaceMode::Spatial => 6,
        }
    }

    pub fn from_dim(dim: usize) -> Option<SpaceMode> {
        match dim {
            3 => Some(SpaceMode::Planar),
            6 => Some(SpaceMode::Spatial),
            _ => None,
        }
    }

    pub fn coordinates(self) -> &'static [&'static str] {
        match self {
            SpaceMode::Planar => &PLANAR_COORDINATES,
            SpaceMode::Spatial => &SPATIAL_COORDINATES,
        }
    }

    /// Restricts a row of `R^6` to this space.
    pub fn project(self, row: &[Scalar]) -> Vec<Scalar> {
        match self {
            SpaceMode::Planar => row[2..5].to_vec(),
            SpaceMode::Spatial => row.to_vec(),
        }
    }

    /// Index of a named coordinate.
    pub fn coordinate(self, name: &str) -> Option<usize> {
        self.coordinates().iter().position(|c| *c == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementSpace {
    pub mode: SpaceMode,
    pub point_m: Vec<Scalar>,
}

impl DisplacementSpace {
    pub fn new(mode: SpaceMode, point_m: Vec<Scalar>) -> Result<Self> {
        if point_m.len() != 3 {
            return Err(Error::DimMismatch {
                expected: 3,
                found: point_m.len(),
            });
        }
        Ok(DisplacementSpace { mode, point_m })
    }

    pub fn dim(&self) -> usize {
        self.mode.dim()
    }
}

/// Orthogonal triad `(u, v, w)`; lengths are irrelevant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
    pub w: Vec<Scalar>,
}

impl Frame {
    pub fn new(u: Vec<Scalar>, v: Vec<Scalar>, w: Vec<Scalar>) -> Result<Frame> {
        for (name, x) in [("u", &u), ("v", &v), ("w", &w)] {
            if x.len() != 3 {
                return Err(Error::InvalidFrame(format!("{name} must have 3 components")));
            }
            if is_zero_vec(x) {
                return Err(Error::InvalidFrame(format!("{name} is the zero vector")));
            }
        }
        for (a, b, x, y) in [("u", "v", &u, &v), ("u", "w", &u, &w), ("v", "w", &v, &w)] {
            if !dot(x, y).is_zero() {
                return Err(Error::InvalidFrame(format!("{a} and {b} are not orthogonal")));
            }
        }
        Ok(Frame { u, v, w })
    }

    /// The global frame `(x, y, z)`.
    pub fn standard() -> Frame {
        let e = |i: usize| {
            let mut v = vec![Scalar::zero(); 3];
            v[i] = Scalar::from_integer(1.into());
            v
        };
        Frame {
            u: e(0),
            v: e(1),
            w: e(2),
        }
    }

    fn axis(&self, a: Axis) -> &[Scalar] {
        match a {
            Axis::U => &self.u,
            Axis::V => &self.v,
            Axis::W => &self.w,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    U,
    V,
    W,
}

/// An unbounded displacement: rotation about or translation along a frame axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Motion {
    R(Axis),
    T(Axis),
}

impl fmt::Display for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, a) = match self {
            Motion::R(a) => ("r", a),
            Motion::T(a) => ("t", a),
        };
        let a = match a {
            Axis::U => "u",
            Axis::V => "v",
            Axis::W => "w",
        };
        write!(f, "{k}.{a}")
    }
}

use Axis::{U, V, W};
use Motion::{R, T};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceClass {
    Plane,
    Cylindrical,
    Spherical,
    Revolution,
    Prismatic,
    /// Capped like a cylinder on the helix axis; pitch coupling is ignored.
    Helicoidal,
    Complex,
}

impl SurfaceClass {
    pub const ALL: [SurfaceClass; 7] = [
        SurfaceClass::Plane,
        SurfaceClass::Cylindrical,
        SurfaceClass::Spherical,
        SurfaceClass::Revolution,
        SurfaceClass::Prismatic,
        SurfaceClass::Helicoidal,
        SurfaceClass::Complex,
    ];

    /// Displacements leaving the surface invariant. `w` is the plane normal;
    /// `u` is the axis of cylinders, surfaces of revolution and helices.
    pub fn invariant_motions(self) -> &'static [Motion] {
        match self {
            SurfaceClass::Plane => &[R(W), T(U), T(V)],
            SurfaceClass::Cylindrical => &[R(U), T(U)],
            SurfaceClass::Spherical => &[R(U), R(V), R(W)],
            SurfaceClass::Revolution => &[R(U)],
            SurfaceClass::Prismatic => &[T(V)],
            SurfaceClass::Helicoidal => &[R(U), T(U)],
            SurfaceClass::Complex => &[],
        }
    }

    pub fn d_inv(self) -> usize {
        self.invariant_motions().len()
    }

    pub fn is_experimental(self) -> bool {
        self == SurfaceClass::Helicoidal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointType {
    PlanarPair,
    CylindricalPair,
    BallAndPlane,
    SphericalPair,
    BallAndCylinder,
    /// `u` is the contact line, `w` the plane normal.
    CylinderAndPlane,
    PrismaticPair,
    TurningPair,
}

impl JointType {
    pub const ALL: [JointType; 8] = [
        JointType::PlanarPair,
        JointType::CylindricalPair,
        JointType::BallAndPlane,
        JointType::SphericalPair,
        JointType::BallAndCylinder,
        JointType::CylinderAndPlane,
        JointType::PrismaticPair,
        JointType::TurningPair,
    ];

    /// Relative motions the joint leaves free.
    pub fn free_motions(self) -> &'static [Motion] {
        match self {
            JointType::PlanarPair => &[R(W), T(U), T(V)],
            JointType::CylindricalPair => &[R(U), T(U)],
            JointType::BallAndPlane => &[R(U), R(V), R(W), T(U), T(V)],
            JointType::SphericalPair => &[R(U), R(V), R(W)],
            JointType::BallAndCylinder => &[R(U), R(V), R(W), T(U)],
            JointType::CylinderAndPlane => &[R(U), R(W), T(U), T(V)],
            JointType::PrismaticPair => &[T(U)],
            JointType::TurningPair => &[R(U)],
        }
    }

    pub fn d_mob(self) -> usize {
        self.free_motions().len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToleranceZone {
    pub t: Scalar,
    pub d_inf: Scalar,
    pub d_sup: Scalar,
}

impl ToleranceZone {
    pub fn new(t: Scalar, d_inf: Scalar, d_sup: Scalar) -> Result<Self> {
        if d_inf > d_sup {
            return Err(Error::InvalidZone(format!(
                "d_inf = {} exceeds d_sup = {}",
                format_scalar(&d_inf),
                format_scalar(&d_sup)
            )));
        }
        if &d_sup - &d_inf != t {
            return Err(Error::InvalidZone(format!(
                "d_sup - d_inf = {} differs from t = {}",
                format_scalar(&(&d_sup - &d_inf)),
                format_scalar(&t)
            )));
        }
        Ok(ToleranceZone { t, d_inf, d_sup })
    }

    /// Zone of size `t` centred on the nominal surface.
    pub fn symmetric(t: Scalar) -> Result<Self> {
        let half = &t / Scalar::from_integer(2.into());
        Self::new(t, -half.clone(), half)
    }
}

/// A constraint point with its outward normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintPoint {
    pub name: String,
    pub point: Vec<Scalar>,
    pub normal: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub id: String,
    pub class: SurfaceClass,
    pub frame: Frame,
    pub zone: ToleranceZone,
    pub points: Vec<ConstraintPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContactNature {
    /// Floating contact with clearance `J`: `-J/2 <= t_N·n <= J/2`.
    Bilateral { clearance: Scalar },
    /// One-sided contact `0 <= t_N·n + d`.
    Unilateral { offset: Scalar },
    /// Permanent contact: `t_N·n = 0`.
    Sliding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointSpec {
    pub id: String,
    pub joint_type: JointType,
    pub frame: Frame,
    pub nature: ContactNature,
    pub points: Vec<ConstraintPoint>,
}

fn cross(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn exact_sqrt(q: &Scalar) -> Option<Scalar> {
    let root = |x: &BigInt| {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    Some(Scalar::new(root(q.numer())?, root(q.denom())?))
}

/// Unit vector along `n`, when its length is rational.
pub fn unit_normal(n: &[Scalar]) -> Result<Vec<Scalar>> {
    if n.len() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            found: n.len(),
        });
    }
    if is_zero_vec(n) {
        return Err(Error::ZeroNormal);
    }
    let len = exact_sqrt(&dot(n, n)).ok_or_else(|| {
        Error::IrrationalNormal(format!(
            "({})",
            n.iter().map(format_scalar).collect::<Vec<_>>().join(", ")
        ))
    })?;
    Ok(n.iter().map(|x| x / &len).collect())
}

/// Row `a` of `R^6` with `a·(r, t_M) = t_N · n` (the normal is normalized).
pub fn constraint_row(m: &[Scalar], point: &[Scalar], normal: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = unit_normal(normal)?;
    let mn: Vec<Scalar> = point.iter().zip(m).map(|(p, q)| p - q).collect();
    let mut row = cross(&mn, &n);
    row.extend(n);
    Ok(row)
}

fn motion_row(motion: Motion, frame: &Frame) -> Vec<Scalar> {
    let mut row = vec![Scalar::zero(); 6];
    match motion {
        Motion::R(a) => row[..3].clone_from_slice(frame.axis(a)),
        Motion::T(a) => row[3..].clone_from_slice(frame.axis(a)),
    }
    row
}

/// `±(motion) <= C` for each motion, restricted to the space. Motions that
/// vanish in the space produce no rows.
pub fn cap_halfspaces(
    motions: &[Motion],
    frame: &Frame,
    space: SpaceMode,
    c: &Scalar,
    label: &str,
) -> Result<Vec<HalfSpace>> {
    if !c.is_positive() {
        return Err(Error::NonPositiveC);
    }
    let mut out = Vec::new();
    for &m in motions {
        let row = space.project(&motion_row(m, frame));
        if is_zero_vec(&row) {
            continue;
        }
        let neg: Vec<Scalar> = row.iter().map(|x| -x).collect();
        out.push(HalfSpace::cap(row, c.clone(), format!("cap:{label}:{m}+"))?);
        out.push(HalfSpace::cap(neg, c.clone(), format!("cap:{label}:{m}-"))?);
    }
    Ok(out)
}

/// `a·x <= b` restricted to the space; rows vanishing there are dropped
/// when satisfied and make the system empty otherwise.
fn push_row(
    out: &mut Vec<HalfSpace>,
    space: SpaceMode,
    row: &[Scalar],
    offset: Scalar,
    tag: Tag,
    prov: String,
) -> Result<()> {
    let a = space.project(row);
    if is_zero_vec(&a) {
        return if offset.is_negative() {
            Err(Error::EmptyPolytope)
        } else {
            Ok(())
        };
    }
    out.push(HalfSpace::new(a, offset, tag, prov)?);
    Ok(())
}

fn negate(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| -x).collect()
}

/// NonCap rows `d_inf <= t_N·n <= d_sup` at every point, then the caps.
pub fn geometric_system(s: &SurfaceSpec, space: &DisplacementSpace, c: &Scalar) -> Result<Vec<HalfSpace>> {
    let mut out = Vec::new();
    for p in &s.points {
        let row = constraint_row(&space.point_m, &p.point, &p.normal)?;
        push_row(&mut out, space.mode, &row, s.zone.d_sup.clone(), Tag::NonCap, format!("geom:{}:{}:sup", s.id, p.name))?;
        push_row(&mut out, space.mode, &negate(&row), -s.zone.d_inf.clone(), Tag::NonCap, format!("geom:{}:{}:inf", s.id, p.name))?;
    }
    out.extend(cap_halfspaces(s.class.invariant_motions(), &s.frame, space.mode, c, &s.id)?);
    Ok(out)
}

/// Contact rows of a joint, then the unilateral mirrors and the mobility caps.
pub fn contact_system(j: &JointSpec, space: &DisplacementSpace, c: &Scalar) -> Result<Vec<HalfSpace>> {
    if !c.is_positive() {
        return Err(Error::NonPositiveC);
    }
    let mut out = Vec::new();
    for p in &j.points {
        let row = constraint_row(&space.point_m, &p.point, &p.normal)?;
        let prov = |side: &str| format!("contact:{}:{}:{side}", j.id, p.name);
        match &j.nature {
            ContactNature::Bilateral { clearance } => {
                if clearance.is_negative() {
                    return Err(Error::InvalidZone(format!("negative clearance in joint {}", j.id)));
                }
                let half = clearance / Scalar::from_integer(2.into());
                push_row(&mut out, space.mode, &row, half.clone(), Tag::NonCap, prov("sup"))?;
                push_row(&mut out, space.mode, &negate(&row), half, Tag::NonCap, prov("inf"))?;
            }
            ContactNature::Unilateral { offset } => {
                // 0 <= a·x + d, and the mirror a·x + d <= C.
                push_row(&mut out, space.mode, &negate(&row), offset.clone(), Tag::NonCap, prov("inf"))?;
                push_row(&mut out, space.mode, &row, c - offset, Tag::Cap, format!("cap:{}:{}:mirror", j.id, p.name))?;
            }
            ContactNature::Sliding => {
                push_row(&mut out, space.mode, &row, Scalar::zero(), Tag::NonCap, prov("sup"))?;
                push_row(&mut out, space.mode, &negate(&row), Scalar::zero(), Tag::NonCap, prov("inf"))?;
            }
        }
    }
    out.extend(cap_halfspaces(j.joint_type.free_motions(), &j.frame, space.mode, c, &j.id)?);
    Ok(out)
}

fn bounded(rows: &[HalfSpace], dim: usize, id: &str) -> Result<Polytope> {
    h_to_v(rows, dim).map_err(|e| match e {
        Error::UnboundedInput => Error::UnboundedAfterCaps(id.to_string()),
        e => e,
    })
}

pub fn geometric_polytope(s: &SurfaceSpec, space: &DisplacementSpace, c: &Scalar) -> Result<Polytope> {
    bounded(&geometric_system(s, space, c)?, space.dim(), &s.id)
}

pub fn contact_polytope(j: &JointSpec, space: &DisplacementSpace, c: &Scalar) -> Result<Polytope> {
    bounded(&contact_system(j, space, c)?, space.dim(), &j.id)
}

/// Displacement of point `n` under the torsor `(r, t_M)`: `t_M + r × MN`.
pub fn transport(m: &[Scalar], r: &[Scalar], t_m: &[Scalar], n: &[Scalar]) -> Vec<Scalar> {
    let mn: Vec<Scalar> = n.iter().zip(m).map(|(p, q)| p - q).collect();
    let rot = cross(r, &mn);
    t_m.iter().zip(rot).map(|(a, b)| a + b).collect()
}
