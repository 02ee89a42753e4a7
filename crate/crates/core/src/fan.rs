//! Dual cones and normal fans.
//!
//! Fans are never materialized as cell complexes. A [`NormalFanView`] keeps the
//! half-space system and its generators and answers "which cone contains `u`"
//! on demand.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dd::cone_generators;
use crate::error::{Error, Result};
use crate::halfspace::{dedup_halfspaces, HalfSpace};
use crate::linalg::{dot_int, dot_mixed, primitive, primitive_int, rank_int};
use crate::polytope::{generators, Generators, Polytope};
use crate::scalar::Scalar;

/// A closed convex cone `cone(generators)` with its H-form `{u : h·u <= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralCone {
    ambient: usize,
    generators: Vec<Vec<BigInt>>,
    hrows: Vec<Vec<BigInt>>,
    dim: usize,
}

impl PolyhedralCone {
    /// Cone generated by non-negative combinations of `generators`.
    pub fn from_generators(ambient: usize, generators: Vec<Vec<BigInt>>) -> PolyhedralCone {
        let mut gens: Vec<Vec<BigInt>> = generators
            .into_iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .map(primitive_int)
            .collect();
        gens.sort();
        gens.dedup();
        // The polar {h : g·h <= 0} has the cone's facet normals as generators.
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|x| -x).collect())
            .collect();
        let polar = cone_generators(&rows, ambient);
        let mut hrows = polar.rays;
        for l in polar.lineality {
            hrows.push(l.iter().map(|x| -x).collect());
            hrows.push(l);
        }
        hrows.sort();
        hrows.dedup();
        let dim = rank_int(&gens);
        PolyhedralCone {
            ambient,
            generators: gens,
            hrows,
            dim,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Rows `h` of the H-form `h·u <= 0`.
    pub fn hrows(&self) -> &[Vec<BigInt>] {
        &self.hrows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, u: &[Scalar]) -> bool {
        self.hrows.iter().all(|h| !dot_mixed(h, u).is_positive())
    }

    pub fn contains_int(&self, u: &[BigInt]) -> bool {
        self.hrows.iter().all(|h| !dot_int(h, u).is_positive())
    }
}

/// Exact dimension of `c1 ∩ c2`.
pub fn cone_intersection_dim(c1: &PolyhedralCone, c2: &PolyhedralCone) -> usize {
    cone_intersection(c1, c2).dim()
}

fn cone_intersection(c1: &PolyhedralCone, c2: &PolyhedralCone) -> crate::dd::ConeGenerators {
    assert_eq!(c1.ambient, c2.ambient, "cones live in different spaces");
    let rows: Vec<Vec<BigInt>> = c1
        .hrows
        .iter()
        .chain(c2.hrows.iter())
        .map(|h| h.iter().map(|x| -x).collect())
        .collect();
    cone_generators(&rows, c1.ambient)
}

/// Normal cone of vertex `v`: the directions whose face contains it.
pub fn dual_cone(p: &Polytope, v: usize) -> Result<PolyhedralCone> {
    let vertex = p.vertices().get(v).ok_or(Error::NotAVertex(v))?;
    let gens = vertex
        .tight
        .iter()
        .map(|&i| p.halfspaces()[i].normal_int())
        .collect();
    Ok(PolyhedralCone::from_generators(p.ambient_dim(), gens))
}

/// Normal fan of a polyhedron, given by its half-spaces.
///
/// The maximal cones are the normal cones of the minimal faces. The fan is
/// complete exactly when the polyhedron is bounded.
#[derive(Clone, Debug)]
pub struct NormalFanView {
    dim: usize,
    rows: Vec<HalfSpace>,
    gens: Generators,
    cones: Vec<PolyhedralCone>,
}

impl NormalFanView {
    /// Fan of `{x : h·x <= b for all rows}`. The system must be feasible.
    pub fn of_system(rows: &[HalfSpace], dim: usize) -> Result<NormalFanView> {
        let rows = dedup_halfspaces(rows.to_vec());
        let gens = generators(&rows, dim);
        if gens.points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Ok(Self::assemble(dim, rows, gens))
    }

    fn assemble(dim: usize, rows: Vec<HalfSpace>, gens: Generators) -> NormalFanView {
        let cones = gens
            .points
            .iter()
            .map(|p| {
                let normals = rows
                    .iter()
                    .filter(|h| h.is_tight(p))
                    .map(HalfSpace::normal_int)
                    .collect();
                PolyhedralCone::from_generators(dim, normals)
            })
            .collect();
        NormalFanView {
            dim,
            rows,
            gens,
            cones,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Maximal cones, one per minimal face of the polyhedron.
    pub fn cones(&self) -> &[PolyhedralCone] {
        &self.cones
    }

    pub fn is_complete(&self) -> bool {
        self.gens.is_bounded()
    }

    /// Number of rays of the fan (one-dimensional cones), counted over the
    /// distinct row normals whose own smallest cone is one-dimensional.
    pub fn rays(&self) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = Vec::new();
        for h in &self.rows {
            let a = h.normal_int();
            if let Some(c) = self.smallest_cone_int(&a) {
                if c.dim() == 1 && !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out.sort();
        out
    }

    /// The cone of the fan having `u` in its relative interior, or `None` when
    /// `u` lies outside the support of the fan.
    pub fn smallest_cone(&self, u: &[Scalar]) -> Option<PolyhedralCone> {
        self.smallest_cone_int(&primitive(u))
    }

    fn smallest_cone_int(&self, u: &[BigInt]) -> Option<PolyhedralCone> {
        if self.gens.lineality.iter().any(|l| !dot_int(u, l).is_zero()) {
            return None;
        }
        if self.gens.rays.iter().any(|r| dot_int(u, r).is_positive()) {
            return None;
        }
        let values: Vec<Scalar> = self.gens.points.iter().map(|p| dot_mixed(u, p)).collect();
        let best = values.iter().max()?.clone();
        let face_points: Vec<&Vec<Scalar>> = self
            .gens
            .points
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v == best)
            .map(|(p, _)| p)
            .collect();
        let face_rays: Vec<&Vec<BigInt>> = self
            .gens
            .rays
            .iter()
            .filter(|r| dot_int(u, r).is_zero())
            .collect();
        let normals = self
            .rows
            .iter()
            .filter(|h| {
                let a = h.normal_int();
                face_points.iter().all(|p| h.is_tight(p))
                    && face_rays.iter().all(|r| dot_int(&a, r).is_zero())
            })
            .map(HalfSpace::normal_int)
            .collect();
        Some(PolyhedralCone::from_generators(self.dim, normals))
    }

    /// True when `u` lies in some cone of the fan.
    pub fn covers(&self, u: &[Scalar]) -> bool {
        self.smallest_cone(u).is_some()
    }
}

/// Fan of a polytope (complete).
pub fn polytope_fan(p: &Polytope) -> NormalFanView {
    let gens = Generators {
        points: p.vertex_coords(),
        rays: Vec::new(),
        lineality: Vec::new(),
    };
    NormalFanView::assemble(p.ambient_dim(), p.halfspaces().to_vec(), gens)
}

/// Fan of the polyhedron cut out by the NonCap half-spaces of `p`.
pub fn polyhedron_fan(p: &Polytope) -> NormalFanView {
    let rows = p.underlying_polyhedron();
    let gens = generators(&rows, p.ambient_dim());
    debug_assert!(!gens.points.is_empty(), "polyhedron contains the polytope");
    NormalFanView::assemble(p.ambient_dim(), rows, gens)
}

/// True when `u` spans a ray of the common refinement `fan_a ∧ fan_b`.
pub fn is_refinement_ray(u: &[Scalar], fan_a: &NormalFanView, fan_b: &NormalFanView) -> bool {
    refinement_test(u, fan_a, fan_b).is_ray
}

/// Outcome of a refinement-ray test, kept for certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementTest {
    pub in_a: bool,
    pub in_b: bool,
    pub dim_a: Option<usize>,
    pub dim_b: Option<usize>,
    pub intersection_dim: Option<usize>,
    pub is_ray: bool,
}

impl std::fmt::Display for RefinementTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |d: Option<usize>| d.map_or("-".to_string(), |d| d.to_string());
        write!(
            f,
            "covered=({}, {}) cone dims=({}, {}) meet dim={} ray={}",
            self.in_a,
            self.in_b,
            show(self.dim_a),
            show(self.dim_b),
            show(self.intersection_dim),
            self.is_ray
        )
    }
}

pub fn refinement_test(u: &[Scalar], fan_a: &NormalFanView, fan_b: &NormalFanView) -> RefinementTest {
    let ca = fan_a.smallest_cone(u);
    let cb = fan_b.smallest_cone(u);
    let intersection_dim = match (&ca, &cb) {
        (Some(a), Some(b)) => Some(cone_intersection_dim(a, b)),
        _ => None,
    };
    RefinementTest {
        in_a: ca.is_some(),
        in_b: cb.is_some(),
        dim_a: ca.as_ref().map(PolyhedralCone::dim),
        dim_b: cb.as_ref().map(PolyhedralCone::dim),
        intersection_dim,
        is_ray: intersection_dim == Some(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{h_to_v, v_to_h};
    use crate::scalar::int;
    use crate::Tag;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn square(tags: [Tag; 4]) -> Polytope {
        let normals = [[1, 0], [-1, 0], [0, 1], [0, -1]];
        let rows: Vec<HalfSpace> = normals
            .iter()
            .zip(tags)
            .map(|(n, t)| HalfSpace::new(q(n), int(1), t, "sq").unwrap())
            .collect();
        h_to_v(&rows, 2).unwrap()
    }

    #[test]
    fn square_corner_cone() {
        let p = square([Tag::NonCap; 4]);
        let v = p.vertex_index(&q(&[1, 1])).unwrap();
        let c = dual_cone(&p, v).unwrap();
        assert_eq!(c.generators(), &[z(&[0, 1]), z(&[1, 0])]);
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&q(&[3, 1])));
        assert!(!c.contains(&q(&[-1, 1])));
        assert_eq!(dual_cone(&p, 9).unwrap_err(), Error::NotAVertex(9));
    }

    #[test]
    fn segment_endpoint_cone_is_half_plane() {
        let p = v_to_h(&[q(&[0, 0]), q(&[1, 0])], 2).unwrap();
        let v = p.vertex_index(&q(&[1, 0])).unwrap();
        let c = dual_cone(&p, v).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&q(&[1, 5])));
        assert!(c.contains(&q(&[0, -5])));
        assert!(!c.contains(&q(&[-1, 0])));
    }

    #[test]
    fn intersection_dims() {
        let a = PolyhedralCone::from_generators(2, vec![z(&[1, 0]), z(&[0, 1])]);
        let b = PolyhedralCone::from_generators(2, vec![z(&[-1, 0]), z(&[0, -1])]);
        assert_eq!(cone_intersection_dim(&a, &b), 0);
        assert_eq!(cone_intersection_dim(&a, &a), 2);
        let c = PolyhedralCone::from_generators(2, vec![z(&[1, 0]), z(&[0, -1])]);
        assert_eq!(cone_intersection_dim(&a, &c), 1);
    }

    #[test]
    fn strip_fan_has_two_rays() {
        let p = square([Tag::NonCap, Tag::NonCap, Tag::Cap, Tag::Cap]);
        let fan = polyhedron_fan(&p);
        assert!(!fan.is_complete());
        assert_eq!(fan.rays(), vec![z(&[-1, 0]), z(&[1, 0])]);
        assert!(!fan.covers(&q(&[1, 1])));
        assert!(fan.covers(&q(&[-2, 0])));
    }

    #[test]
    fn uncapped_polytope_fans_agree() {
        let p = square([Tag::NonCap; 4]);
        let a = polyhedron_fan(&p);
        let b = polytope_fan(&p);
        assert!(a.is_complete());
        let mut ca = a.cones().to_vec();
        let mut cb = b.cones().to_vec();
        ca.sort_by(|x, y| x.generators().cmp(y.generators()));
        cb.sort_by(|x, y| x.generators().cmp(y.generators()));
        assert_eq!(ca, cb);
    }

    #[test]
    fn single_noncap_row_gives_single_ray() {
        let p = square([Tag::NonCap, Tag::Cap, Tag::Cap, Tag::Cap]);
        let fan = polyhedron_fan(&p);
        assert_eq!(fan.rays(), vec![z(&[1, 0])]);
        assert_eq!(fan.cones().len(), 1);
    }

    #[test]
    fn refinement_rays_of_square() {
        let p = square([Tag::NonCap; 4]);
        let fan = polytope_fan(&p);
        assert!(is_refinement_ray(&q(&[1, 0]), &fan, &fan));
        assert!(!is_refinement_ray(&q(&[1, 1]), &fan, &fan));
        let strip = polyhedron_fan(&square([Tag::NonCap, Tag::NonCap, Tag::Cap, Tag::Cap]));
        assert!(!is_refinement_ray(&q(&[0, 1]), &fan, &strip));
        assert!(is_refinement_ray(&q(&[-1, 0]), &fan, &strip));
    }
}
