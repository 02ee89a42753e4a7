//! Double-description polytopes with cap/non-cap tags.
//!
//! A [`Polytope`] keeps an irredundant list of tagged half-spaces together with
//! its vertices. Lower-dimensional polytopes are allowed; their affine hull is
//! encoded by pairs of opposite half-spaces.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dd::cone_generators;
use crate::error::{Error, Result};
use crate::halfspace::{dedup_halfspaces, HalfSpace, Tag};
use crate::linalg::{self, dot, lex_cmp, primitive, rank, to_rational};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub coords: Vec<Scalar>,
    pub tag: Tag,
    /// Indices into the owning polytope's half-space list.
    pub tight: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vertex>,
}

/// A face given by its vertices (indices into [`Polytope::vertices`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// Generators of a polyhedron: `conv(points) + cone(rays) + span(lineality)`.
#[derive(Clone, Debug)]
pub(crate) struct Generators {
    pub points: Vec<Vec<Scalar>>,
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

impl Generators {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Dimension of the sub-face on which `tight` holds with equality for
    /// every listed half-space.
    pub fn face_dim(&self, tight: impl Fn(&[Scalar]) -> bool, on_ray: impl Fn(&[BigInt]) -> bool) -> Option<usize> {
        let pts: Vec<&Vec<Scalar>> = self.points.iter().filter(|p| tight(p)).collect();
        let first = pts.first()?;
        let mut rows: Vec<Vec<Scalar>> = pts[1..].iter().map(|p| linalg::sub(p, first)).collect();
        rows.extend(self.rays.iter().filter(|r| on_ray(r)).map(|r| to_rational(r)));
        rows.extend(self.lineality.iter().map(|l| to_rational(l)));
        Some(rank(&rows))
    }

    pub fn dim(&self) -> Option<usize> {
        self.face_dim(|_| true, |_| true)
    }

    /// True when every point of the polyhedron satisfies `h`.
    pub fn implies(&self, h: &HalfSpace) -> bool {
        let a = h.normal_int();
        self.points.iter().all(|p| h.contains(p))
            && self.rays.iter().all(|r| !linalg::dot_int(&a, r).is_positive())
            && self.lineality.iter().all(|l| linalg::dot_int(&a, l).is_zero())
    }
}

/// Generators of `{x : h.normal · x <= h.offset for all h}` in `R^dim`.
pub(crate) fn generators(halfspaces: &[HalfSpace], dim: usize) -> Generators {
    // Homogenize: y = (x0, x) with x0 >= 0 and offset·x0 - normal·x >= 0.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(halfspaces.len() + 1);
    let mut unit = vec![BigInt::zero(); dim + 1];
    unit[0] = BigInt::from(1);
    rows.push(unit);
    for h in halfspaces {
        let mut row = Vec::with_capacity(dim + 1);
        row.push(h.offset().clone());
        row.extend(h.normal().iter().map(|q| -q.clone()));
        rows.push(primitive(&row));
    }
    let cone = cone_generators(&rows, dim + 1);
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for r in cone.rays {
        if r[0].is_positive() {
            let x0 = Scalar::from_integer(r[0].clone());
            points.push(
                r[1..]
                    .iter()
                    .map(|v| Scalar::from_integer(v.clone()) / &x0)
                    .collect(),
            );
        } else {
            rays.push(r[1..].to_vec());
        }
    }
    let lineality = cone.lineality.into_iter().map(|l| l[1..].to_vec()).collect();
    Generators {
        points,
        rays,
        lineality,
    }
}

fn check_dims(halfspaces: &[HalfSpace], dim: usize) -> Result<()> {
    for h in halfspaces {
        if h.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: h.dim(),
            });
        }
    }
    Ok(())
}

/// Drops every half-space whose removal does not enlarge the set.
///
/// Duplicates are merged first (NonCap wins). For full-dimensional sets the
/// survivors are exactly the facet-defining half-spaces; for lower-dimensional
/// sets half-spaces are tested one by one in canonical order, so the output
/// does not depend on the input order.
pub fn remove_redundant(halfspaces: &[HalfSpace], dim: usize) -> Result<Vec<HalfSpace>> {
    check_dims(halfspaces, dim)?;
    let gens = generators(halfspaces, dim);
    if gens.points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    Ok(remove_redundant_with(halfspaces, dim, &gens))
}

pub(crate) fn remove_redundant_with(
    halfspaces: &[HalfSpace],
    dim: usize,
    gens: &Generators,
) -> Vec<HalfSpace> {
    let list = dedup_halfspaces(halfspaces.to_vec());
    let full = gens.dim() == Some(dim);
    if full {
        return list
            .into_iter()
            .filter(|h| {
                let a = h.normal_int();
                gens.face_dim(|p| h.is_tight(p), |r| linalg::dot_int(&a, r).is_zero())
                    == Some(dim - 1)
            })
            .collect();
    }
    let mut kept = list;
    let mut i = 0;
    while i < kept.len() {
        let mut rest = kept.clone();
        let candidate = rest.remove(i);
        if generators(&rest, dim).implies(&candidate) {
            kept = rest;
        } else {
            i += 1;
        }
    }
    kept
}

/// Vertex enumeration: converts an H-description into a tracked polytope.
///
/// Vertex tags follow the face definition: a vertex is NonCap when it is also a
/// vertex of the polyhedron cut out by the NonCap half-spaces alone, i.e. the
/// NonCap half-spaces tight at it have full rank.
pub fn h_to_v(halfspaces: &[HalfSpace], dim: usize) -> Result<Polytope> {
    if halfspaces.is_empty() {
        return Err(Error::UnboundedInput);
    }
    check_dims(halfspaces, dim)?;
    let gens = generators(halfspaces, dim);
    if gens.points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    if !gens.is_bounded() {
        return Err(Error::UnboundedInput);
    }
    let irredundant = remove_redundant_with(halfspaces, dim, &gens);
    Ok(Polytope::assemble(dim, irredundant, gens.points))
}

/// Facet enumeration: the H-description of the convex hull of `points`.
///
/// Lower-dimensional hulls are returned with one pair of opposite half-spaces
/// per independent equation of the affine hull. The remaining facet normals are
/// projected onto the hull's direction space so that the output is canonical.
pub fn v_to_h(points: &[Vec<Scalar>], dim: usize) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                found: p.len(),
            });
        }
    }
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(dim + 1);
            row.push(Scalar::from_integer(BigInt::from(1)));
            row.extend(p.iter().cloned());
            primitive(&row)
        })
        .collect();
    // Dual cone: (c0, c) with c0 + c·p >= 0 for every point.
    let dual = cone_generators(&rows, dim + 1);

    // Equations of the affine hull, in reduced echelon form over (c, c0).
    let eq_rows: Vec<Vec<Scalar>> = dual
        .lineality
        .iter()
        .map(|l| {
            let mut v = to_rational(&l[1..]);
            v.push(Scalar::from_integer(l[0].clone()));
            v
        })
        .collect();
    let (echelon, _) = if eq_rows.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        linalg::rref(&eq_rows)
    };
    let mut halfspaces = Vec::new();
    let mut eq_normals: Vec<Vec<Scalar>> = Vec::new();
    for (k, row) in echelon.iter().enumerate() {
        let prim = to_rational(&primitive(row));
        let c = prim[..dim].to_vec();
        let c0 = prim[dim].clone();
        // c0 + c·x = 0
        halfspaces.push(HalfSpace::noncap(c.clone(), -c0.clone(), format!("hull:eq{k}+"))?);
        halfspaces.push(HalfSpace::noncap(
            c.iter().map(|q| -q.clone()).collect(),
            c0,
            format!("hull:eq{k}-"),
        )?);
        eq_normals.push(c);
    }

    for r in &dual.rays {
        let mut c0 = Scalar::from_integer(r[0].clone());
        let mut c = to_rational(&r[1..]);
        if !eq_normals.is_empty() {
            // Remove the component along the equation normals.
            let gram: Vec<Vec<Scalar>> = eq_normals
                .iter()
                .map(|ei| eq_normals.iter().map(|ej| dot(ei, ej)).collect())
                .collect();
            let rhs: Vec<Scalar> = eq_normals.iter().map(|ei| -dot(ei, &c)).collect();
            let lambda = linalg::solve(&gram, &rhs)
                .expect("equation normals are linearly independent");
            for (row, l) in echelon.iter().zip(&lambda) {
                for j in 0..dim {
                    c[j] += l * &row[j];
                }
                c0 += l * &row[dim];
            }
        }
        if linalg::is_zero_vec(&c) {
            continue;
        }
        // c0 + c·x >= 0  <=>  -c·x <= c0
        halfspaces.push(HalfSpace::noncap(
            c.iter().map(|q| -q.clone()).collect(),
            c0,
            "hull",
        )?);
    }
    let halfspaces = dedup_halfspaces(halfspaces);
    let mut unique: Vec<Vec<Scalar>> = points.to_vec();
    unique.sort_by(|a, b| lex_cmp(a, b));
    unique.dedup();
    Ok(Polytope::assemble(dim, halfspaces, unique))
}

impl Polytope {
    /// Builds the polytope from an irredundant H-list and a point set that
    /// contains every vertex; non-extreme points are discarded.
    pub(crate) fn assemble(dim: usize, halfspaces: Vec<HalfSpace>, points: Vec<Vec<Scalar>>) -> Polytope {
        let mut halfspaces = halfspaces;
        halfspaces.sort_by(|a, b| a.cmp_geometry(b));
        let mut vertices: Vec<Vertex> = Vec::new();
        for p in points {
            let tight: Vec<usize> = (0..halfspaces.len())
                .filter(|&i| halfspaces[i].is_tight(&p))
                .collect();
            let normals: Vec<Vec<Scalar>> = tight.iter().map(|&i| halfspaces[i].normal().to_vec()).collect();
            if rank(&normals) != dim {
                continue;
            }
            let noncap: Vec<Vec<Scalar>> = tight
                .iter()
                .filter(|&&i| !halfspaces[i].tag.is_cap())
                .map(|&i| halfspaces[i].normal().to_vec())
                .collect();
            let tag = if rank(&noncap) == dim { Tag::NonCap } else { Tag::Cap };
            vertices.push(Vertex { coords: p, tag, tight });
        }
        vertices.sort_by(|a, b| lex_cmp(&a.coords, &b.coords));
        vertices.dedup_by(|a, b| a.coords == b.coords);
        Polytope {
            dim,
            halfspaces,
            vertices,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_coords(&self) -> Vec<Vec<Scalar>> {
        self.vertices.iter().map(|v| v.coords.clone()).collect()
    }

    pub fn vertex_index(&self, coords: &[Scalar]) -> Option<usize> {
        self.vertices
            .binary_search_by(|v| lex_cmp(&v.coords, coords))
            .ok()
    }

    /// Affine dimension of the polytope.
    pub fn dimension(&self) -> usize {
        let pts: Vec<&[Scalar]> = self.vertices.iter().map(|v| v.coords.as_slice()).collect();
        linalg::affine_dim(&pts).unwrap_or(0)
    }

    /// Vertices lying on half-space `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].tight.contains(&i))
            .collect()
    }

    /// True when half-space `i` is one side of an equation of the affine hull.
    pub fn is_equation(&self, i: usize) -> bool {
        let h = &self.halfspaces[i];
        self.halfspaces.iter().any(|o| o.is_opposite(h))
    }

    pub fn count_tag(&self, tag: Tag) -> usize {
        self.halfspaces.iter().filter(|h| h.tag == tag).count()
    }

    pub fn cap_facets(&self) -> Vec<&HalfSpace> {
        self.halfspaces.iter().filter(|h| h.tag.is_cap()).collect()
    }

    pub fn noncap_facets(&self) -> Vec<&HalfSpace> {
        self.halfspaces.iter().filter(|h| !h.tag.is_cap()).collect()
    }

    /// The NonCap half-spaces, which cut out the underlying polyhedron.
    pub fn underlying_polyhedron(&self) -> Vec<HalfSpace> {
        self.noncap_facets().into_iter().cloned().collect()
    }

    /// Canonical `(normal, offset)` keys of the NonCap half-spaces, sorted.
    pub fn noncap_keys(&self) -> Vec<(Vec<Scalar>, Scalar)> {
        let mut keys: Vec<_> = self.noncap_facets().iter().map(|h| h.key()).collect();
        keys.sort();
        keys
    }

    /// Replaces vertex tags (same order as [`Polytope::vertices`]).
    pub fn set_vertex_tags(&mut self, tags: &[Tag]) {
        assert_eq!(tags.len(), self.vertices.len());
        for (v, t) in self.vertices.iter_mut().zip(tags) {
            v.tag = *t;
        }
    }

    /// Replaces half-space tags and provenance labels.
    pub fn set_halfspace_labels(&mut self, labels: Vec<(Tag, String)>) {
        assert_eq!(labels.len(), self.halfspaces.len());
        for (h, (t, p)) in self.halfspaces.iter_mut().zip(labels) {
            h.tag = t;
            h.provenance = p;
        }
    }

    /// Cap/NonCap status of the face spanned by `face` (vertex indices): the
    /// face is NonCap when it lies in a face of the same dimension of the
    /// underlying polyhedron.
    pub fn face_tag(&self, face: &[usize]) -> Tag {
        let pts: Vec<&[Scalar]> = face.iter().map(|&i| self.vertices[i].coords.as_slice()).collect();
        let Some(dim) = linalg::affine_dim(&pts) else {
            return Tag::Cap;
        };
        let rows: Vec<HalfSpace> = self
            .underlying_polyhedron()
            .into_iter()
            .filter(|h| pts.iter().all(|p| h.is_tight(p)))
            .collect();
        let gens = generators(&self.underlying_polyhedron(), self.dim);
        let normals: Vec<Vec<BigInt>> = rows.iter().map(HalfSpace::normal_int).collect();
        let hull = gens.face_dim(
            |p| rows.iter().all(|h| h.is_tight(p)),
            |r| normals.iter().all(|a| linalg::dot_int(a, r).is_zero()),
        );
        if hull == Some(dim) {
            Tag::NonCap
        } else {
            Tag::Cap
        }
    }

    /// Point reflection through the origin, tags preserved.
    pub fn negated(&self) -> Polytope {
        let halfspaces: Vec<HalfSpace> = self.halfspaces.iter().map(HalfSpace::negated).collect();
        let tags: Vec<(Vec<Scalar>, Tag)> = self
            .vertices
            .iter()
            .map(|v| (v.coords.iter().map(|q| -q.clone()).collect(), v.tag))
            .collect();
        let mut p = Polytope::assemble(
            self.dim,
            halfspaces,
            tags.iter().map(|(c, _)| c.clone()).collect(),
        );
        let new_tags: Vec<Tag> = p
            .vertices
            .iter()
            .map(|v| tags.iter().find(|(c, _)| *c == v.coords).map(|(_, t)| *t).unwrap())
            .collect();
        p.set_vertex_tags(&new_tags);
        p
    }

    pub fn check_invariants(&self) -> Result<()> {
        for (vi, v) in self.vertices.iter().enumerate() {
            for (i, h) in self.halfspaces.iter().enumerate() {
                if !h.contains(&v.coords) {
                    return Err(Error::Invariant(format!("vertex {vi} violates half-space {i}")));
                }
                if h.is_tight(&v.coords) != v.tight.contains(&i) {
                    return Err(Error::Invariant(format!("incidence of vertex {vi} / half-space {i}")));
                }
            }
        }
        if self.vertices.is_empty() {
            return Err(Error::Invariant("polytope without vertices".into()));
        }
        Ok(())
    }
}

/// Vertices maximizing `u · x`, with the affine dimension of their hull.
pub fn face_of(p: &Polytope, u: &[Scalar]) -> Face {
    let values: Vec<Scalar> = p.vertices.iter().map(|v| dot(u, &v.coords)).collect();
    let best = values.iter().max().cloned().unwrap_or_else(Scalar::zero);
    let vertices: Vec<usize> = (0..values.len()).filter(|&i| values[i] == best).collect();
    let pts: Vec<&[Scalar]> = vertices.iter().map(|&i| p.vertices[i].coords.as_slice()).collect();
    let dim = linalg::affine_dim(&pts).unwrap_or(0);
    Face { vertices, dim }
}

/// Support function `max { u · x : x in P }`.
pub fn support_value(p: &Polytope, u: &[Scalar]) -> Scalar {
    p.vertices
        .iter()
        .map(|v| dot(u, &v.coords))
        .max()
        .expect("polytope has at least one vertex")
}

/// First vertex of `p` violating some half-space of `q`, if any.
pub fn inclusion_witness(p: &Polytope, q: &[HalfSpace]) -> Option<usize> {
    p.vertices
        .iter()
        .position(|v| q.iter().any(|h| !h.contains(&v.coords)))
}

/// `P ⊆ Q` for a polyhedron `Q` given by half-spaces (exact vertex test).
pub fn includes(p: &Polytope, q: &[HalfSpace]) -> bool {
    inclusion_witness(p, q).is_none()
}

/// `inner ⊆ outer` for two polytopes.
pub fn includes_polytope(outer: &Polytope, inner: &Polytope) -> bool {
    includes(inner, outer.halfspaces())
}

/// Axis-aligned box around a point set, inflated by a positive margin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub lower: Vec<Scalar>,
    pub upper: Vec<Scalar>,
    pub margin: Scalar,
}

impl BoundingBox {
    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// The `2n` box half-spaces, all tagged Cap.
    pub fn halfspaces(&self) -> Vec<HalfSpace> {
        let n = self.dim();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = vec![Scalar::zero(); n];
            e[i] = Scalar::from_integer(BigInt::from(1));
            out.push(HalfSpace::cap(e.clone(), self.upper[i].clone(), format!("box:axis{i}+")).unwrap());
            let neg: Vec<Scalar> = e.iter().map(|q| -q.clone()).collect();
            out.push(HalfSpace::cap(neg, -self.lower[i].clone(), format!("box:axis{i}-")).unwrap());
        }
        out
    }
}

/// Tight box of `points` widened by `margin` on every side.
pub fn bounding_box(points: &[Vec<Scalar>], margin: &Scalar) -> Result<BoundingBox> {
    if !margin.is_positive() {
        return Err(Error::NonPositiveMargin);
    }
    let (lower, upper) = tight_box(points)?;
    Ok(BoundingBox {
        lower: lower.into_iter().map(|x| x - margin).collect(),
        upper: upper.into_iter().map(|x| x + margin).collect(),
        margin: margin.clone(),
    })
}

pub(crate) fn tight_box(points: &[Vec<Scalar>]) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let first = points.first().ok_or(Error::EmptyPolytope)?;
    let mut lower = first.clone();
    let mut upper = first.clone();
    for p in &points[1..] {
        if p.len() != lower.len() {
            return Err(Error::DimMismatch {
                expected: lower.len(),
                found: p.len(),
            });
        }
        for i in 0..p.len() {
            if p[i] < lower[i] {
                lower[i] = p[i].clone();
            }
            if p[i] > upper[i] {
                upper[i] = p[i].clone();
            }
        }
    }
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn hs(a: &[i64], b: i64) -> HalfSpace {
        HalfSpace::noncap(q(a), int(b), "t").unwrap()
    }

    fn square() -> Polytope {
        h_to_v(
            &[hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 1), hs(&[0, -1], 1)],
            2,
        )
        .unwrap()
    }

    #[test]
    fn unit_square_vertices() {
        let p = square();
        assert_eq!(
            p.vertex_coords(),
            vec![q(&[-1, -1]), q(&[-1, 1]), q(&[1, -1]), q(&[1, 1])]
        );
        p.check_invariants().unwrap();
        assert_eq!(p.dimension(), 2);
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        let err = h_to_v(&[hs(&[1], 0), hs(&[-1], -1)], 1).unwrap_err();
        assert_eq!(err, Error::EmptyPolytope);
    }

    #[test]
    fn half_plane_is_unbounded() {
        let err = h_to_v(&[hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 1)], 2).unwrap_err();
        assert_eq!(err, Error::UnboundedInput);
    }

    #[test]
    fn triangle_facets() {
        let p = v_to_h(&[q(&[0, 0]), q(&[1, 0]), q(&[0, 1])], 2).unwrap();
        let keys: Vec<_> = p.halfspaces().iter().map(|h| h.key()).collect();
        let mut expected = vec![
            (q(&[-1, 0]), int(0)),
            (q(&[0, -1]), int(0)),
            (q(&[1, 1]), int(1)),
        ];
        expected.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn single_point_hull_is_pinned() {
        let p = v_to_h(&[vec![int(2), ratio(1, 3)]], 2).unwrap();
        assert_eq!(p.halfspaces().len(), 4);
        assert!((0..4).all(|i| p.is_equation(i)));
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.dimension(), 0);
    }

    #[test]
    fn segment_hull_has_canonical_end_facets() {
        let p = v_to_h(&[q(&[0, 0]), q(&[2, 2])], 2).unwrap();
        // x = y pinned; ends x + y <= 4 and -x - y <= 0.
        let mut keys: Vec<_> = p.halfspaces().iter().map(|h| h.key()).collect();
        keys.sort();
        let mut expected = vec![
            (q(&[-1, -1]), int(0)),
            (q(&[-1, 1]), int(0)),
            (q(&[1, -1]), int(0)),
            (q(&[1, 1]), int(4)),
        ];
        expected.sort();
        assert_eq!(keys, expected);
        assert_eq!(p.dimension(), 1);
    }

    #[test]
    fn drops_redundant_bound() {
        let out = remove_redundant(
            &[hs(&[1, 0], 1), hs(&[1, 0], 2), hs(&[0, 1], 1), hs(&[0, -1], 1), hs(&[-1, 0], 1)],
            2,
        )
        .unwrap();
        assert_eq!(out.len(), 4);
        assert!(!out.iter().any(|h| h.offset() == &int(2)));
    }

    #[test]
    fn redundancy_keeps_noncap_duplicate() {
        let cap = HalfSpace::cap(q(&[2, 0]), int(2), "cap").unwrap();
        let out = remove_redundant(
            &[cap, hs(&[1, 0], 1), hs(&[-1, 0], 1), hs(&[0, 1], 1), hs(&[0, -1], 1)],
            2,
        )
        .unwrap();
        assert_eq!(out.len(), 4);
        assert!(out.iter().all(|h| h.tag == Tag::NonCap));
    }

    #[test]
    fn lower_dimensional_redundancy_is_order_independent() {
        // y = 0 with two end constraints, each implied by the other pair.
        let a = vec![
            hs(&[0, 1], 0),
            hs(&[0, -1], 0),
            hs(&[1, 1], 1),
            hs(&[1, -1], 1),
            hs(&[-1, 0], 1),
        ];
        let mut b = a.clone();
        b.reverse();
        let ra = remove_redundant(&a, 2).unwrap();
        let rb = remove_redundant(&b, 2).unwrap();
        assert_eq!(ra, rb);
        assert_eq!(ra.len(), 4);
    }

    #[test]
    fn faces_and_support() {
        let p = square();
        let edge = face_of(&p, &q(&[1, 0]));
        assert_eq!(edge.dim, 1);
        let coords: Vec<_> = edge.vertices.iter().map(|&i| p.vertices()[i].coords.clone()).collect();
        assert_eq!(coords, vec![q(&[1, -1]), q(&[1, 1])]);
        let corner = face_of(&p, &q(&[1, 1]));
        assert_eq!(corner.dim, 0);
        assert_eq!(p.vertices()[corner.vertices[0]].coords, q(&[1, 1]));
        assert_eq!(support_value(&p, &q(&[1, 0])), int(1));
        assert_eq!(support_value(&p, &q(&[1, 1])), int(2));
    }

    #[test]
    fn inclusion_and_witness() {
        let p = square();
        assert!(includes(&p, &[hs(&[0, 1], 2), hs(&[0, -1], 2)]));
        let tight = [HalfSpace::noncap(q(&[0, 1]), ratio(1, 2), "f").unwrap()];
        assert!(!includes(&p, &tight));
        let w = inclusion_witness(&p, &tight).unwrap();
        assert_eq!(p.vertices()[w].coords[1], int(1));
        let big = h_to_v(&[hs(&[1, 0], 3), hs(&[-1, 0], 3), hs(&[0, 1], 3), hs(&[0, -1], 3)], 2).unwrap();
        assert!(includes_polytope(&big, &p));
        assert!(!includes_polytope(&p, &big));
    }

    #[test]
    fn boxes() {
        let b = bounding_box(&[q(&[0, 0]), q(&[2, 1])], &int(1)).unwrap();
        assert_eq!(b.lower, q(&[-1, -1]));
        assert_eq!(b.upper, q(&[3, 2]));
        let flat = bounding_box(&[q(&[5, 5])], &int(1)).unwrap();
        assert_eq!(flat.lower, q(&[4, 4]));
        assert_eq!(flat.upper, q(&[6, 6]));
        assert_eq!(bounding_box(&[q(&[0])], &int(0)).unwrap_err(), Error::NonPositiveMargin);
        assert_eq!(b.halfspaces().len(), 4);
    }

    #[test]
    fn vertex_tags_follow_noncap_rank() {
        // Strip |x| <= 1 (noncap) capped by |y| <= 5.
        let hsl = vec![
            hs(&[1, 0], 1),
            hs(&[-1, 0], 1),
            HalfSpace::cap(q(&[0, 1]), int(5), "c").unwrap(),
            HalfSpace::cap(q(&[0, -1]), int(5), "c").unwrap(),
        ];
        let p = h_to_v(&hsl, 2).unwrap();
        assert!(p.vertices().iter().all(|v| v.tag == Tag::Cap));
        assert!(square().vertices().iter().all(|v| v.tag == Tag::NonCap));
    }

    #[test]
    fn negation_reflects() {
        let p = v_to_h(&[q(&[0, 0]), q(&[1, 0]), q(&[0, 2])], 2).unwrap();
        let n = p.negated();
        assert_eq!(n.vertices().len(), 3);
        assert!(n.vertex_index(&q(&[0, -2])).is_some());
        n.check_invariants().unwrap();
    }
}
