//! Minkowski sums with cap tracking.
//!
//! Vertices of the sum are found by pairing operand vertices whose dual cones
//! meet in a full-dimensional cone. Facet tags come from the refinement rays of
//! the operands' polyhedral fans; vertex tags from the tags of the pair.

use crate::error::{Error, Result};
use crate::fan::{cone_intersection_dim, dual_cone, polyhedron_fan, refinement_test, PolyhedralCone};
use crate::halfspace::Tag;
use crate::linalg::{add, lex_cmp};
use crate::polytope::{face_of, v_to_h, Face, Polytope};
use crate::scalar::Scalar;

/// Operand vertices `left` (of P1) and `right` (of P2) summing to `vertex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPair {
    pub vertex: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetVerdict {
    /// Index into the sum's half-space list.
    pub halfspace: usize,
    pub normal: Vec<Scalar>,
    pub tag: Tag,
    pub transcript: String,
    /// Tag obtained by decomposing the facet into operand faces.
    pub decomposition_tag: Tag,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SumCertificate {
    pub pairs: Vec<VertexPair>,
    pub facets: Vec<FacetVerdict>,
    /// Facets where the fan test and the face decomposition disagree.
    pub diagnostics: Vec<String>,
}

impl SumCertificate {
    pub fn pair_of(&self, vertex: usize) -> Option<&VertexPair> {
        self.pairs.iter().find(|p| p.vertex == vertex)
    }
}

/// `P1 ⊕ P2` with tagged vertices and facets.
pub fn minkowski_sum(p1: &Polytope, p2: &Polytope) -> Result<(Polytope, SumCertificate)> {
    let n = p1.ambient_dim();
    if p2.ambient_dim() != n {
        return Err(Error::DimMismatch {
            expected: n,
            found: p2.ambient_dim(),
        });
    }
    let cones1: Vec<PolyhedralCone> = (0..p1.vertices().len())
        .map(|i| dual_cone(p1, i))
        .collect::<Result<_>>()?;
    let cones2: Vec<PolyhedralCone> = (0..p2.vertices().len())
        .map(|j| dual_cone(p2, j))
        .collect::<Result<_>>()?;

    let mut found: Vec<(Vec<Scalar>, usize, usize)> = Vec::new();
    for (i, c1) in cones1.iter().enumerate() {
        for (j, c2) in cones2.iter().enumerate() {
            if cone_intersection_dim(c1, c2) == n {
                let point = add(&p1.vertices()[i].coords, &p2.vertices()[j].coords);
                found.push((point, i, j));
            }
        }
    }
    found.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    for w in found.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Invariant(format!(
                "sum vertex obtained from two operand pairs ({}, {}) and ({}, {})",
                w[0].1, w[0].2, w[1].1, w[1].2
            )));
        }
    }
    let points: Vec<Vec<Scalar>> = found.iter().map(|f| f.0.clone()).collect();
    let mut sum = v_to_h(&points, n)?;
    if sum.vertices().len() != found.len() {
        return Err(Error::Invariant(format!(
            "{} certified pairs but {} vertices in their hull",
            found.len(),
            sum.vertices().len()
        )));
    }

    let mut pairs = Vec::with_capacity(found.len());
    let mut vertex_tags = Vec::with_capacity(found.len());
    for (k, (_, i, j)) in found.iter().enumerate() {
        // `found` and the vertex list share the lexicographic order.
        pairs.push(VertexPair {
            vertex: k,
            left: *i,
            right: *j,
        });
        vertex_tags.push(p1.vertices()[*i].tag.join(p2.vertices()[*j].tag));
    }
    sum.set_vertex_tags(&vertex_tags);

    let fan1 = polyhedron_fan(p1);
    let fan2 = polyhedron_fan(p2);
    let codim = n - sum.dimension();
    let mut facets = Vec::new();
    let mut diagnostics = Vec::new();
    let mut labels = Vec::new();
    for (k, h) in sum.halfspaces().iter().enumerate() {
        let u = h.normal().to_vec();
        let (tag, transcript) = if sum.is_equation(k) {
            let neg: Vec<Scalar> = u.iter().map(|q| -q.clone()).collect();
            let pinned = [&fan1, &fan2].iter().all(|fan| {
                fan.smallest_cone(&u).is_some_and(|c| c.contains(&neg))
            });
            let tag = if pinned { Tag::NonCap } else { Tag::Cap };
            (tag, format!("equation pinned by both polyhedra={pinned}"))
        } else {
            let test = refinement_test(&u, &fan1, &fan2);
            let ray = test.intersection_dim == Some(1 + codim);
            let tag = if ray { Tag::NonCap } else { Tag::Cap };
            (tag, test.to_string())
        };
        let face = sum.facet_vertices(k);
        let (f1, f2) = decompose_face(p1, p2, &sum, &face);
        let decomposition_tag = p1.face_tag(&f1.vertices).join(p2.face_tag(&f2.vertices));
        if decomposition_tag != tag {
            diagnostics.push(format!(
                "facet {k} ({h}): fan test gives {tag}, face decomposition gives {decomposition_tag}"
            ));
        }
        labels.push((tag, format!("sum[{}|{}]", side_label(p1, &f1), side_label(p2, &f2))));
        facets.push(FacetVerdict {
            halfspace: k,
            normal: u,
            tag,
            transcript,
            decomposition_tag,
        });
    }
    sum.set_halfspace_labels(labels);
    Ok((
        sum,
        SumCertificate {
            pairs,
            facets,
            diagnostics,
        },
    ))
}

fn side_label(p: &Polytope, f: &Face) -> String {
    // Provenance of the operand facet that the face lies on, when there is one.
    if f.dim + 1 == p.dimension() {
        let first = &p.vertices()[f.vertices[0]];
        for &i in &first.tight {
            if f.vertices.iter().all(|&v| p.vertices()[v].tight.contains(&i)) && !p.is_equation(i) {
                return p.halfspaces()[i].provenance.clone();
            }
        }
    }
    format!("{}-face", f.dim)
}

/// Splits a face of `sum = p1 ⊕ p2` (given by its vertex indices) into the
/// unique pair of operand faces adding up to it.
pub fn decompose_face(p1: &Polytope, p2: &Polytope, sum: &Polytope, face: &[usize]) -> (Face, Face) {
    let n = sum.ambient_dim();
    // Sum of the normals tight on the whole face: a direction in the relative
    // interior of its normal cone.
    let mut u = vec![Scalar::from_integer(0.into()); n];
    for (i, h) in sum.halfspaces().iter().enumerate() {
        if face.iter().all(|&v| sum.vertices()[v].tight.contains(&i)) {
            u = add(&u, h.normal());
        }
    }
    (face_of(p1, &u), face_of(p2, &u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfspace::HalfSpace;
    use crate::polytope::h_to_v;
    use crate::scalar::int;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn strip() -> Polytope {
        h_to_v(
            &[
                HalfSpace::noncap(q(&[0, 1]), int(1), "e23").unwrap(),
                HalfSpace::noncap(q(&[0, -1]), int(1), "e21").unwrap(),
                HalfSpace::cap(q(&[1, 0]), int(3), "e22").unwrap(),
                HalfSpace::cap(q(&[-1, 0]), int(3), "e24").unwrap(),
            ],
            2,
        )
        .unwrap()
    }

    #[test]
    fn origin_is_neutral() {
        let p = strip();
        let origin = v_to_h(&[q(&[0, 0])], 2).unwrap();
        let (s, cert) = minkowski_sum(&p, &origin).unwrap();
        assert_eq!(s.vertex_coords(), p.vertex_coords());
        let mut a: Vec<_> = s.halfspaces().iter().map(|h| (h.key(), h.tag)).collect();
        let mut b: Vec<_> = p.halfspaces().iter().map(|h| (h.key(), h.tag)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(cert.diagnostics.is_empty());
        let tags: Vec<Tag> = s.vertices().iter().map(|v| v.tag).collect();
        assert!(tags.iter().all(|t| *t == Tag::Cap));
    }

    #[test]
    fn doubling_is_homothety() {
        let p = strip();
        let (s, _) = minkowski_sum(&p, &p).unwrap();
        let doubled: Vec<Vec<Scalar>> = p
            .vertex_coords()
            .iter()
            .map(|v| v.iter().map(|x| x * int(2)).collect())
            .collect();
        assert_eq!(s.vertex_coords(), doubled);
        assert_eq!(s.noncap_facets().len(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        let a = v_to_h(&[q(&[0, 0])], 2).unwrap();
        let b = v_to_h(&[q(&[0])], 1).unwrap();
        assert!(matches!(minkowski_sum(&a, &b), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn vertex_decomposition_through_origin() {
        let p = strip();
        let origin = v_to_h(&[q(&[0, 0])], 2).unwrap();
        let (s, _) = minkowski_sum(&p, &origin).unwrap();
        let (f1, f2) = decompose_face(&p, &origin, &s, &[0]);
        assert_eq!(f1.vertices, vec![0]);
        assert_eq!(f2.vertices, vec![0]);
    }
}
