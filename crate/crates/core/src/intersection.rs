//! Cap-aware intersection.
//!
//! Operand caps are discarded. The NonCap half-spaces of every operand are
//! intersected with an inflated bounding box of all operand vertices, and the
//! surviving box facets become the new caps.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::halfspace::{HalfSpace, Tag};
use crate::polytope::{bounding_box, h_to_v, tight_box, BoundingBox, Polytope};
use crate::scalar::Scalar;

/// Margin between the operands' vertices and the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Margin {
    /// A tenth of the longest box edge, and at least one unit.
    Auto,
    Fixed(Scalar),
}

impl Margin {
    pub fn resolve(&self, points: &[Vec<Scalar>]) -> Result<Scalar> {
        match self {
            Margin::Fixed(d) => Ok(d.clone()),
            Margin::Auto => {
                let (lower, upper) = tight_box(points)?;
                let longest = lower
                    .iter()
                    .zip(&upper)
                    .map(|(l, u)| u - l)
                    .max()
                    .unwrap_or_else(Scalar::zero);
                let tenth = longest / Scalar::from_integer(10.into());
                Ok(tenth.max(Scalar::one()))
            }
        }
    }

    /// Multiplies a fixed margin; `Auto` stays automatic.
    pub fn scaled(&self, factor: &Scalar) -> Margin {
        match self {
            Margin::Auto => Margin::Auto,
            Margin::Fixed(d) => Margin::Fixed(d * factor),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport {
    pub result: Polytope,
    pub bounding_box: BoundingBox,
    /// Indices of result half-spaces that come from the box.
    pub box_facets: Vec<usize>,
    /// True when intersecting all tagged half-spaces, caps included, gives a
    /// different vertex set.
    pub naive_differs: bool,
}

/// Intersection of the NonCap parts of `operands`, capped by a shared box.
pub fn capped_intersection(operands: &[Polytope], margin: &Margin) -> Result<IntersectionReport> {
    let first = operands
        .first()
        .ok_or_else(|| Error::Unsupported("intersection needs at least one operand".into()))?;
    let n = first.ambient_dim();
    for p in operands {
        if p.ambient_dim() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: p.ambient_dim(),
            });
        }
    }
    let points: Vec<Vec<Scalar>> = operands.iter().flat_map(|p| p.vertex_coords()).collect();
    let delta = margin.resolve(&points)?;
    let bbox = bounding_box(&points, &delta)?;
    let noncap: Vec<HalfSpace> = operands
        .iter()
        .flat_map(|p| p.underlying_polyhedron())
        .collect();
    let box_rows = bbox.halfspaces();
    for b in &box_rows {
        if let Some(h) = noncap.iter().find(|h| h.normal() == b.normal() && h.offset() == b.offset()) {
            return Err(Error::Invariant(format!(
                "box facet {b} coincides with the non-cap half-space {h}"
            )));
        }
    }
    let mut rows = noncap;
    rows.extend(box_rows);
    let result = h_to_v(&rows, n)?;
    let box_facets: Vec<usize> = result
        .halfspaces()
        .iter()
        .enumerate()
        .filter(|(_, h)| h.tag.is_cap())
        .map(|(i, _)| i)
        .collect();
    let mut result = result;
    let tags: Vec<Tag> = result
        .vertices()
        .iter()
        .map(|v| {
            if v.tight.iter().any(|i| box_facets.contains(i)) {
                Tag::Cap
            } else {
                v.tag
            }
        })
        .collect();
    result.set_vertex_tags(&tags);
    let naive_differs = match naive_tagged_intersection(operands) {
        Ok(naive) => naive.vertex_coords() != result.vertex_coords(),
        Err(_) => true,
    };
    Ok(IntersectionReport {
        result,
        bounding_box: bbox,
        box_facets,
        naive_differs,
    })
}

/// Intersection of every half-space of every operand, tags kept as they are.
pub fn naive_tagged_intersection(operands: &[Polytope]) -> Result<Polytope> {
    let first = operands
        .first()
        .ok_or_else(|| Error::Unsupported("intersection needs at least one operand".into()))?;
    let rows: Vec<HalfSpace> = operands.iter().flat_map(|p| p.halfspaces().to_vec()).collect();
    h_to_v(&rows, first.ambient_dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn q(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn rect(x: (i64, Tag), y: (i64, Tag)) -> Polytope {
        let rows = vec![
            HalfSpace::new(q(&[1, 0]), int(x.0), x.1, "x+").unwrap(),
            HalfSpace::new(q(&[-1, 0]), int(x.0), x.1, "x-").unwrap(),
            HalfSpace::new(q(&[0, 1]), int(y.0), y.1, "y+").unwrap(),
            HalfSpace::new(q(&[0, -1]), int(y.0), y.1, "y-").unwrap(),
        ];
        h_to_v(&rows, 2).unwrap()
    }

    #[test]
    fn crossing_strips_lose_their_caps() {
        let p1 = rect((1, Tag::NonCap), (10, Tag::Cap));
        let p2 = rect((10, Tag::Cap), (2, Tag::NonCap));
        let r = capped_intersection(&[p1, p2], &Margin::Auto).unwrap();
        assert!(r.box_facets.is_empty());
        assert_eq!(r.result.count_tag(Tag::Cap), 0);
        assert_eq!(r.result.vertex_coords(), vec![q(&[-1, -2]), q(&[-1, 2]), q(&[1, -2]), q(&[1, 2])]);
    }

    #[test]
    fn parallel_strips_take_box_caps() {
        let p1 = rect((1, Tag::NonCap), (3, Tag::Cap));
        let p2 = rect((2, Tag::NonCap), (5, Tag::Cap));
        let r = capped_intersection(&[p1.clone(), p2.clone()], &Margin::Fixed(int(1))).unwrap();
        assert_eq!(r.box_facets.len(), 2);
        assert_eq!(r.result.vertex_coords(), vec![q(&[-1, -6]), q(&[-1, 6]), q(&[1, -6]), q(&[1, 6])]);
        assert!(r.naive_differs);
        let naive = naive_tagged_intersection(&[p1, p2]).unwrap();
        assert_eq!(naive.vertex_coords()[1], q(&[-1, 3]));
    }

    #[test]
    fn disjoint_operands_are_empty() {
        let a = h_to_v(
            &[
                HalfSpace::noncap(q(&[1]), int(0), "a").unwrap(),
                HalfSpace::noncap(q(&[-1]), int(1), "a").unwrap(),
            ],
            1,
        )
        .unwrap();
        let b = h_to_v(
            &[
                HalfSpace::noncap(q(&[1]), int(3), "b").unwrap(),
                HalfSpace::noncap(q(&[-1]), int(-2), "b").unwrap(),
            ],
            1,
        )
        .unwrap();
        assert_eq!(capped_intersection(&[a.clone(), b.clone()], &Margin::Auto).unwrap_err(), Error::EmptyPolytope);
        assert_eq!(naive_tagged_intersection(&[a, b]).unwrap_err(), Error::EmptyPolytope);
    }

    #[test]
    fn zero_margin_is_rejected() {
        let p = rect((1, Tag::NonCap), (1, Tag::NonCap));
        assert_eq!(
            capped_intersection(&[p.clone(), p], &Margin::Fixed(int(0))).unwrap_err(),
            Error::NonPositiveMargin
        );
    }

    #[test]
    fn auto_margin() {
        assert_eq!(Margin::Auto.resolve(&[q(&[0, 0]), q(&[40, 2])]).unwrap(), int(4));
        assert_eq!(Margin::Auto.resolve(&[q(&[0, 0]), q(&[2, 2])]).unwrap(), int(1));
    }
}
