//! Double description of polyhedral cones over the integers.
//!
//! [`cone_generators`] turns an H-form `{y : row·y >= 0 for every row}` into
//! extreme rays plus a lineality basis, processing one constraint at a time
//! (Motzkin's method). Adjacency of rays is decided combinatorially from their
//! zero sets, which is exact because the ray set stays minimal after each step.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{dot_int, primitive_int};

#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

impl ConeGenerators {
    /// Dimension of the cone (rank of rays together with the lineality basis).
    pub fn dim(&self) -> usize {
        let all: Vec<Vec<BigInt>> = self
            .rays
            .iter()
            .chain(self.lineality.iter())
            .cloned()
            .collect();
        crate::linalg::rank_int(&all)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: FixedBitSet,
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    primitive_int(x.iter().zip(y).map(|(xi, yi)| a * xi - b * yi).collect())
}

/// Generators of `{y in Z^dim : rows[k]·y >= 0 for all k}`.
pub fn cone_generators(rows: &[Vec<BigInt>], dim: usize) -> ConeGenerators {
    let m = rows.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, h) in rows.iter().enumerate() {
        debug_assert_eq!(h.len(), dim);
        if let Some(pos) = lineality.iter().position(|l| !dot_int(h, l).is_zero()) {
            let mut l = lineality.swap_remove(pos);
            let mut hl = dot_int(h, &l);
            if hl.is_negative() {
                l.iter_mut().for_each(|x| *x = -&*x);
                hl = -hl;
            }
            for other in lineality.iter_mut() {
                let ho = dot_int(h, other);
                if !ho.is_zero() {
                    *other = combine(&hl, other, &ho, &l);
                }
            }
            for r in rays.iter_mut() {
                let hr = dot_int(h, &r.v);
                if !hr.is_zero() {
                    r.v = combine(&hl, &r.v, &hr, &l);
                }
                r.zeros.insert(k);
            }
            let mut zeros = FixedBitSet::with_capacity(m);
            zeros.insert_range(..k);
            rays.push(Ray { v: l, zeros });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot_int(h, &r.v)).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        // Rays must share at least (pointed dimension - 2) tight constraints to
        // be adjacent.
        let pointed_dim = dim - lineality.len();
        let min_common = pointed_dim.saturating_sub(2);
        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) < min_common {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                // values[p] > 0 > values[q]: positive combination with h·v = 0.
                let v = combine(&values[p], &rays[q].v, &values[q], &rays[p].v);
                common.insert(k);
                created.push(Ray { v, zeros: common });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.insert(k);
            }
            kept.push(r);
        }
        kept.extend(created);
        rays = kept;
    }

    ConeGenerators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_has_unit_rays() {
        let rows = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let g = cone_generators(&rows, 3);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
    }

    #[test]
    fn half_space_keeps_lineality() {
        let g = cone_generators(&[v(&[1, 1])], 2);
        assert_eq!(g.rays.len(), 1);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.dim(), 2);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // Cone over the square [-1,1]^2 at height 1.
        let rows = vec![
            v(&[1, 1, 0]),
            v(&[1, -1, 0]),
            v(&[1, 0, 1]),
            v(&[1, 0, -1]),
        ];
        let g = cone_generators(&rows, 3);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[0], BigInt::from(1));
            assert_eq!(r[1].abs(), BigInt::from(1));
            assert_eq!(r[2].abs(), BigInt::from(1));
        }
    }

    #[test]
    fn opposite_constraints_leave_the_origin() {
        let rows = vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])];
        let g = cone_generators(&rows, 2);
        assert!(g.rays.is_empty());
        assert!(g.lineality.is_empty());
        assert_eq!(g.dim(), 0);
    }
}
