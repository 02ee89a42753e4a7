#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use polytol::{h_to_v, v_to_h, HalfSpace, Polytope, Scalar, Tag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn qr(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}

pub fn qv(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Denominators stay within 12 so that the integer oracles can clear them.
pub fn random_scalar(r: &mut impl Rng, span: i64) -> Scalar {
    let den = [1, 2, 3, 4, 6, 12][r.gen_range(0..6)];
    qr(r.gen_range(-span * den..=span * den), den)
}

pub fn random_point(r: &mut impl Rng, dim: usize, span: i64) -> Vec<Scalar> {
    (0..dim).map(|_| random_scalar(r, span)).collect()
}

/// Full-dimensional random polytope with at most `max_vertices` vertices
/// and randomly tagged half-spaces.
pub fn random_polytope(r: &mut impl Rng, dim: usize, max_vertices: usize) -> Polytope {
    loop {
        let count = r.gen_range(dim + 1..=max_vertices.max(dim + 1) + 3);
        let pts: Vec<Vec<Scalar>> = (0..count).map(|_| random_point(r, dim, 5)).collect();
        let Ok(hull) = v_to_h(&pts, dim) else { continue };
        if hull.dimension() != dim || hull.vertices().len() > max_vertices {
            continue;
        }
        let rows: Vec<HalfSpace> = hull
            .halfspaces()
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let tag = if r.gen_bool(0.35) { Tag::Cap } else { Tag::NonCap };
                h.clone().with_tag(tag).with_provenance(format!("f{i}"))
            })
            .collect();
        return h_to_v(&rows, dim).expect("hull rows describe a polytope");
    }
}

/// Random bounded H-system with the origin in its interior.
pub fn random_bounded_system(r: &mut impl Rng, dim: usize) -> Vec<HalfSpace> {
    let mut rows = Vec::new();
    let target = r.gen_range(dim + 1..=dim + 7);
    loop {
        let a: Vec<Scalar> = (0..dim).map(|_| q(r.gen_range(-4..=4))).collect();
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        let b = qr(r.gen_range(1..=24), r.gen_range(1..=3));
        rows.push(HalfSpace::noncap(a, b, format!("r{}", rows.len())).unwrap());
        if rows.len() >= target && h_to_v(&rows, dim).is_ok() {
            return rows;
        }
    }
}

pub fn keys(hs: &[HalfSpace]) -> BTreeSet<(Vec<Scalar>, Scalar)> {
    hs.iter().map(HalfSpace::key).collect()
}

pub fn vertex_set(p: &Polytope) -> BTreeSet<Vec<Scalar>> {
    p.vertex_coords().into_iter().collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn support_oracle(points: &[Vec<Scalar>], u: &[Scalar]) -> Scalar {
    points.iter().map(|p| dot(p, u)).max().unwrap()
}

pub fn random_direction(r: &mut impl Rng, dim: usize) -> Vec<Scalar> {
    loop {
        let u: Vec<Scalar> = (0..dim).map(|_| qr(r.gen_range(-9..=9), r.gen_range(1..=4))).collect();
        if u.iter().any(|x| !x.is_zero()) {
            return u;
        }
    }
}

// ---------------------------------------------------------------------------
// Rational Gaussian elimination, kept separate from the crate's linear algebra.

pub fn solve_square(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Scalar::one() / a[col][col].clone();
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let v = &a[col][k] * &f;
                    a[r][k] -= v;
                }
                let v = &b[col] * &f;
                b[r] -= v;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Vertices of `{x : a x <= b}` found by solving every `dim`-subset of rows
/// and keeping the feasible solutions.
pub fn brute_force_vertices(rows: &[HalfSpace], dim: usize) -> BTreeSet<Vec<Scalar>> {
    let mut out = BTreeSet::new();
    for subset in combinations(rows.len(), dim) {
        let a: Vec<Vec<Scalar>> = subset.iter().map(|&i| rows[i].normal().to_vec()).collect();
        let b: Vec<Scalar> = subset.iter().map(|&i| rows[i].offset().clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if rows.iter().all(|h| dot(h.normal(), &x) <= *h.offset()) {
                out.insert(x);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Integer hull oracle: a point is extreme when the supporting hyperplanes
// spanned by point tuples through it have full-rank normals.

fn to_i128(points: &[Vec<Scalar>]) -> (Vec<Vec<i128>>, BigInt) {
    let mut den = BigInt::one();
    for p in points {
        for x in p {
            den = num_integer::lcm(den, x.denom().clone());
        }
    }
    let scaled = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| {
                    let v = x.numer() * (&den / x.denom());
                    i128::try_from(v).expect("oracle coordinates fit in i128")
                })
                .collect()
        })
        .collect();
    (scaled, den)
}

fn sub_i(a: &[i128], b: &[i128]) -> Vec<i128> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot_i(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normal_through(pts: &[&[i128]]) -> Option<Vec<i128>> {
    match pts.len() {
        2 => {
            let d = sub_i(pts[1], pts[0]);
            let n = vec![-d[1], d[0]];
            (n != [0, 0]).then_some(n)
        }
        3 => {
            let a = sub_i(pts[1], pts[0]);
            let b = sub_i(pts[2], pts[0]);
            let n = vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ];
            (n != [0, 0, 0]).then_some(n)
        }
        _ => unreachable!("oracle handles dimensions 2 and 3"),
    }
}

fn rank_i(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Scalar::from_integer(BigInt::from(x))).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[rank][c];
                for k in 0..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Vertices of the convex hull of a full-dimensional point set in R² or R³.
pub fn hull_vertices_oracle(points: &[Vec<Scalar>]) -> BTreeSet<Vec<Scalar>> {
    let mut uniq: Vec<Vec<Scalar>> = points.to_vec();
    uniq.sort();
    uniq.dedup();
    let dim = uniq[0].len();
    let (ints, _) = to_i128(&uniq);
    let mut supports: Vec<Vec<Vec<i128>>> = vec![Vec::new(); ints.len()];
    for subset in combinations(ints.len(), dim) {
        let pts: Vec<&[i128]> = subset.iter().map(|&i| ints[i].as_slice()).collect();
        let Some(n) = normal_through(&pts) else { continue };
        let level = dot_i(&n, pts[0]);
        let values: Vec<i128> = ints.iter().map(|p| dot_i(&n, p) - level).collect();
        let above = values.iter().any(|&v| v > 0);
        let below = values.iter().any(|&v| v < 0);
        if above && below {
            continue;
        }
        for (i, v) in values.iter().enumerate() {
            if *v == 0 {
                supports[i].push(n.clone());
            }
        }
    }
    uniq.iter()
        .zip(&supports)
        .filter(|(_, s)| rank_i(s) == dim)
        .map(|(p, _)| p.clone())
        .collect()
}

pub fn pairwise_sums(a: &Polytope, b: &Polytope) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for u in a.vertices() {
        for v in b.vertices() {
            out.push(u.coords.iter().zip(&v.coords).map(|(x, y)| x + y).collect());
        }
    }
    out
}

pub fn is_nonneg(x: &Scalar) -> bool {
    !x.is_negative()
}

/// A polyhedron of random NonCap rows closed by a Cap box that lies beyond
/// every vertex of the polyhedron, as the constraint builder produces.
pub fn random_capped_polytope(r: &mut impl Rng, dim: usize) -> Polytope {
    let c = q(60);
    loop {
        let count = r.gen_range(1..=dim + 3);
        let mut rows = Vec::new();
        while rows.len() < count {
            let a: Vec<Scalar> = (0..dim).map(|_| q(r.gen_range(-4..=4))).collect();
            if a.iter().all(|x| x.is_zero()) {
                continue;
            }
            let b = qr(r.gen_range(1..=30), r.gen_range(1..=3));
            rows.push(HalfSpace::noncap(a, b, format!("n{}", rows.len())).unwrap());
        }
        let inside = brute_force_vertices(&rows, dim)
            .iter()
            .all(|v| v.iter().all(|x| x.abs() < c));
        if !inside {
            continue;
        }
        for k in 0..dim {
            let mut a = vec![q(0); dim];
            a[k] = q(1);
            rows.push(HalfSpace::cap(a.clone(), c.clone(), format!("cap{k}+")).unwrap());
            a[k] = q(-1);
            rows.push(HalfSpace::cap(a, c.clone(), format!("cap{k}-")).unwrap());
        }
        if let Ok(p) = h_to_v(&rows, dim) {
            return p;
        }
    }
}
