mod common;

use common::*;
use polytol::fan::{dual_cone, polyhedron_fan, polytope_fan};
use polytol::{face_of, h_to_v, includes, includes_polytope, remove_redundant, support_value, v_to_h, HalfSpace, Tag};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn h_to_v_matches_tight_subset_enumeration() {
    let mut r = rng(11);
    for case in 0..150 {
        let dim = [2, 3, 4][case % 3];
        let rows = random_bounded_system(&mut r, dim);
        let p = h_to_v(&rows, dim).unwrap();
        assert_eq!(vertex_set(&p), brute_force_vertices(&rows, dim), "case {case}");
        p.check_invariants().unwrap();
    }
}

#[test]
fn round_trip_is_canonical() {
    let mut r = rng(12);
    for case in 0..200 {
        let dim = [2, 3, 4][case % 3];
        let rows = random_bounded_system(&mut r, dim);
        let p = h_to_v(&rows, dim).unwrap();
        let back = v_to_h(&p.vertex_coords(), dim).unwrap();
        assert_eq!(keys(p.halfspaces()), keys(back.halfspaces()), "case {case}");
        assert_eq!(vertex_set(&p), vertex_set(&back));
    }
}

#[test]
fn row_order_does_not_matter() {
    let mut r = rng(13);
    for _ in 0..60 {
        let dim = r.gen_range(2..=4);
        let mut rows = random_bounded_system(&mut r, dim);
        let p = h_to_v(&rows, dim).unwrap();
        rows.shuffle(&mut r);
        let q = h_to_v(&rows, dim).unwrap();
        assert_eq!(p, q);
    }
}

#[test]
fn redundant_rows_are_dropped() {
    let mut r = rng(14);
    for _ in 0..60 {
        let dim = r.gen_range(2..=3);
        let mut rows = random_bounded_system(&mut r, dim);
        let p = h_to_v(&rows, dim).unwrap();
        // loosened copies of existing rows never support a facet
        let extra: Vec<HalfSpace> = rows
            .iter()
            .map(|h| HalfSpace::noncap(h.normal().to_vec(), h.offset() + q(1), "loose").unwrap())
            .collect();
        rows.extend(extra);
        let kept = remove_redundant(&rows, dim).unwrap();
        assert_eq!(keys(&kept), keys(p.halfspaces()));
        assert!(kept.iter().all(|h| h.provenance != "loose"));
    }
}

#[test]
fn includes_agrees_with_vertex_sampling() {
    let mut r = rng(15);
    let mut seen = [0usize; 2];
    for _ in 0..100 {
        let dim = r.gen_range(2..=3);
        let p = random_polytope(&mut r, dim, 8);
        let outer = random_polytope(&mut r, dim, 8);
        let got = includes(&p, outer.halfspaces());
        let all_in = p
            .vertices()
            .iter()
            .all(|v| outer.halfspaces().iter().all(|h| dot(h.normal(), &v.coords) <= *h.offset()));
        assert_eq!(got, all_in);
        seen[got as usize] += 1;
        if got {
            // convex combinations of the vertices stay inside
            for _ in 0..20 {
                let w: Vec<i64> = p.vertices().iter().map(|_| r.gen_range(0..5)).collect();
                let total: i64 = w.iter().sum::<i64>().max(1);
                let mut x = vec![q(0); dim];
                for (v, wi) in p.vertices().iter().zip(&w) {
                    for k in 0..dim {
                        x[k] += &v.coords[k] * qr(*wi, total);
                    }
                }
                if w.iter().sum::<i64>() > 0 {
                    assert!(outer.halfspaces().iter().all(|h| h.contains(&x)));
                }
            }
        }
    }
    assert!(seen[0] > 0);
    // a polytope always includes itself and any shrunken copy
    let p = random_polytope(&mut r, 2, 6);
    assert!(includes_polytope(&p, &p));
}

#[test]
fn plane_fixture_matches_brute_force() {
    use polytol::mechanism::build_operand_document;
    let doc: serde_json::Value = serde_json::from_str(&fixture("plane_square.json")).unwrap();
    let (p, id) = build_operand_document(&doc).unwrap();
    assert_eq!(id, "1,1/1,0");
    assert_eq!(vertex_set(&p), brute_force_vertices(p.halfspaces(), 6));
    assert_eq!(p.vertices().len(), 6 * 8);
    // top facet in t_z: the four vertices (0, 0, ±10, ±10, ±10, 1/10)
    let u = qv(&[0, 0, 0, 0, 0, 1]);
    assert_eq!(support_value(&p, &u), qr(1, 10));
    let face = face_of(&p, &u);
    assert_eq!(face.vertices.len(), 8);
    assert_eq!(face.dim, 3);
}

#[test]
fn dual_cones_partition_directions() {
    let mut r = rng(16);
    for _ in 0..25 {
        let dim = r.gen_range(2..=3);
        let p = random_polytope(&mut r, dim, 7);
        let fan = polytope_fan(&p);
        assert!(fan.is_complete());
        for _ in 0..40 {
            let u = random_direction(&mut r, dim);
            let face = face_of(&p, &u);
            // u lies in the dual cone of exactly the maximizing vertices
            for v in 0..p.vertices().len() {
                let cone = dual_cone(&p, v).unwrap();
                assert_eq!(cone.contains(&u), face.vertices.contains(&v));
            }
        }
        // the fan of the NonCap polyhedron never covers more than the full fan
        let poly = polyhedron_fan(&p);
        for _ in 0..20 {
            let u = random_direction(&mut r, dim);
            if poly.covers(&u) {
                assert!(fan.covers(&u));
            }
        }
    }
}

#[test]
fn vertex_tags_follow_the_noncap_polyhedron() {
    let mut r = rng(17);
    for _ in 0..40 {
        let dim = r.gen_range(2..=3);
        let p = random_polytope(&mut r, dim, 8);
        let noncap = p.underlying_polyhedron();
        for v in p.vertices() {
            // the tight NonCap rows, read as equations, pin down a single point
            let mut rows: Vec<HalfSpace> = noncap.iter().filter(|h| h.is_tight(&v.coords)).cloned().collect();
            let negated: Vec<HalfSpace> = rows
                .iter()
                .map(|h| {
                    let a = h.normal().iter().map(|x| -x).collect();
                    HalfSpace::noncap(a, -h.offset(), "eq").unwrap()
                })
                .collect();
            rows.extend(negated);
            let unique = h_to_v(&rows, dim).map(|x| x.vertices().len() == 1).unwrap_or(false);
            assert_eq!(v.tag == Tag::NonCap, unique);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn box_round_trip(lo in prop::collection::vec(-20i64..0, 2..=4), hi in prop::collection::vec(1i64..20, 4)) {
        let dim = lo.len();
        let mut rows = Vec::new();
        for k in 0..dim {
            let mut a = vec![q(0); dim];
            a[k] = q(1);
            rows.push(HalfSpace::noncap(a.clone(), q(hi[k]), "hi").unwrap());
            a[k] = q(-1);
            rows.push(HalfSpace::cap(a, q(-lo[k]), "lo").unwrap());
        }
        let p = h_to_v(&rows, dim).unwrap();
        prop_assert_eq!(p.vertices().len(), 1 << dim);
        let back = v_to_h(&p.vertex_coords(), dim).unwrap();
        prop_assert_eq!(keys(p.halfspaces()), keys(back.halfspaces()));
        // exactly one vertex touches no Cap row
        prop_assert_eq!(p.vertices().iter().filter(|v| v.tag == Tag::NonCap).count(), 1);
    }

    #[test]
    fn scaling_rows_keeps_the_polytope(seed in any::<u64>(), factor in 1i64..50) {
        let mut r = rng(seed);
        let dim = r.gen_range(2..=3);
        let rows = random_bounded_system(&mut r, dim);
        let scaled: Vec<HalfSpace> = rows
            .iter()
            .map(|h| {
                let a = h.normal().iter().map(|x| x * qr(factor, 7)).collect();
                HalfSpace::noncap(a, h.offset() * qr(factor, 7), h.provenance.clone()).unwrap()
            })
            .collect();
        prop_assert_eq!(h_to_v(&rows, dim).unwrap(), h_to_v(&scaled, dim).unwrap());
    }
}
