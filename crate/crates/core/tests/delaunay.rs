mod common;

use std::collections::BTreeSet;

use boundary_sewing::delaunay::{Triangulation, Violation, NO_NEIGHBOR};
use boundary_sewing::error::TriangulationError;
use boundary_sewing::geom::{Face, Point2, Simplex2};
use boundary_sewing::rng;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

fn random_points(n: usize, seed: u64) -> Vec<Point2> {
    let mut g = rng::stream(seed, 0);
    (0..n).map(|_| p(g.gen(), g.gen())).collect()
}

/// Triangles as sets of coordinates, independent of point indexing.
fn geometric_triangles(tri: &Triangulation) -> BTreeSet<[(u64, u64); 3]> {
    let pts = tri.points();
    tri.triangles()
        .iter()
        .map(|s| {
            let mut v = s.vertices.map(|i| (pts[i as usize].x.to_bits(), pts[i as usize].y.to_bits()));
            v.sort_unstable();
            v
        })
        .collect()
}

fn check_complete(tri: &Triangulation) {
    let n = tri.point_count();
    let b = common::hull_vertex_count(tri.points());
    assert_eq!(tri.len(), 2 * n - b - 2, "Euler count");
    assert_eq!(tri.hull_size(), b);
    assert!(tri.validate().is_empty(), "{:?}", tri.validate());
}

#[test]
fn three_points_give_one_triangle() {
    let tri = Triangulation::build(&[p(0.0, 0.0), p(1.0, 0.0), p(0.3, 0.9)]).unwrap();
    assert_eq!(tri.len(), 1);
    assert_eq!(tri.canonical_triangles(), vec![[0, 1, 2]]);
    assert_eq!(tri.adjacency()[0], [NO_NEIGHBOR; 3]);
}

#[test]
fn unit_square_gives_two_triangles_deterministically() {
    let square = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
    let tri = Triangulation::build(&square).unwrap();
    assert_eq!(tri.len(), 2);
    let shared: Vec<Face> = tri.faces_of(0).into_iter().filter(|f| tri.faces_of(1).contains(f)).collect();
    assert_eq!(shared.len(), 1);
    let diagonal = shared[0];
    assert!(diagonal == Face::new(0, 2) || diagonal == Face::new(1, 3));
    for _ in 0..5 {
        assert_eq!(Triangulation::build(&square).unwrap().canonical_triangles(), tri.canonical_triangles());
    }
    check_complete(&tri);
}

#[test]
fn faces_of_a_triangle() {
    let s = Simplex2 { vertices: [0, 1, 2] };
    let faces: BTreeSet<Face> = s.faces().into_iter().collect();
    assert_eq!(faces, BTreeSet::from([Face::new(0, 1), Face::new(0, 2), Face::new(1, 2)]));
}

#[test]
fn degenerate_inputs_are_rejected() {
    assert!(matches!(Triangulation::build(&[p(0.0, 0.0), p(1.0, 0.0)]), Err(TriangulationError::Degenerate(_))));
    let line: Vec<Point2> = (0..10).map(|i| p(i as f64, 2.0 * i as f64)).collect();
    assert!(matches!(Triangulation::build(&line), Err(TriangulationError::Degenerate(_))));
    assert_eq!(
        Triangulation::build(&[p(0.0, 0.0), p(1.0, 0.0), p(0.5, 1.0), p(1.0, 0.0)]).unwrap_err(),
        TriangulationError::DuplicatePoint { first: 1, second: 3 }
    );
    assert_eq!(
        Triangulation::build(&[p(0.0, 0.0), p(f64::NAN, 0.0), p(0.5, 1.0)]).unwrap_err(),
        TriangulationError::NonFinite { index: 1 }
    );
}

#[test]
fn flipped_diagonal_reports_both_triangles() {
    // Kite whose Delaunay diagonal is B–D; hand-build the A–C diagonal.
    let pts = vec![p(0.0, 0.0), p(2.0, -1.0), p(4.0, 0.0), p(2.0, 1.0)];
    let good = Triangulation::build(&pts).unwrap();
    assert!(good.validate().is_empty());
    assert!(good.faces_of(0).contains(&Face::new(1, 3)));

    let triangles = vec![Simplex2 { vertices: [0, 1, 2] }, Simplex2 { vertices: [0, 2, 3] }];
    let adjacency = vec![[NO_NEIGHBOR, 1, NO_NEIGHBOR], [NO_NEIGHBOR, NO_NEIGHBOR, 0]];
    let bad = Triangulation::from_parts(pts, triangles, adjacency);
    let mut flagged: Vec<usize> = bad
        .validate()
        .into_iter()
        .map(|v| match v {
            Violation::NotDelaunay { triangle, .. } => triangle,
            other => panic!("unexpected violation {other:?}"),
        })
        .collect();
    flagged.sort_unstable();
    flagged.dedup();
    assert_eq!(flagged, vec![0, 1]);
}

#[test]
fn twenty_seeded_fixtures() {
    for f in 0..20u64 {
        let n = [10, 50, 200][f as usize % 3];
        let tri = Triangulation::build(&random_points(n, 100 + f)).unwrap();
        assert_eq!(common::brute_force_empty_circle(&tri), None, "fixture {f}");
        check_complete(&tri);
    }
}

#[test]
fn large_sample_validates_and_passes_spot_checks() {
    let pts = random_points(10_000, 7);
    let tri = Triangulation::build(&pts).unwrap();
    check_complete(&tri);
    let mut g = rng::stream(7, 1);
    for _ in 0..1000 {
        let t = g.gen_range(0..tri.len());
        let k = g.gen_range(0..pts.len());
        let s = tri.triangles()[t];
        if s.vertices.contains(&(k as u32)) {
            continue;
        }
        let [a, b, c] = s.vertices.map(|i| pts[i as usize]);
        assert!(common::exact_incircle(a, b, c, pts[k]) <= 0);
    }
}

#[test]
fn integer_grid_is_complete() {
    // Every unit cell is cocircular: the hardest tie-breaking case.
    let pts: Vec<Point2> = (0..20).flat_map(|i| (0..20).map(move |j| p(i as f64, j as f64))).collect();
    let tri = Triangulation::build(&pts).unwrap();
    assert_eq!(tri.len(), 2 * 19 * 19);
    check_complete(&tri);
    assert_eq!(common::brute_force_empty_circle(&tri), None);
}

#[test]
fn nearly_collinear_hull_chain() {
    // Points on a shallow parabola plus one far apex: many hull triangles are slivers.
    let mut pts: Vec<Point2> = (0..60).map(|i| {
        let x = i as f64 / 59.0;
        p(x, 1e-9 * x * (1.0 - x))
    }).collect();
    pts.push(p(0.5, -1.0));
    let tri = Triangulation::build(&pts).unwrap();
    check_complete(&tri);
    assert_eq!(common::brute_force_empty_circle(&tri), None);
}

#[test]
fn insertion_order_does_not_matter() {
    let pts = random_points(500, 9);
    let base = geometric_triangles(&Triangulation::build(&pts).unwrap());
    let mut g = rng::stream(9, 1);
    for _ in 0..3 {
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut g);
        assert_eq!(geometric_triangles(&Triangulation::build(&shuffled).unwrap()), base);
    }
}

#[test]
fn translation_and_scaling_preserve_indices() {
    // Coordinates on a 2^-20 grid so the affine maps below are exact.
    let mut g = rng::stream(10, 0);
    let pts: Vec<Point2> = (0..400)
        .map(|_| p(g.gen_range(0..1u32 << 20) as f64 / (1u64 << 20) as f64, g.gen_range(0..1u32 << 20) as f64 / (1u64 << 20) as f64))
        .collect();
    let base = Triangulation::build(&pts).unwrap().canonical_triangles();
    let moved: Vec<Point2> = pts.iter().map(|q| p(3.0 * (q.x - 5.0), 3.0 * (q.y + 2.0))).collect();
    assert_eq!(Triangulation::build(&moved).unwrap().canonical_triangles(), base);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_sets_are_delaunay(raw in proptest::collection::vec((0u32..1000, 0u32..1000), 3..80)) {
        let mut seen = BTreeSet::new();
        let pts: Vec<Point2> = raw
            .into_iter()
            .filter(|q| seen.insert(*q))
            .map(|(x, y)| p(x as f64 / 7.0, y as f64 / 3.0))
            .collect();
        match Triangulation::build(&pts) {
            Ok(tri) => {
                prop_assert_eq!(common::brute_force_empty_circle(&tri), None);
                let b = common::hull_vertex_count(&pts);
                prop_assert_eq!(tri.len(), 2 * pts.len() - b - 2);
                prop_assert!(tri.validate().is_empty());
            }
            Err(TriangulationError::Degenerate(_)) => {
                let first = pts[0];
                let second = pts.iter().find(|q| **q != first).copied();
                let collinear = pts.len() < 3
                    || second.map_or(true, |s| pts.iter().all(|&q| common::exact_orient(first, s, q) == 0));
                prop_assert!(collinear);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn adjacency_is_mutual(seed in any::<u64>(), n in 3usize..150) {
        let tri = Triangulation::build(&random_points(n, seed)).unwrap();
        for (t, nbrs) in tri.adjacency().iter().enumerate() {
            let v = tri.triangles()[t].vertices;
            for i in 0..3 {
                let nb = nbrs[i];
                if nb == NO_NEIGHBOR {
                    continue;
                }
                let edge = Face::new(v[(i + 1) % 3], v[(i + 2) % 3]);
                prop_assert!(tri.faces_of(nb as usize).contains(&edge));
                prop_assert!(tri.adjacency()[nb as usize].contains(&(t as u32)));
            }
        }
    }
}
