//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use boundary_sewing::delaunay::Triangulation;
use boundary_sewing::geom::Point2;
use num_bigint::BigInt;
use num_traits::{Float, Signed, Zero};
use rand::Rng;

/// Exact integers `v_i · 2^{-e}` for a common `e`, so determinants of the
/// returned values have the same sign as of the inputs.
fn to_common_scale(values: &[f64]) -> Vec<BigInt> {
    let decoded: Vec<(u64, i16, i8)> = values.iter().map(|v| v.integer_decode()).collect();
    let emin = decoded.iter().filter(|d| d.0 != 0).map(|d| d.1).min().unwrap_or(0);
    decoded
        .iter()
        .map(|&(m, e, s)| {
            let v = BigInt::from(m) << ((e - emin) as usize);
            if s < 0 {
                -v
            } else {
                v
            }
        })
        .collect()
}

fn sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of `(b − a) × (c − a)`, computed exactly.
pub fn exact_orient(a: Point2, b: Point2, c: Point2) -> i8 {
    let v = to_common_scale(&[a.x, a.y, b.x, b.y, c.x, c.y]);
    let (abx, aby) = (&v[2] - &v[0], &v[3] - &v[1]);
    let (acx, acy) = (&v[4] - &v[0], &v[5] - &v[1]);
    sign(&(abx * acy - aby * acx))
}

/// Sign of the lifted in-circle determinant, computed exactly. Positive
/// when `d` is inside the circle through the CCW triple `(a, b, c)`.
pub fn exact_incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> i8 {
    let v = to_common_scale(&[a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y]);
    let row = |i: usize| {
        let x = &v[2 * i] - &v[6];
        let y = &v[2 * i + 1] - &v[7];
        let l = &x * &x + &y * &y;
        (x, y, l)
    };
    let (ax, ay, al) = row(0);
    let (bx, by, bl) = row(1);
    let (cx, cy, cl) = row(2);
    let det = &ax * (&by * &cl - &bl * &cy) - &ay * (&bx * &cl - &bl * &cx) + &al * (&bx * &cy - &by * &cx);
    sign(&det)
}

/// Every triangle checked against every point with the exact oracle.
/// Returns the first violating (triangle, point) pair.
pub fn brute_force_empty_circle(tri: &Triangulation) -> Option<(usize, usize)> {
    let pts = tri.points();
    for (t, s) in tri.triangles().iter().enumerate() {
        let [a, b, c] = s.vertices.map(|i| pts[i as usize]);
        if exact_orient(a, b, c) <= 0 {
            return Some((t, usize::MAX));
        }
        for (k, p) in pts.iter().enumerate() {
            if s.vertices.contains(&(k as u32)) {
                continue;
            }
            if exact_incircle(a, b, c, *p) > 0 {
                return Some((t, k));
            }
        }
    }
    None
}

/// Hull size by an independent monotone-chain convex hull (collinear hull
/// points included, matching a triangulation's hull edge count).
pub fn hull_vertex_count(points: &[Point2]) -> usize {
    let mut p: Vec<Point2> = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let chain = |iter: &mut dyn Iterator<Item = Point2>| {
        let mut h: Vec<Point2> = Vec::new();
        for q in iter {
            while h.len() >= 2 && exact_orient(h[h.len() - 2], h[h.len() - 1], q) < 0 {
                h.pop();
            }
            h.push(q);
        }
        h.len() - 1
    };
    chain(&mut p.clone().into_iter()) + chain(&mut p.into_iter().rev())
}

/// Adversarial predicate inputs: near-collinear triples built by moving a
/// few ulps off a line, points on a 2^-40 grid, and exactly cocircular
/// integer points.
pub fn adversarial_triple<R: Rng>(rng: &mut R) -> [Point2; 3] {
    match rng.gen_range(0..3) {
        0 => {
            let a = Point2::new(rng.gen(), rng.gen());
            let b = Point2::new(rng.gen(), rng.gen());
            let t: f64 = rng.gen_range(-2.0..3.0);
            let mut c = Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            let ulps: i64 = rng.gen_range(-3..=3);
            c.y = f64::from_bits((c.y.to_bits() as i64 + ulps) as u64);
            [a, b, c]
        }
        1 => {
            let g = || 2f64.powi(-40);
            let mut p = || Point2::new(rng.gen_range(-8i64..8) as f64 * g(), rng.gen_range(-8i64..8) as f64 * g());
            [p(), p(), p()]
        }
        _ => {
            let k: f64 = rng.gen_range(1.0..1e6f64).floor();
            [Point2::new(0.0, 0.0), Point2::new(1e-18 * k, 1.0), Point2::new(1.0, 2.0)]
        }
    }
}

/// Points on circles through Pythagorean triples (x² + y² = 25 m²), plus a
/// random query; many exact ON cases.
pub fn cocircular_quad<R: Rng>(rng: &mut R) -> [Point2; 4] {
    const PTS: [(f64, f64); 12] = [
        (5.0, 0.0), (4.0, 3.0), (3.0, 4.0), (0.0, 5.0), (-3.0, 4.0), (-4.0, 3.0),
        (-5.0, 0.0), (-4.0, -3.0), (-3.0, -4.0), (0.0, -5.0), (3.0, -4.0), (4.0, -3.0),
    ];
    let m = 2f64.powi(rng.gen_range(-30..30));
    let (ox, oy) = (rng.gen_range(-4..4) as f64 * m, rng.gen_range(-4..4) as f64 * m);
    let mut pick = || {
        let (x, y) = PTS[rng.gen_range(0..PTS.len())];
        Point2::new(ox + x * m, oy + y * m)
    };
    [pick(), pick(), pick(), pick()]
}
