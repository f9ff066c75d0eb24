use std::f64::consts::PI;

use boundary_sewing::geom::{Label, Point2};
use boundary_sewing::quadrature;
use boundary_sewing::rng;
use boundary_sewing::shapes::{cardioid_h_zeta_integral, ScalarField, ShapeOracle};

fn shape(name: &str) -> ShapeOracle {
    ShapeOracle::catalog(name).unwrap()
}

#[test]
fn membership_examples() {
    assert_eq!(shape("unit_circle").contains(&Point2::new(0.0, 0.0)), Label::Inside);
    assert_eq!(shape("cardioid").contains(&Point2::new(2.4, 1.4)), Label::Outside);
    assert_eq!(shape("cardioid").contains(&Point2::new(1.0, 0.0)), Label::Inside);
    assert_eq!(shape("trisectrix").contains(&Point2::new(-3.0, 0.0)), Label::Inside);
    assert_eq!(shape("trisectrix").contains(&Point2::new(1.5, 0.0)), Label::Outside);
    assert_eq!(shape("half_plane").contains(&Point2::new(0.3, 0.49)), Label::Inside);
    assert!(ShapeOracle::catalog("no_such_shape").is_err());
}

#[test]
fn field_examples() {
    let q = Point2::new(0.3, -1.7);
    assert_eq!(ScalarField::one().eval(&q), 1.0);
    assert_eq!(ScalarField::h_zeta(-0.5).eval(&q), 1.0);
    assert!((ScalarField::h_zeta(1.0).eval(&Point2::new(0.0, 2.0)) - 2f64.powf(1.5)).abs() < 1e-15);
}

#[test]
fn boundary_lengths_by_quadrature() {
    for (name, truth) in [("unit_circle", 2.0 * PI), ("cardioid", 8.0), ("trisectrix", 12.0 * 3f64.sqrt()), ("half_plane", 1.0)] {
        let s = shape(name);
        assert_eq!(s.exact_length(), Some(truth));
        let q = s.boundary_param().unwrap().length();
        assert!((q - truth).abs() < 1e-9, "{name}: {q}");
    }
}

#[test]
fn rose_reference_length() {
    let direct = quadrature::integrate(|t| 0.8 * ((5.0 * t).sin().powi(2) + 25.0 * (5.0 * t).cos().powi(2)).sqrt(), 0.0, PI, 1e-12);
    let rose = shape("polar_rose");
    assert!((rose.reference_length().unwrap() - direct).abs() < 1e-8);
    assert!(rose.exact_length().is_none());
}

#[test]
fn cardioid_line_integrals() {
    let c = shape("cardioid");
    for (zeta, closed) in [(-0.5, 8.0), (0.0, 2.0 * 2f64.sqrt() * PI), (1.0, 3.0 * 2f64.sqrt() * PI), (2.0, 5.0 * 2f64.sqrt() * PI)] {
        assert!((cardioid_h_zeta_integral(zeta) - closed).abs() < 1e-10, "zeta {zeta}");
        let q = c.quadrature_integral(&ScalarField::h_zeta(zeta)).unwrap();
        assert!((q - closed).abs() < 1e-8, "zeta {zeta}: {q}");
    }
}

#[test]
fn sampling_is_deterministic() {
    let s = shape("cardioid");
    let a = s.sample_points(10, &mut rng::stream(5, 0));
    let b = s.sample_points(10, &mut rng::stream(5, 0));
    assert_eq!(a, b);
    assert!(a.0.iter().all(|p| s.window().contains(p)));
}

fn inside_fraction(name: &str, n: usize, seed: u64) -> f64 {
    let (_, labels) = shape(name).sample_points(n, &mut rng::stream(seed, 0));
    labels.iter().filter(|l| l.is_inside()).count() as f64 / n as f64
}

#[test]
fn inside_fractions_match_areas() {
    let n = 100_000;
    for (name, p) in [("unit_circle", PI / 16.0), ("cardioid", 1.5 * PI / 9.0), ("half_plane", 0.5)] {
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let f = inside_fraction(name, n, 12);
        assert!((f - p).abs() < 3.0 * sigma, "{name}: {f} vs {p}");
    }
}

/// Even-odd test against a dense polyline, with segments bucketed by y.
struct Polyline {
    segs: Vec<(Point2, Point2)>,
    buckets: Vec<Vec<u32>>,
    y0: f64,
    dy: f64,
}

impl Polyline {
    fn new(vertices: Vec<Point2>, y0: f64, y1: f64, nb: usize) -> Self {
        let segs: Vec<_> = (0..vertices.len()).map(|i| (vertices[i], vertices[(i + 1) % vertices.len()])).collect();
        let dy = (y1 - y0) / nb as f64;
        let mut buckets = vec![Vec::new(); nb];
        for (k, (a, b)) in segs.iter().enumerate() {
            let lo = (((a.y.min(b.y) - y0) / dy).floor().max(0.0) as usize).min(nb - 1);
            let hi = (((a.y.max(b.y) - y0) / dy).floor().max(0.0) as usize).min(nb - 1);
            for bucket in &mut buckets[lo..=hi] {
                bucket.push(k as u32);
            }
        }
        Self { segs, buckets, y0, dy }
    }

    fn contains(&self, q: &Point2) -> bool {
        let b = (((q.y - self.y0) / self.dy).floor() as usize).min(self.buckets.len() - 1);
        let mut inside = false;
        for &k in &self.buckets[b] {
            let (a, c) = self.segs[k as usize];
            if (a.y > q.y) != (c.y > q.y) {
                let x = a.x + (q.y - a.y) / (c.y - a.y) * (c.x - a.x);
                if x > q.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn distance(&self, q: &Point2) -> f64 {
        self.segs
            .iter()
            .map(|(a, b)| {
                let (vx, vy) = (b.x - a.x, b.y - a.y);
                let t = (((q.x - a.x) * vx + (q.y - a.y) * vy) / (vx * vx + vy * vy)).clamp(0.0, 1.0);
                Point2::new(a.x + t * vx, a.y + t * vy).distance(q)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[test]
fn rose_membership_matches_dense_polygon() {
    let m = 1_000_000;
    let vertices: Vec<Point2> = (0..m)
        .map(|i| {
            let t = PI * i as f64 / m as f64;
            let r = 0.8 * (5.0 * t).sin();
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    let poly = Polyline::new(vertices, -1.0, 1.0, 2000);
    let rose = shape("polar_rose");
    let mut disagreements = 0;
    for i in 0..100 {
        for j in 0..100 {
            let q = Point2::new(-1.0 + (i as f64 + 0.5) / 50.0, -1.0 + (j as f64 + 0.5) / 50.0);
            if rose.is_inside(&q) != poly.contains(&q) {
                disagreements += 1;
                assert!(poly.distance(&q) < 1e-5, "{q:?} disagrees far from the curve");
            }
        }
    }
    assert!(disagreements <= 5);
}

#[test]
fn polygon_shape() {
    let square = vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(2.0, 2.0), Point2::new(0.0, 2.0)];
    let s = ShapeOracle::polygon(square, None).unwrap();
    assert!(s.is_inside(&Point2::new(1.0, 1.0)));
    assert!(!s.is_inside(&Point2::new(2.1, 1.0)));
    assert!((s.reference_length().unwrap() - 8.0).abs() < 1e-12);
    assert!(ShapeOracle::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)], None).is_err());
}
