//! Times triangulation of uniform samples: `cargo run --release --example build_timing -- 1000000`
use std::time::Instant;

use boundary_sewing::delaunay::Triangulation;
use boundary_sewing::geom::Point2;
use rand::Rng;

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let mut rng = boundary_sewing::rng::stream(1, 0);
    let pts: Vec<Point2> = (0..n).map(|_| Point2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
    let t0 = Instant::now();
    let tri = Triangulation::build(&pts).unwrap();
    let dt = t0.elapsed();
    println!("n={n} triangles={} hull={} build={:?} ({:.3} us/pt)", tri.len(), tri.hull_size(), dt, dt.as_secs_f64() * 1e6 / n as f64);
    let t0 = Instant::now();
    let v = tri.validate();
    println!("validate: {} violations in {:?}", v.len(), t0.elapsed());
}
