//! Incremental Delaunay triangulation.
//!
//! Points are inserted one at a time with the Bowyer–Watson cavity scheme.
//! The convex hull is closed off by "ghost" triangles that share a single
//! symbolic vertex at infinity, so there is no finite super-triangle that can
//! clip hull triangles with huge circumcircles. A ghost triangle `(a, b, ∞)`
//! conflicts with `p` when `p` lies strictly left of `a → b`, or on the open
//! segment `ab`.
//!
//! Insertion follows a Hilbert-curve order of the input, which keeps the
//! point-location walk short. Ties in the Hilbert key fall back to the
//! lexicographic `(x, y)` order, so the output depends only on the point set
//! and not on the order in which it was supplied. Cocircular configurations
//! are resolved by that insertion order: a cavity only absorbs triangles whose
//! circumcircle *strictly* contains the new point.

use serde::Serialize;

use crate::error::TriangulationError;
use crate::geom::{incircle_raw, orient_raw, Face, Point2, Simplex2};

/// Sentinel for "no neighbor" in [`Triangulation::adjacency`] (hull edges).
pub const NO_NEIGHBOR: u32 = u32::MAX;

const GHOST: u32 = u32::MAX;
const DEAD: u32 = u32::MAX - 1;

/// A Delaunay triangulation of a planar point set.
///
/// Triangles are counterclockwise. `adjacency[t][i]` is the triangle across
/// the edge opposite vertex `i` of triangle `t`, or [`NO_NEIGHBOR`] on the
/// convex hull.
#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Point2>,
    triangles: Vec<Simplex2>,
    adjacency: Vec<[u32; 3]>,
}

/// A failed invariant reported by [`Triangulation::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Triangle is not strictly counterclockwise.
    NotCounterClockwise { triangle: usize },
    /// Vertex index out of range or repeated within a triangle.
    BadVertex { triangle: usize },
    /// Neighbor pointers are not mutual or do not share the edge.
    Adjacency { triangle: usize, slot: usize },
    /// `point` lies strictly inside the circumcircle of `triangle`.
    NotDelaunay { triangle: usize, point: usize },
    /// Triangle count does not match `2n - b - 2`.
    EulerCount { expected: usize, actual: usize },
    /// The hull boundary is not a single convex loop around all points.
    Hull { vertex: usize },
}

/// Above this size [`Triangulation::validate`] checks the empty-circle
/// property edge by edge instead of against every point.
pub const EXHAUSTIVE_VALIDATION_LIMIT: usize = 200;

impl Triangulation {
    /// Build the Delaunay triangulation of `points`.
    pub fn build(points: &[Point2]) -> Result<Self, TriangulationError> {
        let n = points.len();
        if n >= DEAD as usize {
            return Err(TriangulationError::TooManyPoints(n));
        }
        if n < 3 {
            return Err(TriangulationError::Degenerate(format!(
                "need at least 3 points, got {n}"
            )));
        }
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(TriangulationError::NonFinite { index });
        }
        let order = insertion_order(points)?;
        let mut builder = Builder::new(points);
        builder.run(&order)?;
        Ok(builder.finish(points))
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn triangles(&self) -> &[Simplex2] {
        &self.triangles
    }

    pub fn adjacency(&self) -> &[[u32; 3]] {
        &self.adjacency
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// The three edges of triangle `t`, in canonical form.
    pub fn faces_of(&self, t: usize) -> [Face; 3] {
        self.triangles[t].faces()
    }

    /// Directed hull edges `(a, b)`, each with the triangulation on its left.
    pub fn hull_edges(&self) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for (t, nbrs) in self.adjacency.iter().enumerate() {
            let v = self.triangles[t].vertices;
            for i in 0..3 {
                if nbrs[i] == NO_NEIGHBOR {
                    edges.push((v[(i + 1) % 3], v[(i + 2) % 3]));
                }
            }
        }
        edges
    }

    /// Number of points on the hull boundary, collinear ones included.
    pub fn hull_size(&self) -> usize {
        self.hull_edges().len()
    }

    /// Canonical, sorted list of triangles; convenient for comparisons.
    pub fn canonical_triangles(&self) -> Vec<[u32; 3]> {
        let mut out: Vec<_> = self.triangles.iter().map(Simplex2::canonical).collect();
        out.sort_unstable();
        out
    }

    /// Construct from raw parts without checking anything. Intended for
    /// fixtures that exercise [`Triangulation::validate`].
    pub fn from_parts(points: Vec<Point2>, triangles: Vec<Simplex2>, adjacency: Vec<[u32; 3]>) -> Self {
        Self {
            points,
            triangles,
            adjacency,
        }
    }

    /// Check every structural and geometric invariant.
    ///
    /// An empty result means the triangles are CCW, mutually adjacent,
    /// Delaunay, cover the convex hull and satisfy the Euler count. The
    /// empty-circle test is exhaustive up to [`EXHAUSTIVE_VALIDATION_LIMIT`]
    /// points and edge-local above it; for a triangulation of the hull these
    /// are equivalent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.points.len();
        let m = self.triangles.len();
        if self.adjacency.len() != m {
            out.push(Violation::Adjacency { triangle: m.min(self.adjacency.len()), slot: 0 });
            return out;
        }

        let mut geometry_ok = vec![true; m];
        for (t, tri) in self.triangles.iter().enumerate() {
            let v = tri.vertices;
            if v.iter().any(|&i| i as usize >= n) || v[0] == v[1] || v[1] == v[2] || v[0] == v[2] {
                out.push(Violation::BadVertex { triangle: t });
                geometry_ok[t] = false;
                continue;
            }
            let [a, b, c] = v.map(|i| &self.points[i as usize]);
            if orient_raw(a, b, c) <= 0.0 {
                out.push(Violation::NotCounterClockwise { triangle: t });
                geometry_ok[t] = false;
            }
        }

        for t in 0..m {
            if !geometry_ok[t] {
                continue;
            }
            let v = self.triangles[t].vertices;
            for i in 0..3 {
                let nb = self.adjacency[t][i];
                if nb == NO_NEIGHBOR {
                    continue;
                }
                let nb = nb as usize;
                let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                let ok = nb < m && {
                    let w = self.triangles[nb].vertices;
                    (0..3).any(|j| {
                        w[(j + 1) % 3] == b && w[(j + 2) % 3] == a && self.adjacency[nb][j] == t as u32
                    })
                };
                if !ok {
                    out.push(Violation::Adjacency { triangle: t, slot: i });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }

        if n <= EXHAUSTIVE_VALIDATION_LIMIT {
            for (t, tri) in self.triangles.iter().enumerate() {
                let [a, b, c] = tri.vertices.map(|i| &self.points[i as usize]);
                for (k, p) in self.points.iter().enumerate() {
                    if tri.vertices.contains(&(k as u32)) {
                        continue;
                    }
                    if incircle_raw(a, b, c, p) > 0.0 {
                        out.push(Violation::NotDelaunay { triangle: t, point: k });
                    }
                }
            }
        } else {
            for (t, tri) in self.triangles.iter().enumerate() {
                let [a, b, c] = tri.vertices.map(|i| &self.points[i as usize]);
                for i in 0..3 {
                    let nb = self.adjacency[t][i];
                    if nb == NO_NEIGHBOR {
                        continue;
                    }
                    let w = self.triangles[nb as usize].vertices;
                    let j = (0..3).find(|&j| self.adjacency[nb as usize][j] == t as u32).unwrap();
                    let apex = w[j];
                    if incircle_raw(a, b, c, &self.points[apex as usize]) > 0.0 {
                        out.push(Violation::NotDelaunay { triangle: t, point: apex as usize });
                    }
                }
            }
        }

        out.extend(self.check_hull());
        out
    }

    fn check_hull(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let edges = self.hull_edges();
        let b = edges.len();
        let n = self.points.len();
        let expected = (2 * n).saturating_sub(b + 2);
        if self.triangles.len() != expected {
            out.push(Violation::EulerCount {
                expected,
                actual: self.triangles.len(),
            });
        }
        if b == 0 {
            if n > 0 {
                out.push(Violation::Hull { vertex: 0 });
            }
            return out;
        }
        let mut next = vec![u32::MAX; n];
        for &(a, b) in &edges {
            if next[a as usize] != u32::MAX {
                out.push(Violation::Hull { vertex: a as usize });
                return out;
            }
            next[a as usize] = b;
        }
        // Single loop, no right turns.
        let start = edges[0].0;
        let mut cur = start;
        let mut steps = 0usize;
        loop {
            let nx = next[cur as usize];
            if nx == u32::MAX {
                out.push(Violation::Hull { vertex: cur as usize });
                return out;
            }
            let nn = next[nx as usize];
            if nn == u32::MAX {
                out.push(Violation::Hull { vertex: nx as usize });
                return out;
            }
            let [p, q, r] = [cur, nx, nn].map(|i| &self.points[i as usize]);
            if orient_raw(p, q, r) < 0.0 {
                out.push(Violation::Hull { vertex: nx as usize });
            }
            steps += 1;
            cur = nx;
            if cur == start || steps > b {
                break;
            }
        }
        if steps != b {
            out.push(Violation::Hull { vertex: start as usize });
        }
        out
    }
}

/// Hilbert index of `(x, y)` on a `2^order` grid.
fn hilbert_index(order: u32, mut x: u32, mut y: u32) -> u64 {
    let n: u32 = 1 << order;
    let mut d: u64 = 0;
    let mut s = n >> 1;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

fn insertion_order(points: &[Point2]) -> Result<Vec<u32>, TriangulationError> {
    const ORDER: u32 = 16;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let scale = if span > 0.0 { ((1u32 << ORDER) - 1) as f64 / span } else { 0.0 };
    let keys: Vec<u64> = points
        .iter()
        .map(|p| {
            let gx = ((p.x - x0) * scale) as u32;
            let gy = ((p.y - y0) * scale) as u32;
            hilbert_index(ORDER, gx, gy)
        })
        .collect();
    let mut order: Vec<u32> = (0..points.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        let (pa, pb) = (&points[a as usize], &points[b as usize]);
        keys[a as usize]
            .cmp(&keys[b as usize])
            .then(pa.x.total_cmp(&pb.x))
            .then(pa.y.total_cmp(&pb.y))
            .then(a.cmp(&b))
    });
    for w in order.windows(2) {
        let (a, b) = (&points[w[0] as usize], &points[w[1] as usize]);
        if a.x == b.x && a.y == b.y {
            let (i, j) = (w[0].min(w[1]) as usize, w[0].max(w[1]) as usize);
            return Err(TriangulationError::DuplicatePoint { first: i, second: j });
        }
    }
    Ok(order)
}

struct BoundaryEdge {
    from: u32,
    to: u32,
    outer: u32,
    outer_slot: u8,
}

struct Builder<'a> {
    pts: &'a [Point2],
    verts: Vec<[u32; 3]>,
    nbrs: Vec<[u32; 3]>,
    free: Vec<u32>,
    last: u32,
    // Scratch buffers reused across insertions.
    in_cavity: Vec<u32>,
    epoch: u32,
    cavity: Vec<u32>,
    stack: Vec<u32>,
    boundary: Vec<BoundaryEdge>,
    new_tris: Vec<u32>,
    rng: u32,
}

impl<'a> Builder<'a> {
    fn new(pts: &'a [Point2]) -> Self {
        let cap = 2 * pts.len() + 8;
        Self {
            pts,
            verts: Vec::with_capacity(cap),
            nbrs: Vec::with_capacity(cap),
            free: Vec::new(),
            last: 0,
            in_cavity: Vec::with_capacity(cap),
            epoch: 0,
            cavity: Vec::new(),
            stack: Vec::new(),
            boundary: Vec::new(),
            new_tris: Vec::new(),
            rng: 0x9E37_79B9,
        }
    }

    #[inline]
    fn pt(&self, i: u32) -> &Point2 {
        &self.pts[i as usize]
    }

    #[inline]
    fn is_ghost(&self, t: u32) -> bool {
        self.verts[t as usize][2] == GHOST
    }

    fn alloc(&mut self) -> u32 {
        if let Some(t) = self.free.pop() {
            t
        } else {
            self.verts.push([DEAD; 3]);
            self.nbrs.push([DEAD; 3]);
            self.in_cavity.push(0);
            (self.verts.len() - 1) as u32
        }
    }

    fn run(&mut self, order: &[u32]) -> Result<(), TriangulationError> {
        let a = order[0];
        let b = order[1];
        let Some(k) = (2..order.len()).find(|&k| orient_raw(self.pt(a), self.pt(b), self.pt(order[k])) != 0.0)
        else {
            return Err(TriangulationError::Degenerate("all points are collinear".into()));
        };
        let c = order[k];
        let (a, b) = if orient_raw(self.pt(a), self.pt(b), self.pt(c)) > 0.0 { (a, b) } else { (b, a) };
        self.seed_triangle(a, b, c);
        for (i, &v) in order.iter().enumerate() {
            if i < 2 || i == k {
                continue;
            }
            self.insert(v)?;
        }
        Ok(())
    }

    fn seed_triangle(&mut self, a: u32, b: u32, c: u32) {
        // t0 real; ghosts g_i on the edge opposite vertex i of t0.
        // t0 = (a, b, c); edge opposite a is b->c, ghost (c, b, ∞).
        let real = [a, b, c];
        for _ in 0..4 {
            self.alloc();
        }
        self.verts[0] = real;
        self.nbrs[0] = [1, 2, 3];
        for i in 0..3 {
            let from = real[(i + 1) % 3];
            let to = real[(i + 2) % 3];
            self.verts[i + 1] = [to, from, GHOST];
        }
        // Ghost (to, from, ∞): slot 2 faces the real triangle; slot 0 (opposite
        // `to`) is the edge from -> ∞, shared with the ghost whose `to` is `from`.
        for i in 0..3 {
            let g = i + 1;
            let [to, from, _] = self.verts[g];
            let across_from = (1..4).find(|&h| self.verts[h][0] == from).unwrap();
            let across_to = (1..4).find(|&h| self.verts[h][1] == to).unwrap();
            self.nbrs[g] = [across_from as u32, across_to as u32, 0];
        }
        self.last = 0;
    }

    #[inline]
    fn next_rand(&mut self) -> u32 {
        self.rng ^= self.rng << 13;
        self.rng ^= self.rng >> 17;
        self.rng ^= self.rng << 5;
        self.rng
    }

    /// Walk from the last real triangle towards `p`. Returns a triangle that
    /// conflicts with `p`: either a real triangle containing it or a ghost
    /// whose hull edge sees it.
    fn locate(&mut self, p: &Point2) -> u32 {
        let mut t = self.last;
        let mut came_from = u32::MAX;
        'walk: loop {
            let v = self.verts[t as usize];
            let start = (self.next_rand() % 3) as usize;
            for r in 0..3 {
                let i = (start + r) % 3;
                let nb = self.nbrs[t as usize][i];
                if nb == came_from {
                    continue;
                }
                let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
                if orient_raw(self.pt(a), self.pt(b), p) < 0.0 {
                    came_from = t;
                    t = nb;
                    if self.is_ghost(t) {
                        return t;
                    }
                    continue 'walk;
                }
            }
            return t;
        }
    }

    #[inline]
    fn conflicts(&self, t: u32, p: &Point2) -> bool {
        let v = self.verts[t as usize];
        if v[2] == GHOST {
            let (a, b) = (self.pt(v[0]), self.pt(v[1]));
            let o = orient_raw(a, b, p);
            if o > 0.0 {
                return true;
            }
            if o < 0.0 {
                return false;
            }
            strictly_between(a, b, p)
        } else {
            incircle_raw(self.pt(v[0]), self.pt(v[1]), self.pt(v[2]), p) > 0.0
        }
    }

    fn insert(&mut self, v: u32) -> Result<(), TriangulationError> {
        let p = *self.pt(v);
        let start = self.locate(&p);
        if !self.is_ghost(start) {
            for &w in &self.verts[start as usize] {
                let q = self.pt(w);
                if q.x == p.x && q.y == p.y {
                    let (i, j) = (w.min(v) as usize, w.max(v) as usize);
                    return Err(TriangulationError::DuplicatePoint { first: i, second: j });
                }
            }
        }

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.in_cavity.iter_mut().for_each(|e| *e = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.cavity.clear();
        self.boundary.clear();
        self.stack.clear();
        self.stack.push(start);
        self.in_cavity[start as usize] = epoch;
        while let Some(t) = self.stack.pop() {
            self.cavity.push(t);
            let vt = self.verts[t as usize];
            for i in 0..3 {
                let nb = self.nbrs[t as usize][i];
                if self.in_cavity[nb as usize] == epoch {
                    continue;
                }
                if self.conflicts(nb, &p) {
                    self.in_cavity[nb as usize] = epoch;
                    self.stack.push(nb);
                } else {
                    let slot = (0..3).find(|&j| self.nbrs[nb as usize][j] == t).unwrap() as u8;
                    self.boundary.push(BoundaryEdge {
                        from: vt[(i + 1) % 3],
                        to: vt[(i + 2) % 3],
                        outer: nb,
                        outer_slot: slot,
                    });
                }
            }
        }

        // Replace cavity with a fan around `v`.
        self.new_tris.clear();
        let reuse = self.cavity.len().min(self.boundary.len());
        for k in 0..self.boundary.len() {
            let t = if k < reuse { self.cavity[k] } else { self.alloc() };
            self.new_tris.push(t);
        }
        for &t in &self.cavity[reuse..] {
            self.verts[t as usize] = [DEAD; 3];
            self.nbrs[t as usize] = [DEAD; 3];
            self.free.push(t);
        }
        for k in 0..self.boundary.len() {
            let e = &self.boundary[k];
            let t = self.new_tris[k];
            self.verts[t as usize] = [e.from, e.to, v];
            self.nbrs[t as usize][2] = e.outer;
            self.nbrs[e.outer as usize][e.outer_slot as usize] = t;
        }
        for k in 0..self.boundary.len() {
            let (from, to) = (self.boundary[k].from, self.boundary[k].to);
            // Across edge (to, v): the fan triangle starting at `to`.
            // Across edge (v, from): the fan triangle ending at `from`.
            let mut next = u32::MAX;
            let mut prev = u32::MAX;
            for (j, e) in self.boundary.iter().enumerate() {
                if e.from == to {
                    next = self.new_tris[j];
                }
                if e.to == from {
                    prev = self.new_tris[j];
                }
            }
            debug_assert!(next != u32::MAX && prev != u32::MAX, "cavity boundary is not a cycle");
            let t = self.new_tris[k] as usize;
            self.nbrs[t][0] = next;
            self.nbrs[t][1] = prev;
        }
        // Keep the infinite vertex in slot 2.
        let mut last_real = None;
        for k in 0..self.new_tris.len() {
            let t = self.new_tris[k] as usize;
            let vt = self.verts[t];
            if vt[0] == GHOST {
                self.verts[t] = [vt[1], vt[2], vt[0]];
                let nb = self.nbrs[t];
                self.nbrs[t] = [nb[1], nb[2], nb[0]];
            } else if vt[1] == GHOST {
                self.verts[t] = [vt[2], vt[0], vt[1]];
                let nb = self.nbrs[t];
                self.nbrs[t] = [nb[2], nb[0], nb[1]];
            } else {
                last_real = Some(t as u32);
            }
        }
        self.last = last_real.expect("inserted point has no finite incident triangle");
        Ok(())
    }

    fn finish(self, points: &[Point2]) -> Triangulation {
        let mut remap = vec![u32::MAX; self.verts.len()];
        let mut count = 0u32;
        for (t, v) in self.verts.iter().enumerate() {
            if v[0] != DEAD && v[2] != GHOST {
                remap[t] = count;
                count += 1;
            }
        }
        let mut triangles = Vec::with_capacity(count as usize);
        let mut adjacency = Vec::with_capacity(count as usize);
        for (t, v) in self.verts.iter().enumerate() {
            if remap[t] == u32::MAX {
                continue;
            }
            triangles.push(Simplex2 { vertices: *v });
            adjacency.push(self.nbrs[t].map(|nb| remap[nb as usize]));
        }
        Triangulation {
            points: points.to_vec(),
            triangles,
            adjacency,
        }
    }
}

/// For collinear `a`, `b`, `p`: is `p` strictly inside the segment `ab`?
#[inline]
fn strictly_between(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if a.x != b.x {
        (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x)
    } else {
        (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y)
    }
}
