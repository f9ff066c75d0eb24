//! Planar primitives and exact-sign predicates.
//!
//! Orientation and in-circle decisions go through adaptive-precision
//! determinant evaluation: a floating-point filter answers the easy cases and
//! an exact expansion fallback takes over when the filter cannot certify the
//! sign. The result is the sign of the determinant over the real numbers for
//! the given `f64` inputs.

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// A point in the sampling window.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    fn coord(&self) -> robust::Coord<f64> {
        robust::Coord { x: self.x, y: self.y }
    }
}

/// Inside/outside membership of a sample point with respect to the body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Inside,
    Outside,
}

impl Label {
    #[inline]
    pub fn is_inside(self) -> bool {
        matches!(self, Label::Inside)
    }

    #[inline]
    pub fn flipped(self) -> Label {
        match self {
            Label::Inside => Label::Outside,
            Label::Outside => Label::Inside,
        }
    }

    #[inline]
    pub fn from_inside(inside: bool) -> Label {
        if inside {
            Label::Inside
        } else {
            Label::Outside
        }
    }
}

/// A sample location with its membership label and, optionally, the value of
/// the scalar field being integrated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub position: Point2,
    pub label: Label,
    pub field_value: Option<f64>,
}

impl LabeledPoint {
    pub fn new(position: Point2, label: Label) -> Self {
        Self {
            position,
            label,
            field_value: None,
        }
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.field_value = Some(value);
        self
    }
}

/// Axis-aligned sampling window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, GeomError> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(GeomError::InvalidRect {
                x_min,
                x_max,
                y_min,
                y_max,
            });
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// Bounding box of a point set; `None` if it is empty or flat in one axis.
    pub fn bounding(points: impl IntoIterator<Item = Point2>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let (mut x0, mut x1, mut y0, mut y1) = (first.x, first.x, first.y, first.y);
        for p in it {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        Rect::new(x0, x1, y0, y1).ok()
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

/// An edge of the triangulation, keyed by its two vertex indices with the
/// smaller index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    vertices: [u32; 2],
}

impl Face {
    /// Canonical face on two distinct vertices.
    ///
    /// # Panics
    ///
    /// Panics if `a == b`.
    #[inline]
    pub fn new(a: u32, b: u32) -> Self {
        assert_ne!(a, b, "a face needs two distinct vertices");
        if a < b {
            Self { vertices: [a, b] }
        } else {
            Self { vertices: [b, a] }
        }
    }

    #[inline]
    pub fn vertices(&self) -> [u32; 2] {
        self.vertices
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.vertices[0] == v || self.vertices[1] == v
    }
}

/// A triangle stored counterclockwise by vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex2 {
    pub vertices: [u32; 3],
}

impl Simplex2 {
    /// The three edges as canonical faces.
    pub fn faces(&self) -> [Face; 3] {
        let [a, b, c] = self.vertices;
        [Face::new(a, b), Face::new(b, c), Face::new(c, a)]
    }

    /// Rotation-invariant key: the cyclic rotation starting at the smallest
    /// index. Two CCW triangles on the same vertex set share this key.
    pub fn canonical(&self) -> [u32; 3] {
        let v = self.vertices;
        let m = (0..3).min_by_key(|&i| v[i]).unwrap();
        [v[m], v[(m + 1) % 3], v[(m + 2) % 3]]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CirclePosition {
    Inside,
    Outside,
    On,
}

/// Signed twice-area of `(a, b, c)` with exact sign; positive when CCW.
///
/// No finiteness checks; callers in the triangulation kernel guarantee it.
#[inline]
pub(crate) fn orient_raw(a: &Point2, b: &Point2, c: &Point2) -> f64 {
    robust::orient2d(a.coord(), b.coord(), c.coord())
}

/// Lifted in-circle determinant with exact sign; positive when `d` lies
/// strictly inside the circle through the CCW triple `(a, b, c)`.
#[inline]
pub(crate) fn incircle_raw(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> f64 {
    robust::incircle(a.coord(), b.coord(), c.coord(), d.coord())
}

fn check_finite(points: &[&Point2]) -> Result<(), GeomError> {
    match points.iter().find(|p| !p.is_finite()) {
        Some(p) => Err(GeomError::NonFinite { x: p.x, y: p.y }),
        None => Ok(()),
    }
}

/// Orientation of the triple `(a, b, c)`.
pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> Result<Orientation, GeomError> {
    check_finite(&[a, b, c])?;
    let det = orient_raw(a, b, c);
    Ok(if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    })
}

/// Position of `p` relative to the circumcircle of the CCW triangle `(a, b, c)`.
pub fn in_circumcircle(
    a: &Point2,
    b: &Point2,
    c: &Point2,
    p: &Point2,
) -> Result<CirclePosition, GeomError> {
    check_finite(&[a, b, c, p])?;
    match orientation(a, b, c)? {
        Orientation::CounterClockwise => {}
        Orientation::Clockwise => return Err(GeomError::NotCounterClockwise),
        Orientation::Collinear => return Err(GeomError::Collinear),
    }
    let det = incircle_raw(a, b, c, p);
    Ok(if det > 0.0 {
        CirclePosition::Inside
    } else if det < 0.0 {
        CirclePosition::Outside
    } else {
        CirclePosition::On
    })
}

/// Circumcenter and squared circumradius of a non-degenerate triangle.
pub fn circumcircle(a: &Point2, b: &Point2, c: &Point2) -> Result<(Point2, f64), GeomError> {
    check_finite(&[a, b, c])?;
    if orient_raw(a, b, c) == 0.0 {
        return Err(GeomError::Collinear);
    }
    // Work relative to `a` to limit cancellation.
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point2::new(a.x + ux, a.y + uy);
    Ok((center, ux * ux + uy * uy))
}

/// Euclidean length of a face.
pub fn face_measure(face: &Face, points: &[Point2]) -> Result<f64, GeomError> {
    let [i, j] = face.vertices();
    let p = points.get(i as usize).ok_or(GeomError::IndexOutOfBounds {
        index: i as usize,
        len: points.len(),
    })?;
    let q = points.get(j as usize).ok_or(GeomError::IndexOutOfBounds {
        index: j as usize,
        len: points.len(),
    })?;
    Ok(p.distance(q))
}
