//! Benchmark bodies with exact membership tests, their sampling windows and
//! reference boundary quantities, plus the scalar fields integrated over them.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::ShapeError;
use crate::geom::{Label, LabeledPoint, Point2, Rect};
use crate::quadrature;

/// Absolute tolerance used for boundary quadratures.
pub const QUADRATURE_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
enum Body {
    Circle { radius: f64 },
    Rose,
    Cardioid,
    Trisectrix,
    /// `y < level`; the boundary inside the window is a horizontal chord.
    HalfPlane { level: f64 },
    Polygon { vertices: Vec<Point2> },
}

/// A body `G` inside its sampling window.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeOracle {
    name: String,
    window: Rect,
    body: Body,
    exact_length: Option<f64>,
    open_curve: bool,
}

/// Arclength parametrisation handle for a shape's boundary.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryParam<'a> {
    oracle: &'a ShapeOracle,
    pub t_min: f64,
    pub t_max: f64,
}

impl BoundaryParam<'_> {
    pub fn point(&self, t: f64) -> Point2 {
        self.oracle.boundary_point(t)
    }

    /// `|γ'(t)|`.
    pub fn speed(&self, t: f64) -> f64 {
        self.oracle.boundary_speed(t)
    }

    /// Boundary length by quadrature of the arclength element.
    pub fn length(&self) -> f64 {
        quadrature::integrate(|t| self.speed(t), self.t_min, self.t_max, QUADRATURE_TOL)
    }

    /// `∫_Γ f dΓ` by quadrature.
    pub fn integrate(&self, f: impl Fn(&Point2) -> f64) -> f64 {
        quadrature::integrate(|t| f(&self.point(t)) * self.speed(t), self.t_min, self.t_max, QUADRATURE_TOL)
    }
}

impl ShapeOracle {
    /// Look up a built-in shape by name.
    pub fn catalog(name: &str) -> Result<Self, ShapeError> {
        let rect = |a, b, c, d| Rect::new(a, b, c, d).expect("static window");
        let shape = match name {
            "unit_circle" => Self {
                name: name.into(),
                window: rect(-2.0, 2.0, -2.0, 2.0),
                body: Body::Circle { radius: 1.0 },
                exact_length: Some(2.0 * PI),
                open_curve: false,
            },
            "polar_rose" => Self {
                name: name.into(),
                window: rect(-1.0, 1.0, -1.0, 1.0),
                body: Body::Rose,
                exact_length: None,
                open_curve: false,
            },
            "cardioid" => Self {
                name: name.into(),
                window: rect(-0.5, 2.5, -1.5, 1.5),
                body: Body::Cardioid,
                exact_length: Some(8.0),
                open_curve: false,
            },
            "trisectrix" => Self {
                name: name.into(),
                window: rect(-9.0, 2.0, -5.5, 5.5),
                body: Body::Trisectrix,
                exact_length: Some(12.0 * 3f64.sqrt()),
                open_curve: false,
            },
            "half_plane" => Self {
                name: name.into(),
                window: rect(0.0, 1.0, 0.0, 1.0),
                body: Body::HalfPlane { level: 0.5 },
                exact_length: Some(1.0),
                open_curve: false,
            },
            "polygon" => return Err(ShapeError::UnknownShape("polygon (use a polygon file)".into())),
            other => return Err(ShapeError::UnknownShape(other.into())),
        };
        Ok(shape)
    }

    /// Names accepted by [`ShapeOracle::catalog`].
    pub fn catalog_names() -> &'static [&'static str] {
        &["unit_circle", "polar_rose", "cardioid", "trisectrix", "half_plane"]
    }

    /// Body bounded by a closed polyline (implicitly closed). Without an
    /// explicit window the polygon's bounding box is padded by 10% of its
    /// larger side.
    pub fn polygon(vertices: Vec<Point2>, window: Option<Rect>) -> Result<Self, ShapeError> {
        let mut vertices = vertices;
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(ShapeError::PolygonTooSmall(vertices.len()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(crate::error::GeomError::NonFinite { x: p.x, y: p.y }.into());
        }
        let window = match window {
            Some(w) => w,
            None => {
                let bb = Rect::bounding(vertices.iter().copied())
                    .ok_or(crate::error::GeomError::Collinear)?;
                let pad = 0.1 * bb.width().max(bb.height());
                Rect::new(bb.x_min - pad, bb.x_max + pad, bb.y_min - pad, bb.y_max + pad)?
            }
        };
        let perimeter = (0..vertices.len())
            .map(|i| vertices[i].distance(&vertices[(i + 1) % vertices.len()]))
            .sum();
        Ok(Self {
            name: "polygon".into(),
            window,
            body: Body::Polygon { vertices },
            exact_length: Some(perimeter),
            open_curve: false,
        })
    }

    /// Read a polygon from CSV rows `x,y` (an optional `x,y` header is skipped).
    pub fn polygon_from_file(path: &Path, window: Option<Rect>) -> Result<Self, ShapeError> {
        let file_err = |message: String| ShapeError::PolygonFile {
            path: path.to_path_buf(),
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| file_err(e.to_string()))?;
        let mut vertices = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| file_err(e.to_string()))?;
            if row == 0 && record.get(0) == Some("x") {
                continue;
            }
            let parse = |i: usize| -> Result<f64, ShapeError> {
                record
                    .get(i)
                    .ok_or_else(|| file_err(format!("row {}: missing column {}", row + 1, i + 1)))?
                    .parse::<f64>()
                    .map_err(|e| file_err(format!("row {}: {e}", row + 1)))
            };
            vertices.push(Point2::new(parse(0)?, parse(1)?));
        }
        Self::polygon(vertices, window)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn window(&self) -> Rect {
        self.window
    }

    pub fn exact_length(&self) -> Option<f64> {
        self.exact_length
    }

    pub fn open_curve(&self) -> bool {
        self.open_curve
    }

    /// Exact length when known, otherwise the quadrature length of the
    /// parametric boundary.
    pub fn reference_length(&self) -> Option<f64> {
        self.exact_length.or_else(|| self.boundary_param().map(|b| b.length()))
    }

    /// The same shape sampled in a different window.
    pub fn with_window(mut self, window: Rect) -> Self {
        self.window = window;
        self
    }

    /// Membership of `p` in `G`.
    pub fn contains(&self, p: &Point2) -> Label {
        Label::from_inside(self.is_inside(p))
    }

    #[inline]
    pub fn is_inside(&self, p: &Point2) -> bool {
        match &self.body {
            Body::Circle { radius } => p.x * p.x + p.y * p.y < radius * radius,
            Body::Rose => {
                let r = p.x.hypot(p.y);
                let s = 0.8 * (5.0 * p.y.atan2(p.x)).sin();
                s > 0.0 && r < s
            }
            Body::Cardioid => {
                let r = p.x.hypot(p.y);
                r < 1.0 + p.y.atan2(p.x).cos()
            }
            Body::Trisectrix => {
                let r = p.x.hypot(p.y);
                let c = (p.y.atan2(p.x) / 3.0).cos();
                r * c * c * c < 1.0
            }
            Body::HalfPlane { level } => p.y < *level,
            Body::Polygon { vertices } => point_in_polygon(vertices, p),
        }
    }

    /// Parametric boundary, when the shape has one.
    pub fn boundary_param(&self) -> Option<BoundaryParam<'_>> {
        let (t_min, t_max) = match &self.body {
            Body::Circle { .. } => (0.0, 2.0 * PI),
            Body::Rose => (0.0, PI),
            Body::Cardioid => (0.0, 2.0 * PI),
            Body::Trisectrix => (-PI, PI),
            Body::HalfPlane { .. } => (self.window.x_min, self.window.x_max),
            Body::Polygon { .. } => return None,
        };
        Some(BoundaryParam {
            oracle: self,
            t_min,
            t_max,
        })
    }

    /// Polar radius and its derivative for the polar-equation shapes.
    fn polar(&self, t: f64) -> (f64, f64) {
        match self.body {
            Body::Rose => (0.8 * (5.0 * t).sin(), 4.0 * (5.0 * t).cos()),
            Body::Cardioid => (1.0 + t.cos(), -t.sin()),
            Body::Trisectrix => {
                let sec = 1.0 / (t / 3.0).cos();
                let r = sec * sec * sec;
                (r, r * (t / 3.0).tan())
            }
            _ => unreachable!("not a polar shape"),
        }
    }

    fn boundary_point(&self, t: f64) -> Point2 {
        match &self.body {
            Body::Circle { radius } => Point2::new(radius * t.cos(), radius * t.sin()),
            Body::HalfPlane { level } => Point2::new(t, *level),
            Body::Rose | Body::Cardioid | Body::Trisectrix => {
                let (r, _) = self.polar(t);
                Point2::new(r * t.cos(), r * t.sin())
            }
            Body::Polygon { .. } => unreachable!("polygons have no parametrisation"),
        }
    }

    fn boundary_speed(&self, t: f64) -> f64 {
        match &self.body {
            Body::Circle { radius } => *radius,
            Body::HalfPlane { .. } => 1.0,
            Body::Cardioid => {
                // sqrt(rho^2 + rho'^2) = sqrt(2 rho)
                (2.0 * (1.0 + t.cos())).max(0.0).sqrt()
            }
            Body::Rose | Body::Trisectrix => {
                let (r, dr) = self.polar(t);
                r.hypot(dr)
            }
            Body::Polygon { .. } => unreachable!("polygons have no parametrisation"),
        }
    }

    /// `∫_Γ f dΓ`: closed form where one is known, otherwise quadrature along
    /// the parametric boundary.
    pub fn exact_integral(&self, field: &ScalarField) -> Result<f64, ShapeError> {
        let param = self
            .boundary_param()
            .ok_or_else(|| ShapeError::NoBoundaryParam(self.name.clone()))?;
        match (&self.body, field.kind) {
            (_, FieldKind::One) if self.exact_length.is_some() => Ok(self.exact_length.unwrap()),
            (_, FieldKind::Constant(c)) if self.exact_length.is_some() => Ok(c * self.exact_length.unwrap()),
            (Body::Cardioid, FieldKind::HZeta(zeta)) if zeta > -1.5 => Ok(cardioid_h_zeta_integral(zeta)),
            _ => Ok(param.integrate(|p| field.eval(p))),
        }
    }

    /// Quadrature value of `∫_Γ f dΓ`, bypassing any closed form.
    pub fn quadrature_integral(&self, field: &ScalarField) -> Result<f64, ShapeError> {
        let param = self
            .boundary_param()
            .ok_or_else(|| ShapeError::NoBoundaryParam(self.name.clone()))?;
        Ok(param.integrate(|p| field.eval(p)))
    }

    /// `n` i.i.d. uniform points on the window, labeled by membership.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<LabeledPoint> {
        let (points, labels) = self.sample_points(n, rng);
        points
            .into_iter()
            .zip(labels)
            .map(|(p, l)| LabeledPoint::new(p, l))
            .collect()
    }

    /// Poisson-input sample: `N ~ Poisson(mean_count)` uniform points.
    pub fn sample_poisson<R: Rng + ?Sized>(&self, mean_count: f64, rng: &mut R) -> Vec<LabeledPoint> {
        let n = poisson_count(mean_count, rng);
        self.sample_uniform(n, rng)
    }

    /// Struct-of-arrays variant of [`ShapeOracle::sample_uniform`].
    pub fn sample_points<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> (Vec<Point2>, Vec<Label>) {
        let w = self.window;
        let mut points = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let x = rng.gen_range(w.x_min..w.x_max);
            let y = rng.gen_range(w.y_min..w.y_max);
            let p = Point2::new(x, y);
            labels.push(self.contains(&p));
            points.push(p);
        }
        (points, labels)
    }
}

/// Draw a Poisson count with the given mean.
pub fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0)
}

/// `√2 ∫₀^{2π} (1 + cos θ)^{1+ζ} dθ` in closed form.
///
/// With `1 + cos θ = 2cos²(θ/2)` and `m = 1 + ζ` the integral is
/// `√2 · 2^{m+1} · √π · Γ(m + ½) / Γ(m + 1)`.
pub fn cardioid_h_zeta_integral(zeta: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let m = 1.0 + zeta;
    let log = (m + 1.0) * 2f64.ln() + 0.5 * PI.ln() + ln_gamma(m + 0.5) - ln_gamma(m + 1.0);
    SQRT_2 * log.exp()
}

fn point_in_polygon(vertices: &[Point2], p: &Point2) -> bool {
    // Even-odd crossing rule.
    let mut inside = false;
    let n = vertices.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (&vertices[i], &vertices[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Which one-sided restriction of `h` is continuous at the boundary; selects
/// the sewing statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContinuityClass {
    Inner,
    Outer,
    Both,
}

impl fmt::Display for ContinuityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContinuityClass::Inner => "inner",
            ContinuityClass::Outer => "outer",
            ContinuityClass::Both => "both",
        })
    }
}

impl std::str::FromStr for ContinuityClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inner" => Ok(Self::Inner),
            "outer" => Ok(Self::Outer),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown continuity class `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FieldKind {
    One,
    Constant(f64),
    /// `(x² + y²)^{(ζ + 1/2)/2}`, i.e. `ρ^{ζ+1/2}`.
    HZeta(f64),
}

/// A scalar field on the window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub kind: FieldKind,
    pub continuity: ContinuityClass,
}

impl ScalarField {
    pub fn one() -> Self {
        Self {
            kind: FieldKind::One,
            continuity: ContinuityClass::Both,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            kind: FieldKind::Constant(c),
            continuity: ContinuityClass::Both,
        }
    }

    /// `h_ζ`. Continuous on the window apart from the origin (a single
    /// boundary point of the cardioid), so it is classed as `Both`.
    pub fn h_zeta(zeta: f64) -> Self {
        Self {
            kind: FieldKind::HZeta(zeta),
            continuity: ContinuityClass::Both,
        }
    }

    /// Field lookup by CLI name.
    pub fn by_name(name: &str, param: Option<f64>) -> Result<Self, ShapeError> {
        match name {
            "one" => Ok(Self::one()),
            "constant" => param
                .map(Self::constant)
                .ok_or_else(|| ShapeError::MissingParameter(name.into())),
            "h_zeta" => param
                .map(Self::h_zeta)
                .ok_or_else(|| ShapeError::MissingParameter(name.into())),
            other => Err(ShapeError::UnknownField(other.into())),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            FieldKind::One => "one".into(),
            FieldKind::Constant(c) => format!("constant({c})"),
            FieldKind::HZeta(z) => format!("h_zeta({z})"),
        }
    }

    pub fn with_continuity(mut self, continuity: ContinuityClass) -> Self {
        self.continuity = continuity;
        self
    }

    #[inline]
    pub fn eval(&self, p: &Point2) -> f64 {
        match self.kind {
            FieldKind::One => 1.0,
            FieldKind::Constant(c) => c,
            FieldKind::HZeta(zeta) => (p.x * p.x + p.y * p.y).powf(0.5 * (zeta + 0.5)),
        }
    }
}
