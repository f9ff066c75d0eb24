//! Sewing statistics and the calibrated estimators built on them.
//!
//! `I⁻` and `I⁺` are trapezoidal sums of a field over the inner and outer
//! sewings. Their combination `S_n` overestimates `∫_Γ h dΓ` by a universal
//! factor `α₂`, which is calibrated by Monte Carlo on the unit circle and
//! divided out.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delaunay::Triangulation;
use crate::error::EstimateError;
use crate::geom::{Face, Label, LabeledPoint, Point2};
use crate::metric::{Metric, Projection};
use crate::rng;
use crate::sewing::{FaceCounting, Sewing, VertexAttribution};
use crate::shapes::{ContinuityClass, ShapeOracle};
use crate::stats::pairwise_sum;

/// Reference value of `α̂₂` (n = 10⁷, 1000 replications, unit circle).
pub const ALPHA_2: f64 = 1.1820;

/// Trapezoidal sum `Σ_f w(f) · |f| · mean(h on f)` over a face list.
pub fn face_integral(
    faces: &[Face],
    points: &[Point2],
    metric: Metric,
    weight: impl Fn(&Face) -> f64,
    h: impl Fn(usize) -> Option<f64>,
) -> Result<f64, EstimateError> {
    let mut total = 0.0;
    for f in faces {
        let [a, b] = f.vertices().map(|i| i as usize);
        let ha = h(a).ok_or(EstimateError::MissingFieldValue(a))?;
        let hb = h(b).ok_or(EstimateError::MissingFieldValue(b))?;
        total += weight(f) * metric.length(&points[a], &points[b]) * 0.5 * (ha + hb);
    }
    Ok(total)
}

/// `I⁻(h)` over the inner sewing.
pub fn integral_inner(
    sewing: &Sewing,
    points: &[Point2],
    h: &[Option<f64>],
    metric: Metric,
) -> Result<f64, EstimateError> {
    face_integral(&sewing.inner_faces, points, metric, |f| sewing.weight(f), |k| h.get(k).copied().flatten())
}

/// `I⁺(h)` over the outer sewing.
pub fn integral_outer(
    sewing: &Sewing,
    points: &[Point2],
    h: &[Option<f64>],
    metric: Metric,
) -> Result<f64, EstimateError> {
    face_integral(&sewing.outer_faces, points, metric, |f| sewing.weight(f), |k| h.get(k).copied().flatten())
}

/// Vertex-weighted form `Σ_k h(X_k) ξ(X_k)`. Vertices with zero weight may
/// have no field value.
pub fn weighted_sum(xi: &[f64], h: &[Option<f64>]) -> Result<f64, EstimateError> {
    let mut total = 0.0;
    for (k, &w) in xi.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = h.get(k).copied().flatten().ok_or(EstimateError::MissingFieldValue(k))?;
        total += v * w;
    }
    Ok(total)
}

/// `S_n`: the inner, outer or averaged statistic.
#[inline]
pub fn s_n(inner: f64, outer: f64, class: ContinuityClass) -> f64 {
    match class {
        ContinuityClass::Inner => inner,
        ContinuityClass::Outer => outer,
        ContinuityClass::Both => 0.5 * (inner + outer),
    }
}

/// A triangulated, labeled and sewn sample with precomputed weighted face
/// lengths.
///
/// `points` are the measurement coordinates (lon/lat in geographic mode);
/// the triangulation may have been built on projected coordinates.
#[derive(Clone, Debug)]
pub struct SewnSample {
    pub points: Vec<Point2>,
    pub labels: Vec<Label>,
    pub triangulation: Triangulation,
    pub sewing: Sewing,
    pub metric: Metric,
    pub trim_k: usize,
    inner_lengths: Vec<f64>,
    outer_lengths: Vec<f64>,
}

impl SewnSample {
    /// Sample with the default [`FaceCounting`].
    pub fn new(
        points: Vec<Point2>,
        labels: Vec<Label>,
        metric: Metric,
        projection: Projection,
        trim_k: usize,
    ) -> Result<Self, EstimateError> {
        Self::with_counting(points, labels, metric, projection, trim_k, FaceCounting::default())
    }

    pub fn with_counting(
        points: Vec<Point2>,
        labels: Vec<Label>,
        metric: Metric,
        projection: Projection,
        trim_k: usize,
        counting: FaceCounting,
    ) -> Result<Self, EstimateError> {
        if metric == Metric::Geographic {
            if let Some(p) = points.iter().find(|p| !(-90.0..=90.0).contains(&p.y)) {
                return Err(EstimateError::LatitudeOutOfRange(p.y));
            }
        }
        let triangulation = match metric {
            Metric::Geographic => Triangulation::build(&projection.apply(&points))?,
            Metric::Euclidean => Triangulation::build(&points)?,
        };
        let sewing = Sewing::extract(&triangulation, &labels)?
            .with_counting(counting)
            .trimmed(trim_k, &points, metric);
        let lengths = |faces: &[Face]| -> Vec<f64> {
            faces
                .iter()
                .map(|f| {
                    let [a, b] = f.vertices();
                    sewing.weight(f) * metric.length(&points[a as usize], &points[b as usize])
                })
                .collect()
        };
        let inner_lengths = lengths(&sewing.inner_faces);
        let outer_lengths = lengths(&sewing.outer_faces);
        Ok(Self {
            points,
            labels,
            triangulation,
            sewing,
            metric,
            trim_k,
            inner_lengths,
            outer_lengths,
        })
    }

    /// Planar sample measured with the Euclidean metric.
    pub fn planar(points: Vec<Point2>, labels: Vec<Label>, trim_k: usize) -> Result<Self, EstimateError> {
        Self::new(points, labels, Metric::Euclidean, Projection::LonLat, trim_k)
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn has_boundary(&self) -> bool {
        let first = self.labels.first().copied();
        self.labels.iter().any(|&l| Some(l) != first)
    }

    fn side(faces: &[Face], lengths: &[f64], h: &impl Fn(usize) -> Option<f64>) -> Result<f64, EstimateError> {
        let mut total = 0.0;
        for (f, len) in faces.iter().zip(lengths) {
            let [a, b] = f.vertices().map(|i| i as usize);
            let ha = h(a).ok_or(EstimateError::MissingFieldValue(a))?;
            let hb = h(b).ok_or(EstimateError::MissingFieldValue(b))?;
            total += len * 0.5 * (ha + hb);
        }
        Ok(total)
    }

    /// `(I⁻(h), I⁺(h))` for a field given per point index.
    pub fn integrals_with(&self, h: impl Fn(usize) -> Option<f64>) -> Result<(f64, f64), EstimateError> {
        Ok((
            Self::side(&self.sewing.inner_faces, &self.inner_lengths, &h)?,
            Self::side(&self.sewing.outer_faces, &self.outer_lengths, &h)?,
        ))
    }

    /// `I⁻(h)` only; outer vertices need no field value.
    pub fn inner_with(&self, h: impl Fn(usize) -> Option<f64>) -> Result<f64, EstimateError> {
        Self::side(&self.sewing.inner_faces, &self.inner_lengths, &h)
    }

    /// `I⁺(h)` only.
    pub fn outer_with(&self, h: impl Fn(usize) -> Option<f64>) -> Result<f64, EstimateError> {
        Self::side(&self.sewing.outer_faces, &self.outer_lengths, &h)
    }

    /// `(I⁻(𝟙), I⁺(𝟙))`: the sewing lengths.
    pub fn lengths(&self) -> (f64, f64) {
        (self.inner_lengths.iter().sum(), self.outer_lengths.iter().sum())
    }

    pub fn attribution(&self) -> VertexAttribution {
        self.sewing.attribute(&self.points, self.metric)
    }
}

/// Result of calibrating `α̂₂` on a shape of known boundary length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub alpha_hat: f64,
    pub d: u32,
    pub shape_name: String,
    pub n: usize,
    pub replications: usize,
    pub seed: Option<u64>,
    /// `None` when a single replication gives no spread.
    pub std_error: Option<f64>,
    /// Same calibration using the inner or outer sewing alone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_outer: Option<f64>,
    /// Face counting the constant was calibrated under. Estimates made
    /// with this constant use the same counting.
    #[serde(default)]
    pub counting: FaceCounting,
}

impl CalibrationResult {
    /// A fixed constant, by default the published `α̂₂`.
    pub fn constant(alpha_hat: f64) -> Self {
        Self {
            alpha_hat,
            d: 2,
            shape_name: "unit_circle".into(),
            n: 10_000_000,
            replications: 1000,
            seed: None,
            std_error: None,
            alpha_inner: None,
            alpha_outer: None,
            counting: FaceCounting::Incidence,
        }
    }

    pub fn check(&self) -> Result<(), EstimateError> {
        if self.d != 2 {
            return Err(EstimateError::UnsupportedDimension(self.d));
        }
        if !(self.alpha_hat.is_finite() && self.alpha_hat > 0.0) {
            return Err(EstimateError::InvalidArgument(format!("alpha_hat {} must be positive", self.alpha_hat)));
        }
        Ok(())
    }
}

impl Default for CalibrationResult {
    fn default() -> Self {
        Self::constant(ALPHA_2)
    }
}

/// Monte Carlo calibration: `α̂ = mean(S_n(𝟙, Γ⁰)) / |Γ⁰|` with `S_n` the
/// averaged statistic. Replication `r` uses stream `(seed, r)`, so the result
/// does not depend on scheduling.
pub fn calibrate_alpha(
    shape: &ShapeOracle,
    n: usize,
    replications: usize,
    seed: u64,
) -> Result<CalibrationResult, EstimateError> {
    calibrate_alpha_with(shape, n, replications, seed, FaceCounting::default())
}

pub fn calibrate_alpha_with(
    shape: &ShapeOracle,
    n: usize,
    replications: usize,
    seed: u64,
    counting: FaceCounting,
) -> Result<CalibrationResult, EstimateError> {
    let length = shape
        .exact_length()
        .ok_or_else(|| EstimateError::NoExactLength(shape.name().to_string()))?;
    if replications == 0 {
        return Err(EstimateError::InvalidArgument("replications must be at least 1".into()));
    }
    if n < 3 {
        return Err(EstimateError::InvalidArgument(format!("n = {n} is too small")));
    }
    let per_rep: Vec<(f64, f64)> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng::stream(seed, r as u64);
            let (points, labels) = shape.sample_points(n, &mut rng);
            let sewn = SewnSample::with_counting(points, labels, Metric::Euclidean, Projection::LonLat, 0, counting)?;
            Ok(sewn.lengths())
        })
        .collect::<Result<_, EstimateError>>()?;
    let both: Vec<f64> = per_rep.iter().map(|&(i, o)| s_n(i, o, ContinuityClass::Both)).collect();
    let inner: Vec<f64> = per_rep.iter().map(|&(i, _)| i).collect();
    let outer: Vec<f64> = per_rep.iter().map(|&(_, o)| o).collect();
    let reps = replications as f64;
    let mean = pairwise_sum(&both) / reps;
    let std_error = if replications > 1 {
        let dev: Vec<f64> = both.iter().map(|v| (v - mean) * (v - mean)).collect();
        let sd = (pairwise_sum(&dev) / (reps - 1.0)).sqrt();
        Some(sd / (reps.sqrt() * length))
    } else {
        None
    };
    Ok(CalibrationResult {
        alpha_hat: mean / length,
        d: 2,
        shape_name: shape.name().to_string(),
        n,
        replications,
        seed: Some(seed),
        std_error,
        alpha_inner: Some(pairwise_sum(&inner) / reps / length),
        alpha_outer: Some(pairwise_sum(&outer) / reps / length),
        counting,
    })
}

/// Pipeline settings for [`estimate_surface_integral`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub class: ContinuityClass,
    pub trim_k: usize,
    pub metric: Metric,
    pub projection: Projection,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            class: ContinuityClass::Both,
            trim_k: 0,
            metric: Metric::Euclidean,
            projection: Projection::Equirectangular,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub inner_value: f64,
    pub outer_value: f64,
    pub combined: f64,
    pub calibrated: f64,
    pub continuity_class: ContinuityClass,
    pub n: usize,
    pub trim_k: usize,
    pub metric: Metric,
    pub alpha_hat: f64,
    pub inner_faces: usize,
    pub outer_faces: usize,
}

fn split_sample(sample: &[LabeledPoint]) -> (Vec<Point2>, Vec<Label>, Vec<Option<f64>>) {
    let points = sample.iter().map(|p| p.position).collect();
    let labels = sample.iter().map(|p| p.label).collect();
    let values = sample.iter().map(|p| p.field_value).collect();
    (points, labels, values)
}

fn check_sample(sample: &[LabeledPoint]) -> Result<(), EstimateError> {
    let Some(first) = sample.first() else {
        return Err(EstimateError::NoBoundary);
    };
    if sample.iter().all(|p| p.label == first.label) {
        return Err(EstimateError::NoBoundary);
    }
    Ok(())
}

/// Full pipeline: triangulate, sew, trim, integrate and calibrate.
///
/// Field values are read from [`LabeledPoint::field_value`]; only vertices
/// of faces entering the selected statistic need one.
pub fn estimate_surface_integral(
    sample: &[LabeledPoint],
    alpha: &CalibrationResult,
    options: &EstimateOptions,
) -> Result<EstimateReport, EstimateError> {
    alpha.check()?;
    check_sample(sample)?;
    let (points, labels, values) = split_sample(sample);
    let sewn = SewnSample::with_counting(
        points,
        labels,
        options.metric,
        options.projection,
        options.trim_k,
        alpha.counting,
    )?;
    let h = |k: usize| values[k];
    let (inner, outer) = match options.class {
        ContinuityClass::Both => sewn.integrals_with(h)?,
        ContinuityClass::Inner => (sewn.inner_with(h)?, f64::NAN),
        ContinuityClass::Outer => (f64::NAN, sewn.outer_with(h)?),
    };
    let combined = s_n(inner, outer, options.class);
    Ok(EstimateReport {
        inner_value: inner,
        outer_value: outer,
        combined,
        calibrated: combined / alpha.alpha_hat,
        continuity_class: options.class,
        n: sewn.n(),
        trim_k: options.trim_k,
        metric: options.metric,
        alpha_hat: alpha.alpha_hat,
        inner_faces: sewn.sewing.inner_faces.len(),
        outer_faces: sewn.sewing.outer_faces.len(),
    })
}

/// Boundary length and `h`-moments along the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMoments {
    /// `(I⁻(𝟙) + I⁺(𝟙)) / (2α̂)`.
    pub length: f64,
    /// `I⁻(h) / I⁻(𝟙)`.
    pub h_bar: f64,
    /// `√(I⁻((h − h̄)²) / I⁻(𝟙))`.
    pub s_h: f64,
    pub inner_length: f64,
    pub outer_length: f64,
}

/// Moments from an already sewn sample; `h` is only read at inside vertices.
/// The sample's own face counting is used.
pub fn moments_of(
    sewn: &SewnSample,
    alpha: &CalibrationResult,
    h: impl Fn(usize) -> Option<f64>,
) -> Result<BoundaryMoments, EstimateError> {
    alpha.check()?;
    let (inner_length, outer_length) = sewn.lengths();
    if sewn.sewing.inner_faces.is_empty() || inner_length <= 0.0 {
        return Err(EstimateError::EmptyInnerSewing);
    }
    // Shift by one sewing value first, so a constant field gives exact moments.
    let [v0, _] = sewn.sewing.inner_faces[0].vertices();
    let shift = h(v0 as usize).ok_or(EstimateError::MissingFieldValue(v0 as usize))?;
    let h_bar = shift + sewn.inner_with(|k| h(k).map(|v| v - shift))? / inner_length;
    let var = sewn.inner_with(|k| h(k).map(|v| (v - h_bar) * (v - h_bar)))? / inner_length;
    Ok(BoundaryMoments {
        length: (inner_length + outer_length) / (2.0 * alpha.alpha_hat),
        h_bar,
        s_h: var.max(0.0).sqrt(),
        inner_length,
        outer_length,
    })
}

/// Length of `Γ` and the mean and standard deviation of `h` along it.
pub fn boundary_moments(
    sample: &[LabeledPoint],
    alpha: &CalibrationResult,
    trim_k: usize,
    metric: Metric,
    projection: Projection,
) -> Result<BoundaryMoments, EstimateError> {
    check_sample(sample)?;
    let (points, labels, values) = split_sample(sample);
    let sewn = SewnSample::with_counting(points, labels, metric, projection, trim_k, alpha.counting)?;
    moments_of(&sewn, alpha, |k| values[k])
}
