//! Face-length metrics: planar Euclidean, and great-circle distance for
//! longitude/latitude coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EstimateError;
use crate::geom::{Point2, Rect};

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// How face lengths are measured. In geographic mode `x` is longitude and
/// `y` latitude, both in degrees, and lengths come out in kilometres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Geographic,
}

impl Metric {
    #[inline]
    pub fn length(&self, p: &Point2, q: &Point2) -> f64 {
        match self {
            Metric::Euclidean => p.distance(q),
            Metric::Geographic => law_of_cosines_km(p, q),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Geographic => "geographic",
        })
    }
}

impl std::str::FromStr for Metric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "geographic" => Ok(Metric::Geographic),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

/// Plane in which geographic samples are triangulated.
///
/// `Equirectangular` scales longitude by the cosine of the window's middle
/// latitude so that the triangulation is built in locally isotropic
/// coordinates. `LonLat` triangulates raw degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    #[default]
    Equirectangular,
    #[serde(rename = "lonlat")]
    LonLat,
}

impl Projection {
    /// Map lon/lat points into the triangulation plane.
    pub fn apply(&self, points: &[Point2]) -> Vec<Point2> {
        match self {
            Projection::LonLat => points.to_vec(),
            Projection::Equirectangular => {
                let Some(bb) = Rect::bounding(points.iter().copied()) else {
                    return points.to_vec();
                };
                let k = (0.5 * (bb.y_min + bb.y_max)).to_radians().cos();
                points.iter().map(|p| Point2::new(p.x * k, p.y)).collect()
            }
        }
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Projection::Equirectangular => "equirectangular",
            Projection::LonLat => "lonlat",
        })
    }
}

impl std::str::FromStr for Projection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "equirectangular" => Ok(Projection::Equirectangular),
            "lonlat" => Ok(Projection::LonLat),
            other => Err(format!("unknown projection `{other}`")),
        }
    }
}

/// Spherical law of cosines, `p` and `q` as (longitude, latitude) degrees.
/// The arccos argument is clamped to `[-1, 1]`.
#[inline]
pub fn law_of_cosines_km(p: &Point2, q: &Point2) -> f64 {
    let (phi1, phi2) = (p.y.to_radians(), q.y.to_radians());
    let dlambda = (q.x - p.x).to_radians();
    let c = phi1.sin() * phi2.sin() + phi1.cos() * phi2.cos() * dlambda.cos();
    EARTH_RADIUS_KM * c.clamp(-1.0, 1.0).acos()
}

/// Haversine great-circle distance, same conventions as [`law_of_cosines_km`].
pub fn haversine_km(p: &Point2, q: &Point2) -> f64 {
    let (phi1, phi2) = (p.y.to_radians(), q.y.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (q.x - p.x).to_radians();
    let a = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().min(1.0).asin()
}

/// Great-circle length of a face between two lon/lat points, in kilometres.
pub fn geographic_face_measure(p: &Point2, q: &Point2) -> Result<f64, EstimateError> {
    for lat in [p.y, q.y] {
        if !(-90.0..=90.0).contains(&lat) || lat.is_nan() {
            return Err(EstimateError::LatitudeOutOfRange(lat));
        }
    }
    Ok(law_of_cosines_km(p, q))
}
