use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("points are collinear")]
    Collinear,
    #[error("triangle is not counterclockwise")]
    NotCounterClockwise,
    #[error("index {index} out of bounds for {len} points")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("invalid rectangle [{x_min}, {x_max}] x [{y_min}, {y_max}]")]
    InvalidRect {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TriangulationError {
    #[error("degenerate sample: {0}")]
    Degenerate(String),
    #[error("duplicate point: indices {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("too many points for 32-bit indices: {0}")]
    TooManyPoints(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("field `{0}` requires a parameter")]
    MissingParameter(String),
    #[error("shape `{0}` has no parametric boundary")]
    NoBoundaryParam(String),
    #[error("polygon needs at least 3 vertices, got {0}")]
    PolygonTooSmall(usize),
    #[error("polygon file {path}: {message}")]
    PolygonFile { path: PathBuf, message: String },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SewingError {
    #[error("label count {labels} does not match point count {points}")]
    LengthMismatch { labels: usize, points: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("no field value at vertex {0}, which lies on a sewing face")]
    MissingFieldValue(usize),
    #[error("no boundary detected: every sample point carries the same label")]
    NoBoundary,
    #[error("inner sewing is empty")]
    EmptyInnerSewing,
    #[error("shape `{0}` has no known boundary length")]
    NoExactLength(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("latitude {0} is outside [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("calibration is for dimension {0}; only d = 2 is supported")]
    UnsupportedDimension(u32),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Sewing(#[from] SewingError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

#[derive(Debug, Error)]
pub enum GeoDataError {
    #[error("{path}: cannot read: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: latitude {lat} is outside [-90, 90]")]
    LatitudeOutOfRange { line: u64, lat: f64 },
    #[error("line {line}: record lies outside the declared window")]
    OutsideWindow { line: u64 },
    #[error("input contains no records")]
    Empty,
    #[error("unknown format `{0}` (expected csv or jsonl)")]
    UnknownFormat(String),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}
