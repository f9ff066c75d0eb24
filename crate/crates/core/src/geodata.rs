//! Labeled longitude/latitude point clouds: loading, saving, coastline
//! analysis, and synthetic coasts with analytically known answers.
//!
//! Land points form the body `G`, elevation is the field `h`, and `h` is
//! assumed continuous on land, so moments use the inner sewing only.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::GeoDataError;
use crate::estimators::{moments_of, CalibrationResult, SewnSample};
use crate::geom::{Label, LabeledPoint, Point2, Rect};
use crate::metric::{Metric, Projection, EARTH_RADIUS_KM};
use crate::quadrature;

/// Trim count used for open coastlines: the two longest faces per sewing.
pub const DEFAULT_TRIM: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoRecord {
    pub lon: f64,
    pub lat: f64,
    pub land: bool,
    pub elevation: f64,
}

impl GeoRecord {
    pub fn position(&self) -> Point2 {
        Point2::new(self.lon, self.lat)
    }

    pub fn label(&self) -> Label {
        Label::from_inside(self.land)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeoFormat {
    Csv,
    Jsonl,
}

impl GeoFormat {
    /// Guess from the file extension (`.jsonl`/`.ndjson`, else CSV).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson") => GeoFormat::Jsonl,
            _ => GeoFormat::Csv,
        }
    }
}

impl std::str::FromStr for GeoFormat {
    type Err = GeoDataError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(GeoFormat::Csv),
            "jsonl" | "json-lines" | "ndjson" => Ok(GeoFormat::Jsonl),
            other => Err(GeoDataError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoSample {
    pub records: Vec<GeoRecord>,
    pub window: Rect,
    pub open_curve: bool,
}

fn check_record(r: &GeoRecord, line: u64) -> Result<(), GeoDataError> {
    if !r.lon.is_finite() || !r.lat.is_finite() || !r.elevation.is_finite() {
        return Err(GeoDataError::Malformed {
            line,
            message: "non-finite value".into(),
        });
    }
    if !(-90.0..=90.0).contains(&r.lat) {
        return Err(GeoDataError::LatitudeOutOfRange { line, lat: r.lat });
    }
    Ok(())
}

impl GeoSample {
    /// Validate records; the window defaults to their bounding box.
    /// `lines[i]` is the source line of record `i`, used in error messages.
    fn from_records(records: Vec<GeoRecord>, window: Option<Rect>, lines: &[u64]) -> Result<Self, GeoDataError> {
        for (i, r) in records.iter().enumerate() {
            check_record(r, lines.get(i).copied().unwrap_or(i as u64 + 1))?;
        }
        if records.is_empty() {
            return Err(GeoDataError::Empty);
        }
        let window = match window {
            Some(w) => {
                if let Some(i) = records.iter().position(|r| !w.contains(&r.position())) {
                    return Err(GeoDataError::OutsideWindow {
                        line: lines.get(i).copied().unwrap_or(i as u64 + 1),
                    });
                }
                w
            }
            None => Rect::bounding(records.iter().map(GeoRecord::position)).ok_or_else(|| GeoDataError::Malformed {
                line: 0,
                message: "records do not span a rectangle".into(),
            })?,
        };
        Ok(Self {
            records,
            window,
            open_curve: true,
        })
    }

    pub fn new(records: Vec<GeoRecord>, window: Option<Rect>) -> Result<Self, GeoDataError> {
        Self::from_records(records, window, &[])
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Same sample with land and sea swapped.
    pub fn flipped(&self) -> Self {
        let mut s = self.clone();
        s.records.iter_mut().for_each(|r| r.land = !r.land);
        s
    }

    /// Records sorted by (lon, lat, label, elevation).
    pub fn canonical_records(&self) -> Vec<GeoRecord> {
        let mut v = self.records.clone();
        v.sort_by(|a, b| {
            a.lon
                .total_cmp(&b.lon)
                .then(a.lat.total_cmp(&b.lat))
                .then(a.land.cmp(&b.land))
                .then(a.elevation.total_cmp(&b.elevation))
        });
        v
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("lon,lat,label,elevation\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{}", r.lon, r.lat, u8::from(r.land), r.elevation);
        }
        out
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let row = JsonRow {
                lon: r.lon,
                lat: r.lat,
                label: u8::from(r.land),
                elevation: r.elevation,
            };
            out.push_str(&serde_json::to_string(&row).expect("plain struct"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path, format: GeoFormat) -> Result<(), GeoDataError> {
        let text = match format {
            GeoFormat::Csv => self.to_csv_string(),
            GeoFormat::Jsonl => self.to_jsonl_string(),
        };
        std::fs::write(path, text).map_err(|source| GeoDataError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    lon: f64,
    lat: f64,
    label: u8,
    elevation: f64,
}

fn parse_label(s: &str, line: u64) -> Result<bool, GeoDataError> {
    match s.trim() {
        "1" => Ok(true),
        "0" => Ok(false),
        other => Err(GeoDataError::Malformed {
            line,
            message: format!("label must be 0 or 1, got `{other}`"),
        }),
    }
}

fn parse_num(s: &str, what: &str, line: u64) -> Result<f64, GeoDataError> {
    s.trim().parse().map_err(|_| GeoDataError::Malformed {
        line,
        message: format!("cannot parse {what} `{}`", s.trim()),
    })
}

/// Parse `lon,lat,label,elevation` rows. A header line and `#` comments are
/// skipped.
pub fn parse_csv(reader: impl BufRead) -> Result<(Vec<GeoRecord>, Vec<u64>), GeoDataError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row = row.map_err(|e| GeoDataError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && row.get(0).is_some_and(|f| f.eq_ignore_ascii_case("lon")) {
            continue;
        }
        if row.len() == 1 && row.get(0) == Some("") {
            continue;
        }
        if row.len() != 4 {
            return Err(GeoDataError::Malformed {
                line,
                message: format!("expected 4 fields, found {}", row.len()),
            });
        }
        let rec = GeoRecord {
            lon: parse_num(&row[0], "longitude", line)?,
            lat: parse_num(&row[1], "latitude", line)?,
            land: parse_label(&row[2], line)?,
            elevation: parse_num(&row[3], "elevation", line)?,
        };
        check_record(&rec, line)?;
        records.push(rec);
        lines.push(line);
    }
    Ok((records, lines))
}

/// Parse one JSON object per line: `{"lon":..,"lat":..,"label":0|1,"elevation":..}`.
pub fn parse_jsonl(reader: impl BufRead) -> Result<(Vec<GeoRecord>, Vec<u64>), GeoDataError> {
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (i, text) in reader.lines().enumerate() {
        let line = i as u64 + 1;
        let text = text.map_err(|e| GeoDataError::Malformed {
            line,
            message: e.to_string(),
        })?;
        if text.trim().is_empty() {
            continue;
        }
        let row: JsonRow = serde_json::from_str(&text).map_err(|e| GeoDataError::Malformed {
            line,
            message: e.to_string(),
        })?;
        let rec = GeoRecord {
            lon: row.lon,
            lat: row.lat,
            land: parse_label(&row.label.to_string(), line)?,
            elevation: row.elevation,
        };
        check_record(&rec, line)?;
        records.push(rec);
        lines.push(line);
    }
    Ok((records, lines))
}

/// Load a sample; `format` defaults to the extension's guess.
pub fn load(path: &Path, format: Option<GeoFormat>, window: Option<Rect>) -> Result<GeoSample, GeoDataError> {
    let file = std::fs::File::open(path).map_err(|source| GeoDataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = std::io::BufReader::new(file);
    let (records, lines) = match format.unwrap_or_else(|| GeoFormat::from_path(path)) {
        GeoFormat::Csv => parse_csv(reader)?,
        GeoFormat::Jsonl => parse_jsonl(reader)?,
    };
    GeoSample::from_records(records, window, &lines)
}

/// Planar labeled points from CSV rows `x,y,label[,h]` (label 1 = inside,
/// `h` may be omitted or empty). A header line and `#` comments are skipped.
pub fn load_labeled_points(path: &Path) -> Result<Vec<LabeledPoint>, GeoDataError> {
    let file = std::fs::File::open(path).map_err(|source| GeoDataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_labeled_points(std::io::BufReader::new(file))
}

pub fn parse_labeled_points(reader: impl BufRead) -> Result<Vec<LabeledPoint>, GeoDataError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in csv.records().enumerate() {
        let row = row.map_err(|e| GeoDataError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(i as u64 + 1, |p| p.line());
        if i == 0 && row.get(0).is_some_and(|f| f.eq_ignore_ascii_case("x")) {
            continue;
        }
        if !(3..=4).contains(&row.len()) {
            return Err(GeoDataError::Malformed {
                line,
                message: format!("expected x,y,label[,h], found {} fields", row.len()),
            });
        }
        let x = parse_num(&row[0], "x", line)?;
        let y = parse_num(&row[1], "y", line)?;
        let inside = parse_label(&row[2], line)?;
        let h = match row.get(3) {
            Some(v) if !v.is_empty() => Some(parse_num(v, "h", line)?),
            _ => None,
        };
        if !x.is_finite() || !y.is_finite() || h.is_some_and(|v| !v.is_finite()) {
            return Err(GeoDataError::Malformed {
                line,
                message: "non-finite value".into(),
            });
        }
        out.push(LabeledPoint {
            position: Point2::new(x, y),
            label: Label::from_inside(inside),
            field_value: h,
        });
    }
    if out.is_empty() {
        return Err(GeoDataError::Empty);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    pub trim_k: usize,
    pub projection: Projection,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            trim_k: DEFAULT_TRIM,
            projection: Projection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoastlineReport {
    pub length_km: f64,
    pub h_bar_m: f64,
    pub s_h_m: f64,
    pub inner_length_km: f64,
    pub outer_length_km: f64,
    pub n: usize,
    pub land_points: usize,
    pub trim_k: usize,
    pub projection: Projection,
    pub alpha_hat: f64,
    pub inner_faces: usize,
    pub outer_faces: usize,
}

/// Coastline length and elevation moments along the waterfront.
///
/// Records are sorted canonically first, so the report does not depend on
/// file order. Sea elevations are never read.
pub fn analyze(
    sample: &GeoSample,
    alpha: &CalibrationResult,
    options: &AnalyzeOptions,
) -> Result<CoastlineReport, GeoDataError> {
    let records = sample.canonical_records();
    let land_points = records.iter().filter(|r| r.land).count();
    if land_points == 0 || land_points == records.len() {
        return Err(crate::error::EstimateError::NoBoundary.into());
    }
    let points = records.iter().map(GeoRecord::position).collect();
    let labels = records.iter().map(GeoRecord::label).collect();
    let sewn = SewnSample::with_counting(
        points,
        labels,
        Metric::Geographic,
        options.projection,
        options.trim_k,
        alpha.counting,
    )?;
    let m = moments_of(&sewn, alpha, |k| records[k].land.then_some(records[k].elevation))?;
    Ok(CoastlineReport {
        length_km: m.length,
        h_bar_m: m.h_bar,
        s_h_m: m.s_h,
        inner_length_km: m.inner_length,
        outer_length_km: m.outer_length,
        n: records.len(),
        land_points,
        trim_k: options.trim_k,
        projection: options.projection,
        alpha_hat: alpha.alpha_hat,
        inner_faces: sewn.sewing.inner_faces.len(),
        outer_faces: sewn.sewing.outer_faces.len(),
    })
}

/// A coastline `lat = φ(lon)` crossing the window from west to east, with
/// land to the south.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SyntheticCoast {
    Straight { lat: f64 },
    Sinusoidal { mid_lat: f64, amplitude: f64, waves: f64 },
}

/// Land elevation in metres as a function of (lon, lat).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Elevation {
    Constant { value: f64 },
    /// `base + per_lon·(lon − lon₀) + per_lat·(lat − lat₀)`, from the window's
    /// south-west corner.
    Ramp { base: f64, per_lon: f64, per_lat: f64 },
}

impl Elevation {
    pub fn eval(&self, window: &Rect, lon: f64, lat: f64) -> f64 {
        match *self {
            Elevation::Constant { value } => value,
            Elevation::Ramp { base, per_lon, per_lat } => {
                base + per_lon * (lon - window.x_min) + per_lat * (lat - window.y_min)
            }
        }
    }
}

/// The window of the Aral Sea study area.
pub fn aral_window() -> Rect {
    Rect::new(58.9, 59.27, 45.9, 46.04).expect("static window")
}

impl SyntheticCoast {
    pub fn latitude(&self, lon: f64, window: &Rect) -> f64 {
        match *self {
            SyntheticCoast::Straight { lat } => lat,
            SyntheticCoast::Sinusoidal { mid_lat, amplitude, waves } => {
                let t = (lon - window.x_min) / window.width();
                mid_lat + amplitude * (std::f64::consts::TAU * waves * t).sin()
            }
        }
    }

    fn slope(&self, lon: f64, window: &Rect) -> f64 {
        match *self {
            SyntheticCoast::Straight { .. } => 0.0,
            SyntheticCoast::Sinusoidal { amplitude, waves, .. } => {
                let w = std::f64::consts::TAU * waves / window.width();
                amplitude * w * (w * (lon - window.x_min)).cos()
            }
        }
    }

    /// Line element in km per degree of longitude on the sphere.
    fn speed_km(&self, lon: f64, window: &Rect) -> f64 {
        let phi = self.latitude(lon, window).to_radians();
        let dphi = self.slope(lon, window);
        EARTH_RADIUS_KM * std::f64::consts::PI / 180.0 * (phi.cos().powi(2) + dphi * dphi).sqrt()
    }

    /// Length of the coast inside `window` on the sphere, by quadrature.
    pub fn length_km(&self, window: &Rect) -> f64 {
        quadrature::integrate(|lon| self.speed_km(lon, window), window.x_min, window.x_max, 1e-10)
    }

    /// Mean of `elevation` along the coast, by quadrature.
    pub fn mean_elevation(&self, window: &Rect, elevation: &Elevation) -> f64 {
        let weighted = quadrature::integrate(
            |lon| elevation.eval(window, lon, self.latitude(lon, window)) * self.speed_km(lon, window),
            window.x_min,
            window.x_max,
            1e-10,
        );
        weighted / self.length_km(window)
    }

    /// `n` points uniform in lon/lat over `window`. Sea points get elevation 0.
    pub fn generate<R: Rng + ?Sized>(&self, window: &Rect, n: usize, elevation: &Elevation, rng: &mut R) -> GeoSample {
        let records = (0..n)
            .map(|_| {
                let lon = rng.gen_range(window.x_min..window.x_max);
                let lat = rng.gen_range(window.y_min..window.y_max);
                let land = lat < self.latitude(lon, window);
                GeoRecord {
                    lon,
                    lat,
                    land,
                    elevation: if land { elevation.eval(window, lon, lat) } else { 0.0 },
                }
            })
            .collect();
        GeoSample {
            records,
            window: *window,
            open_curve: true,
        }
    }
}
