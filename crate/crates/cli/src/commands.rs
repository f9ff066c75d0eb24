use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use log::warn;
use serde::Serialize;
use serde_json::json;

use boundary_sewing::error::EstimateError;
use boundary_sewing::estimators::{self, CalibrationResult, EstimateOptions, SewnSample, ALPHA_2};
use boundary_sewing::experiments::{self, ExperimentSpec, Scale, TableConfig, TableId};
use boundary_sewing::geodata::{self, AnalyzeOptions, Elevation, GeoFormat, SyntheticCoast};
use boundary_sewing::geom::{LabeledPoint, Rect};
use boundary_sewing::metric::{Metric, Projection};
use boundary_sewing::shapes::{ContinuityClass, ScalarField, ShapeOracle};
use boundary_sewing::sewing::FaceCounting;
use boundary_sewing::{delaunay::Triangulation, rng, svg};

use crate::output::{self, envelope, pretty, write_file, RunConfig};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "sewing", version, about = "Boundary length and surface integral estimation from labeled samples")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo calibration of the sewing constant on a shape of known length.
    Calibrate(CalibrateArgs),
    /// One estimate from a simulated sample or a point file.
    Estimate(EstimateArgs),
    /// Replicated experiments, including the published tables.
    Simulate(SimulateArgs),
    /// Coastline length and elevation moments from a lon/lat point file.
    AnalyzeGeo(AnalyzeGeoArgs),
    /// Delaunay triangulation of a point file or simulated sample.
    Triangulate(TriangulateArgs),
    /// Write a synthetic coast sample with known length.
    SynthCoast(SynthCoastArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AlphaArgs {
    /// Calibration constant to divide by.
    #[arg(long, conflicts_with = "alpha")]
    pub alpha_const: Option<f64>,
    /// Calibration JSON written by `sewing calibrate`.
    #[arg(long)]
    pub alpha: Option<PathBuf>,
    /// Face counting for a constant: incidence (a face shared by two mixed
    /// triangles counts twice) or set. A calibration file carries its own.
    #[arg(long, conflicts_with = "alpha")]
    pub face_counting: Option<FaceCounting>,
}

impl AlphaArgs {
    fn resolve(&self) -> Result<CalibrationResult, CliError> {
        if let Some(path) = &self.alpha {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let c: CalibrationResult =
                serde_json::from_str(&text).with_context(|| format!("{} is not a calibration file", path.display()))?;
            c.check()?;
            return Ok(c);
        }
        let c = CalibrationResult {
            counting: self.face_counting.unwrap_or_default(),
            ..CalibrationResult::constant(self.alpha_const.unwrap_or(ALPHA_2))
        };
        c.check().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(c)
    }
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        warn!("--seed not given; using 0");
        0
    })
}

fn field_from(name: &str, param: Option<f64>) -> Result<ScalarField, CliError> {
    ScalarField::by_name(name, param).map_err(|e| CliError::Usage(e.to_string()))
}

fn shape_from(name: &str) -> Result<ShapeOracle, CliError> {
    ShapeOracle::catalog(name).map_err(|e| CliError::Usage(format!("{e}; known shapes: {}", ShapeOracle::catalog_names().join(", "))))
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    let [a, b, c, d] = v[..] else {
        return Err("expected x_min,x_max,y_min,y_max".into());
    };
    Rect::new(a, b, c, d).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CalibrateArgs {
    #[arg(long, default_value = "unit_circle")]
    pub shape: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    /// Full-scale calibration: n = 10⁷, 1000 replications.
    #[arg(long)]
    pub paper_scale: bool,
    /// Write the calibration JSON here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// incidence or set.
    #[arg(long, default_value = "incidence")]
    pub face_counting: FaceCounting,
}

fn calibrate(mut a: CalibrateArgs) -> Result<(), CliError> {
    if a.paper_scale {
        a.n = 10_000_000;
        a.reps = 1000;
        warn!("paper scale: 1000 samples of 10^7 points, expect hours of CPU time");
    }
    if a.reps == 0 || a.n < 3 {
        return Err(CliError::Usage("--reps must be positive and --n at least 3".into()));
    }
    let shape = shape_from(&a.shape)?;
    let result = estimators::calibrate_alpha_with(&shape, a.n, a.reps, a.seed, a.face_counting)?;
    let config = RunConfig {
        subcommand: "calibrate",
        args: a.clone(),
    };
    let text = pretty(&envelope(&config, &result));
    print!("{text}");
    if let Some(path) = a.out.clone().or_else(|| output::out_dir(None, None).map(|d| d.join("calibration.json"))) {
        write_file(&path, &text)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// Simulate from a cataloged shape.
    #[arg(long, conflicts_with = "input")]
    pub shape: Option<String>,
    /// CSV of `x,y,label[,h]`; missing `h` values come from --field.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "one")]
    pub field: String,
    #[arg(long)]
    pub param: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draw a Poisson(n) number of points.
    #[arg(long)]
    pub poisson: bool,
    /// inner, outer or both (default: the field's class).
    #[arg(long)]
    pub class: Option<ContinuityClass>,
    /// Longest faces removed per sewing (default 2 for open curves, else 0).
    #[arg(long)]
    pub trim: Option<usize>,
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
    #[arg(long, default_value = "equirectangular")]
    pub projection: Projection,
    #[command(flatten)]
    #[serde(flatten)]
    pub alpha: AlphaArgs,
    /// Directory for estimate.json, estimate.csv (and estimate.svg).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub svg: bool,
}

fn estimate(mut a: EstimateArgs) -> Result<(), CliError> {
    let field = field_from(&a.field, a.param)?;
    let alpha = a.alpha.resolve()?;
    let (sample, window, truth, open) = match (&a.shape, &a.input) {
        (Some(name), None) => {
            let shape = shape_from(name)?;
            let seed = seed_or_default(a.seed);
            a.seed = Some(seed);
            let mut g = rng::stream(seed, 0);
            let mut sample = if a.poisson {
                shape.sample_poisson(a.n as f64, &mut g)
            } else {
                shape.sample_uniform(a.n, &mut g)
            };
            for p in &mut sample {
                p.field_value = Some(field.eval(&p.position));
            }
            (sample, shape.window(), shape.exact_integral(&field).ok(), shape.open_curve())
        }
        (None, Some(path)) => {
            let mut sample = geodata::load_labeled_points(path)?;
            for p in &mut sample {
                p.field_value.get_or_insert_with(|| field.eval(&p.position));
            }
            let window = Rect::bounding(sample.iter().map(|p| p.position))
                .ok_or_else(|| anyhow::anyhow!("{}: points do not span a rectangle", path.display()))?;
            (sample, window, None, false)
        }
        _ => return Err(CliError::Usage("give exactly one of --shape or --input".into())),
    };
    let trim_k = *a.trim.get_or_insert(if open { 2 } else { 0 });
    let class = *a.class.get_or_insert(field.continuity);
    let options = EstimateOptions {
        class,
        trim_k,
        metric: a.metric,
        projection: a.projection,
    };
    let report = estimators::estimate_surface_integral(&sample, &alpha, &options)?;
    let config = RunConfig {
        subcommand: "estimate",
        args: a.clone(),
    };
    let mut doc = envelope(&config, &report);
    doc["true_value"] = json!(truth);
    let text = pretty(&doc);
    print!("{text}");
    if let Some(dir) = output::out_dir(a.out_dir.as_deref(), None) {
        write_file(&dir.join("estimate.json"), &text)?;
        let mut csv = comment_lines(&config);
        csv.push_str("n,inner,outer,s_n,calibrated,alpha_hat,class,trim_k,metric,true_value\n");
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            report.n,
            report.inner_value,
            report.outer_value,
            report.combined,
            report.calibrated,
            report.alpha_hat,
            report.continuity_class,
            report.trim_k,
            report.metric,
            truth.map(|t| t.to_string()).unwrap_or_default()
        ));
        write_file(&dir.join("estimate.csv"), &csv)?;
        if a.svg {
            write_file(&dir.join("estimate.svg"), &render_svg(&sample, &window, &options, &alpha, &config)?)?;
        }
    } else if a.svg {
        return Err(CliError::Usage("--svg needs --out-dir or SEWING_OUT_DIR".into()));
    }
    Ok(())
}

fn render_svg<T: Serialize>(
    sample: &[LabeledPoint],
    window: &Rect,
    options: &EstimateOptions,
    alpha: &CalibrationResult,
    config: &RunConfig<T>,
) -> Result<String, CliError> {
    let points = sample.iter().map(|p| p.position).collect();
    let labels: Vec<_> = sample.iter().map(|p| p.label).collect();
    let sewn = SewnSample::with_counting(
        points,
        labels.clone(),
        options.metric,
        options.projection,
        options.trim_k,
        alpha.counting,
    )?;
    let opts = svg::SvgOptions {
        draw_triangles: sewn.n() <= 20_000,
        draw_points: sewn.n() <= 20_000,
        ..Default::default()
    };
    let body = svg::render(window, &sewn.triangulation, &labels, &sewn.sewing, &opts);
    Ok(with_svg_comment(&body, config))
}

/// Insert the version and config as an XML comment after the prolog line.
fn with_svg_comment<T: Serialize>(body: &str, config: &RunConfig<T>) -> String {
    let comment = format!(
        "<!-- sewing {} config: {} -->\n",
        output::VERSION,
        config.to_value().to_string().replace("--", "-\\-")
    );
    body.replacen('\n', &format!("\n{comment}"), 1)
}

/// `# ` prefixed header lines for CSV artifacts.
fn comment_lines<T: Serialize>(config: &RunConfig<T>) -> String {
    config.csv_comments().iter().map(|c| format!("# {c}\n")).collect()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Reproduce a published table (1, 2 or 3).
    #[arg(long)]
    pub table: Option<TableId>,
    #[arg(long, default_value = "desk")]
    pub scale: Scale,
    /// Shorthand for --scale paper.
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long)]
    pub seed: u64,
    /// Output directory (default: $SEWING_OUT_DIR, else ./sewing-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Force the inner, outer or averaged statistic.
    #[arg(long)]
    pub class: Option<ContinuityClass>,
    #[command(flatten)]
    #[serde(flatten)]
    pub alpha: AlphaArgs,
    /// Fill the elapsed_ms column (makes the CSV run-dependent).
    #[arg(long)]
    pub record_timing: bool,
    /// Replication count, overriding the scale default.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Shape for a custom experiment (without --table).
    #[arg(long, default_value = "cardioid")]
    pub shape: String,
    #[arg(long, default_value = "one")]
    pub field: String,
    #[arg(long)]
    pub param: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub trim: usize,
    #[arg(long)]
    pub poisson: bool,
}

fn normality_json(values: &[f64]) -> serde_json::Value {
    match experiments::normality_diagnostic(values) {
        Some(r) => json!({ "count": r.count, "skewness": r.skewness, "excess_kurtosis": r.excess_kurtosis }),
        None => serde_json::Value::Null,
    }
}

fn simulate(mut a: SimulateArgs) -> Result<(), CliError> {
    if a.paper_scale {
        a.scale = Scale::Paper;
    }
    if a.reps == Some(0) {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    let alpha = a.alpha.resolve()?;
    let dir = output::out_dir(a.out.as_deref(), Some("sewing-out")).expect("fallback");
    let config = RunConfig {
        subcommand: "simulate",
        args: a.clone(),
    };
    let comments = config.csv_comments();
    let write_qq = |path: &Path, values: &[f64]| -> Result<(), CliError> {
        if values.len() >= 100 {
            if let Some(r) = experiments::normality_diagnostic(values) {
                write_file(path, &r.qq_csv())?;
            }
        }
        Ok(())
    };
    match a.table {
        Some(table) => {
            if a.scale == Scale::Paper {
                warn!("paper scale: this run takes hours");
            }
            let mut tc = TableConfig::new(table, a.scale, a.seed);
            tc.alpha = alpha;
            tc.class = a.class;
            if let Some(r) = a.reps {
                tc.replications = r;
            }
            let out = experiments::reproduce_table(&tc)?;
            let stem = format!("{table}_{}", a.scale);
            let csv = out.to_csv(&comments);
            write_file(&dir.join(format!("{stem}.csv")), &csv)?;
            let mut rows = Vec::new();
            for row in &out.rows {
                let tag = if table == TableId::Table3 {
                    format!("zeta{}", row.key)
                } else {
                    format!("n{}", row.n)
                };
                let values: Vec<f64> = row.replications.iter().map(|r| r.calibrated).collect();
                write_file(
                    &dir.join(format!("{stem}_{tag}_replications.csv")),
                    &experiments::replication_csv(&row.replications, &comments),
                )?;
                write_qq(&dir.join(format!("{stem}_{tag}_qq.csv")), &values)?;
                rows.push(json!({ "row": row, "normality": normality_json(&values) }));
            }
            let doc = envelope(&config, &json!({ "table": out.config, "rows": rows }));
            write_file(&dir.join(format!("{stem}.json")), &pretty(&doc))?;
            print!("{csv}");
        }
        None => {
            let field = field_from(&a.field, a.param)?;
            shape_from(&a.shape)?;
            let spec = ExperimentSpec {
                class: a.class,
                trim_k: a.trim,
                alpha,
                poisson: a.poisson,
                ..ExperimentSpec::new(&a.shape, field, a.n, a.reps.unwrap_or(experiments::DESK_REPLICATIONS), a.seed)
            };
            spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let res = experiments::run(&spec, a.record_timing)?;
            let values: Vec<f64> = res.rows.iter().map(|r| r.calibrated).collect();
            write_file(&dir.join("experiment_replications.csv"), &experiments::replication_csv(&res.rows, &comments))?;
            write_qq(&dir.join("experiment_qq.csv"), &values)?;
            let doc = envelope(
                &config,
                &json!({ "spec": res.spec, "summary": res.summary, "normality": normality_json(&values) }),
            );
            let text = pretty(&doc);
            write_file(&dir.join("experiment.json"), &text)?;
            print!("{text}");
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeGeoArgs {
    /// CSV `lon,lat,label,elevation` (label 1 = land) or JSON lines.
    #[arg(long)]
    pub input: PathBuf,
    /// csv or jsonl (default: from the extension).
    #[arg(long)]
    pub format: Option<GeoFormat>,
    /// lon_min,lon_max,lat_min,lat_max (default: bounding box).
    #[arg(long, value_parser = parse_rect)]
    pub window: Option<Rect>,
    #[command(flatten)]
    #[serde(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, default_value_t = geodata::DEFAULT_TRIM)]
    pub trim: usize,
    /// Plane used for triangulation: equirectangular or lonlat.
    #[arg(long, default_value = "equirectangular")]
    pub projection: Projection,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn analyze_geo(a: AnalyzeGeoArgs) -> Result<(), CliError> {
    let alpha = a.alpha.resolve()?;
    let sample = geodata::load(&a.input, a.format, a.window)?;
    let options = AnalyzeOptions {
        trim_k: a.trim,
        projection: a.projection,
    };
    let report = geodata::analyze(&sample, &alpha, &options)?;
    let config = RunConfig {
        subcommand: "analyze-geo",
        args: a.clone(),
    };
    let text = pretty(&envelope(&config, &report));
    print!("{text}");
    if let Some(path) = a.out.clone().or_else(|| output::out_dir(None, None).map(|d| d.join("coastline.json"))) {
        write_file(&path, &text)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TriangulateArgs {
    /// CSV of `x,y,label[,h]`.
    #[arg(long, conflicts_with = "shape")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check the empty-circle, adjacency and hull invariants.
    #[arg(long)]
    pub validate: bool,
    /// JSON with every triangle.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of points followed by one triangle per row.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// CSV of the sewing faces: endpoints, side, multiplicity and length.
    #[arg(long)]
    pub sewing: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn triangulate(mut a: TriangulateArgs) -> Result<(), CliError> {
    let (sample, window) = match (&a.shape, &a.input) {
        (Some(name), None) => {
            let shape = shape_from(name)?;
            let seed = seed_or_default(a.seed);
            a.seed = Some(seed);
            (shape.sample_uniform(a.n, &mut rng::stream(seed, 0)), shape.window())
        }
        (None, Some(path)) => {
            let s = geodata::load_labeled_points(path)?;
            let w = Rect::bounding(s.iter().map(|p| p.position))
                .ok_or_else(|| anyhow::anyhow!("{}: points do not span a rectangle", path.display()))?;
            (s, w)
        }
        _ => return Err(CliError::Usage("give exactly one of --shape or --input".into())),
    };
    let points: Vec<_> = sample.iter().map(|p| p.position).collect();
    let labels: Vec<_> = sample.iter().map(|p| p.label).collect();
    let tri = Triangulation::build(&points).map_err(EstimateError::from)?;
    let violations = a.validate.then(|| tri.validate());
    let config = RunConfig {
        subcommand: "triangulate",
        args: a.clone(),
    };
    let summary = json!({
        "points": tri.point_count(),
        "triangles": tri.len(),
        "hull_size": tri.hull_size(),
        "violations": violations,
    });
    print!("{}", pretty(&envelope(&config, &summary)));
    if let Some(path) = &a.out {
        let tris: Vec<[u32; 3]> = tri.triangles().iter().map(|t| t.vertices).collect();
        let mut doc = envelope(&config, &summary);
        doc["triangle_list"] = json!(tris);
        doc["adjacency"] = json!(tri.adjacency());
        write_file(path, &pretty(&doc))?;
    }
    if let Some(path) = &a.csv {
        let mut csv = comment_lines(&config);
        csv.push_str("kind,i,x,y,label\n");
        for (k, (p, l)) in points.iter().zip(&labels).enumerate() {
            csv.push_str(&format!("point,{k},{},{},{}\n", p.x, p.y, u8::from(l.is_inside())));
        }
        csv.push_str("kind,a,b,c\n");
        for t in tri.triangles() {
            let [x, y, z] = t.vertices;
            csv.push_str(&format!("triangle,{x},{y},{z}\n"));
        }
        write_file(path, &csv)?;
    }
    if a.sewing.is_some() || a.svg.is_some() {
        let sewing = boundary_sewing::sewing::Sewing::extract(&tri, &labels).map_err(EstimateError::from)?;
        if let Some(path) = &a.sewing {
            let mut csv = comment_lines(&config);
            csv.push_str("a,b,side,multiplicity,length\n");
            for (side, faces) in [("inner", &sewing.inner_faces), ("outer", &sewing.outer_faces)] {
                for f in faces {
                    let [i, j] = f.vertices();
                    let len = points[i as usize].distance(&points[j as usize]);
                    csv.push_str(&format!("{i},{j},{side},{},{len}\n", sewing.multiplicity(f)));
                }
            }
            write_file(path, &csv)?;
        }
        if let Some(path) = &a.svg {
            let body = svg::render(&window, &tri, &labels, &sewing, &svg::SvgOptions::default());
            write_file(path, &with_svg_comment(&body, &config))?;
        }
    }
    if violations.as_ref().is_some_and(|v| !v.is_empty()) {
        return Err(CliError::Data(anyhow::anyhow!("triangulation failed validation")));
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthCoastArgs {
    /// straight or sinusoidal.
    #[arg(long, default_value = "sinusoidal")]
    pub kind: String,
    /// Latitude of the straight coast, or mean latitude of the wave.
    #[arg(long, default_value_t = 45.97)]
    pub lat: f64,
    /// Wave amplitude in degrees of latitude.
    #[arg(long, default_value_t = 0.05)]
    pub amplitude: f64,
    /// Number of full waves across the window.
    #[arg(long, default_value_t = 3.0)]
    pub waves: f64,
    /// Constant land elevation in metres.
    #[arg(long, default_value_t = 10.0, conflicts_with = "ramp")]
    pub elevation: f64,
    /// Linear land elevation `base,per_lon,per_lat` (metres, metres per degree).
    #[arg(long)]
    pub ramp: Option<String>,
    /// lon_min,lon_max,lat_min,lat_max (default: the Aral study window).
    #[arg(long, value_parser = parse_rect)]
    pub window: Option<Rect>,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "csv")]
    pub format: GeoFormat,
    /// Data file; a `<out>.meta.json` sidecar records the config and truth.
    #[arg(long)]
    pub out: PathBuf,
}

fn synth_coast(mut a: SynthCoastArgs) -> Result<(), CliError> {
    let coast = match a.kind.as_str() {
        "straight" => SyntheticCoast::Straight { lat: a.lat },
        "sinusoidal" => SyntheticCoast::Sinusoidal {
            mid_lat: a.lat,
            amplitude: a.amplitude,
            waves: a.waves,
        },
        other => return Err(CliError::Usage(format!("unknown coast kind `{other}`"))),
    };
    let elevation = match &a.ramp {
        Some(s) => {
            let v: Vec<f64> = s
                .split(',')
                .map(|t| t.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Usage(format!("--ramp: {e}")))?;
            let [base, per_lon, per_lat] = v[..] else {
                return Err(CliError::Usage("--ramp expects base,per_lon,per_lat".into()));
            };
            Elevation::Ramp { base, per_lon, per_lat }
        }
        None => Elevation::Constant { value: a.elevation },
    };
    let window = *a.window.get_or_insert_with(geodata::aral_window);
    let seed = seed_or_default(a.seed);
    a.seed = Some(seed);
    let sample = coast.generate(&window, a.n, &elevation, &mut rng::stream(seed, 0));
    sample.save(&a.out, a.format)?;
    let config = RunConfig {
        subcommand: "synth-coast",
        args: a.clone(),
    };
    let meta = envelope(
        &config,
        &json!({
            "coast": coast,
            "elevation_model": elevation,
            "length_km": coast.length_km(&window),
            "mean_elevation_m": coast.mean_elevation(&window, &elevation),
            "records": sample.len(),
        }),
    );
    let text = pretty(&meta);
    let mut sidecar = a.out.clone().into_os_string();
    sidecar.push(".meta.json");
    write_file(Path::new(&sidecar), &text)?;
    print!("{text}");
    Ok(())
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Calibrate(a) => calibrate(a),
        Command::Estimate(a) => estimate(a),
        Command::Simulate(a) => simulate(a),
        Command::AnalyzeGeo(a) => analyze_geo(a),
        Command::Triangulate(a) => triangulate(a),
        Command::SynthCoast(a) => synth_coast(a),
    }
}
