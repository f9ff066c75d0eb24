//! Seeded Monte Carlo replications of the sewing estimator, the published
//! simulation tables, and a descriptive normality check.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::EstimateError;
use crate::estimators::{s_n, CalibrationResult, SewnSample};
use crate::metric::{Metric, Projection};
use crate::rng;
use crate::shapes::{ContinuityClass, ScalarField, ShapeOracle};
use crate::stats::{mean, pairwise_sum, sample_std};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub shape: String,
    pub field: ScalarField,
    pub n: usize,
    pub replications: usize,
    pub seed: u64,
    /// Overrides the field's own continuity class.
    #[serde(default)]
    pub class: Option<ContinuityClass>,
    pub trim_k: usize,
    pub alpha: CalibrationResult,
    /// Draw `N ~ Poisson(n)` points instead of exactly `n`.
    #[serde(default)]
    pub poisson: bool,
}

impl ExperimentSpec {
    pub fn new(shape: &str, field: ScalarField, n: usize, replications: usize, seed: u64) -> Self {
        Self {
            shape: shape.to_string(),
            field,
            n,
            replications,
            seed,
            class: None,
            trim_k: 0,
            alpha: CalibrationResult::default(),
            poisson: false,
        }
    }

    pub fn class(&self) -> ContinuityClass {
        self.class.unwrap_or(self.field.continuity)
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        if self.replications < 1 {
            return Err(EstimateError::InvalidArgument("replications must be at least 1".into()));
        }
        if self.n < 10 {
            return Err(EstimateError::InvalidArgument(format!("n = {} is below 10", self.n)));
        }
        self.alpha.check()
    }
}

/// One replication. `seed` is the derived stream seed, so
/// [`run_replication`] with it reproduces the row alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub replication_index: usize,
    pub seed: u64,
    pub inner: f64,
    pub outer: f64,
    pub s_n: f64,
    pub calibrated: f64,
    #[serde(default)]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub replications: usize,
    pub mean: f64,
    /// Sample standard deviation; `None` for a single replication.
    pub std: Option<f64>,
    pub truth: Option<f64>,
    pub bias: Option<f64>,
    /// `mean((x − truth)²)`.
    pub mse: Option<f64>,
    pub sqrt_n_mse: Option<f64>,
}

impl SummaryStats {
    pub fn from_values(values: &[f64], truth: Option<f64>, n: usize) -> Self {
        let m = mean(values).unwrap_or(f64::NAN);
        let mse = truth.map(|t| {
            let sq: Vec<f64> = values.iter().map(|v| (v - t) * (v - t)).collect();
            pairwise_sum(&sq) / values.len() as f64
        });
        Self {
            replications: values.len(),
            mean: m,
            std: sample_std(values),
            truth,
            bias: truth.map(|t| m - t),
            mse,
            sqrt_n_mse: mse.map(|e| (n as f64).sqrt() * e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub rows: Vec<ReplicationRow>,
    pub summary: SummaryStats,
}

struct Replicate {
    sewn: SewnSample,
    seed: u64,
    started: Instant,
}

fn draw(spec: &ExperimentSpec, shape: &ShapeOracle, seed: u64) -> Result<Replicate, EstimateError> {
    let started = Instant::now();
    let mut g = rng::rng_from_seed(seed);
    let count = if spec.poisson {
        crate::shapes::poisson_count(spec.n as f64, &mut g)
    } else {
        spec.n
    };
    let (points, labels) = shape.sample_points(count, &mut g);
    Ok(Replicate {
        sewn: SewnSample::with_counting(
            points,
            labels,
            Metric::Euclidean,
            Projection::LonLat,
            spec.trim_k,
            spec.alpha.counting,
        )?,
        seed,
        started,
    })
}

fn row_for(rep: &Replicate, index: usize, field: &ScalarField, class: ContinuityClass, alpha: f64, timing: bool) -> Result<ReplicationRow, EstimateError> {
    let pts = &rep.sewn.points;
    let (inner, outer) = rep.sewn.integrals_with(|k| Some(field.eval(&pts[k])))?;
    let s = s_n(inner, outer, class);
    Ok(ReplicationRow {
        replication_index: index,
        seed: rep.seed,
        inner,
        outer,
        s_n: s,
        calibrated: s / alpha,
        elapsed_ms: timing.then(|| rep.started.elapsed().as_secs_f64() * 1e3),
    })
}

/// Re-run one replication from its derived seed.
pub fn run_replication(spec: &ExperimentSpec, index: usize, seed: u64) -> Result<ReplicationRow, EstimateError> {
    let shape = ShapeOracle::catalog(&spec.shape)?;
    let rep = draw(spec, &shape, seed)?;
    row_for(&rep, index, &spec.field, spec.class(), spec.alpha.alpha_hat, false)
}

/// Several fields evaluated on the same replications: `result[f][r]`.
/// Each sample is triangulated once.
pub fn run_fields(
    spec: &ExperimentSpec,
    fields: &[ScalarField],
    record_timing: bool,
) -> Result<Vec<Vec<ReplicationRow>>, EstimateError> {
    spec.validate()?;
    let shape = ShapeOracle::catalog(&spec.shape)?;
    let per_rep: Vec<Vec<ReplicationRow>> = (0..spec.replications)
        .into_par_iter()
        .map(|r| {
            let rep = draw(spec, &shape, rng::stream_seed(spec.seed, r as u64))?;
            fields
                .iter()
                .map(|f| {
                    let class = spec.class.unwrap_or(f.continuity);
                    row_for(&rep, r, f, class, spec.alpha.alpha_hat, record_timing)
                })
                .collect()
        })
        .collect::<Result<_, EstimateError>>()?;
    let mut out = vec![Vec::with_capacity(spec.replications); fields.len()];
    for rows in per_rep {
        for (f, row) in rows.into_iter().enumerate() {
            out[f].push(row);
        }
    }
    Ok(out)
}

/// Run all replications of `spec` and summarise against the shape's exact
/// integral of the field, when one is known.
pub fn run(spec: &ExperimentSpec, record_timing: bool) -> Result<ExperimentResult, EstimateError> {
    let rows = run_fields(spec, &[spec.field], record_timing)?.pop().expect("one field");
    let shape = ShapeOracle::catalog(&spec.shape)?;
    let truth = shape.exact_integral(&spec.field).ok();
    let values: Vec<f64> = rows.iter().map(|r| r.calibrated).collect();
    let summary = SummaryStats::from_values(&values, truth, spec.n);
    Ok(ExperimentResult {
        spec: spec.clone(),
        rows,
        summary,
    })
}

pub const REPLICATION_HEADER: &str = "replication_index,seed,inner,outer,s_n,calibrated,elapsed_ms";

/// Per-replication CSV. `comments` become leading `# ` lines. The timing
/// column is left empty unless it was recorded.
pub fn replication_csv(rows: &[ReplicationRow], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str(REPLICATION_HEADER);
    out.push('\n');
    for r in rows {
        let elapsed = r.elapsed_ms.map(|e| format!("{e:.3}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.replication_index, r.seed, r.inner, r.outer, r.s_n, r.calibrated, elapsed
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    Table1,
    Table2,
    Table3,
}

impl std::str::FromStr for TableId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "table1" => Ok(TableId::Table1),
            "2" | "table2" => Ok(TableId::Table2),
            "3" | "table3" => Ok(TableId::Table3),
            other => Err(format!("unknown table `{other}` (expected 1, 2 or 3)")),
        }
    }
}

impl std::fmt::Display for TableId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TableId::Table1 => "table1",
            TableId::Table2 => "table2",
            TableId::Table3 => "table3",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Paper,
    Desk,
}

impl std::str::FromStr for Scale {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Scale::Paper),
            "desk" => Ok(Scale::Desk),
            other => Err(format!("unknown scale `{other}` (expected paper or desk)")),
        }
    }
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scale::Paper => "paper",
            Scale::Desk => "desk",
        })
    }
}

pub const DESK_REPLICATIONS: usize = 200;

/// Published reference rows.
pub mod reference {
    /// Trisectrix: (n, mean L^M, std L^M, mean L^S, std L^S).
    pub const TABLE1: [(usize, f64, f64, f64, f64); 2] = [
        (10_000, 19.3679, 1.0394, 20.7030, 0.3140),
        (30_000, 19.8237, 1.0666, 20.7328, 0.2375),
    ];
    /// Cardioid length: (n, mean, std, √n·MSE).
    pub const TABLE2: [(usize, f64, f64, f64); 4] = [
        (1_000, 7.8862, 0.1870, 1.5157),
        (10_000, 7.9446, 0.1009, 1.3254),
        (100_000, 7.9772, 0.0538, 1.0801),
        (1_000_000, 7.9885, 0.0323, 1.1736),
    ];
    /// Cardioid `I(ζ)` at n = 10⁴: (ζ, I(ζ), mean, std).
    pub const TABLE3: [(f64, f64, f64, f64); 4] = [
        (-0.5, 8.0000, 7.9446, 0.1009),
        (0.0, 8.8858, 8.8786, 0.1138),
        (1.0, 13.3286, 13.3349, 0.1827),
        (2.0, 22.2144, 22.2191, 0.3470),
    ];
}

/// Settings shared by every row of a reproduced table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub table: TableId,
    pub scale: Scale,
    pub seed: u64,
    pub replications: usize,
    pub alpha: CalibrationResult,
    pub class: Option<ContinuityClass>,
}

impl TableConfig {
    pub fn new(table: TableId, scale: Scale, seed: u64) -> Self {
        let replications = match (scale, table) {
            (Scale::Desk, _) => DESK_REPLICATIONS,
            (Scale::Paper, TableId::Table1) => 500,
            (Scale::Paper, _) => 1000,
        };
        Self {
            table,
            scale,
            seed,
            replications,
            alpha: CalibrationResult::default(),
            class: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    /// Row label: `n` for tables 1 and 2, `ζ` for table 3.
    pub key: f64,
    pub n: usize,
    pub summary: SummaryStats,
    pub paper: Vec<(String, f64)>,
    #[serde(skip)]
    pub replications: Vec<ReplicationRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableOutput {
    pub config: TableConfig,
    pub rows: Vec<TableRow>,
}

fn experiment(config: &TableConfig, shape: &str, field: ScalarField, n: usize) -> ExperimentSpec {
    ExperimentSpec {
        class: config.class,
        alpha: config.alpha.clone(),
        ..ExperimentSpec::new(shape, field, n, config.replications, config.seed)
    }
}

/// Reproduce one of the published simulation tables.
///
/// Desk scale uses [`DESK_REPLICATIONS`] replications and drops the
/// n = 10⁶ row of table 2.
pub fn reproduce_table(config: &TableConfig) -> Result<TableOutput, EstimateError> {
    let mut rows = Vec::new();
    match config.table {
        TableId::Table1 => {
            let truth = 12.0 * 3f64.sqrt();
            for &(n, lm_mean, lm_std, mean, std) in &reference::TABLE1 {
                let res = run(&experiment(config, "trisectrix", ScalarField::one(), n), false)?;
                debug_assert_eq!(res.summary.truth.map(|t| (t - truth).abs() < 1e-12), Some(true));
                rows.push(TableRow {
                    key: n as f64,
                    n,
                    summary: res.summary,
                    paper: vec![
                        ("paper_mean".into(), mean),
                        ("paper_std".into(), std),
                        ("minkowski_mean".into(), lm_mean),
                        ("minkowski_std".into(), lm_std),
                    ],
                    replications: res.rows,
                });
            }
        }
        TableId::Table2 => {
            for &(n, mean, std, snm) in &reference::TABLE2 {
                if config.scale == Scale::Desk && n > 100_000 {
                    continue;
                }
                let res = run(&experiment(config, "cardioid", ScalarField::one(), n), false)?;
                rows.push(TableRow {
                    key: n as f64,
                    n,
                    summary: res.summary,
                    paper: vec![
                        ("paper_mean".into(), mean),
                        ("paper_std".into(), std),
                        ("paper_sqrt_n_mse".into(), snm),
                    ],
                    replications: res.rows,
                });
            }
        }
        TableId::Table3 => {
            let n = 10_000;
            let shape = ShapeOracle::catalog("cardioid")?;
            let fields: Vec<ScalarField> = reference::TABLE3.iter().map(|r| ScalarField::h_zeta(r.0)).collect();
            let spec = experiment(config, "cardioid", fields[0], n);
            let all = run_fields(&spec, &fields, false)?;
            for ((field, reps), &(zeta, i_zeta, mean, std)) in fields.iter().zip(all).zip(&reference::TABLE3) {
                let truth = shape.exact_integral(field)?;
                let values: Vec<f64> = reps.iter().map(|r| r.calibrated).collect();
                rows.push(TableRow {
                    key: zeta,
                    n,
                    summary: SummaryStats::from_values(&values, Some(truth), n),
                    paper: vec![
                        ("paper_integral".into(), i_zeta),
                        ("paper_mean".into(), mean),
                        ("paper_std".into(), std),
                    ],
                    replications: reps,
                });
            }
        }
    }
    Ok(TableOutput {
        config: config.clone(),
        rows,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl TableOutput {
    /// CSV in the published layout with the reference columns appended.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(
            out,
            "# table={} scale={} replications={} seed={} alpha_hat={}",
            self.config.table, self.config.scale, self.config.replications, self.config.seed, self.config.alpha.alpha_hat
        );
        let key = if self.config.table == TableId::Table3 { "zeta" } else { "n" };
        let paper_cols: Vec<&str> = self.rows.first().map(|r| r.paper.iter().map(|p| p.0.as_str()).collect()).unwrap_or_default();
        let _ = write!(out, "{key},n_points,true_value,mean,std,bias,sqrt_n_mse");
        for c in &paper_cols {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
        for r in &self.rows {
            let s = &r.summary;
            let _ = write!(
                out,
                "{},{},{},{:.6},{},{},{}",
                r.key,
                r.n,
                fmt_opt(s.truth),
                s.mean,
                fmt_opt(s.std),
                fmt_opt(s.bias),
                fmt_opt(s.sqrt_n_mse)
            );
            for (_, v) in &r.paper {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub count: usize,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// (standard normal quantile, standardized sample quantile).
    pub qq: Vec<(f64, f64)>,
}

impl NormalityReport {
    pub fn qq_csv(&self) -> String {
        let mut out = String::from("theoretical,sample\n");
        for (t, s) in &self.qq {
            let _ = writeln!(out, "{t},{s}");
        }
        out
    }
}

/// Moment skewness and excess kurtosis plus Q–Q pairs at plotting positions
/// `(i − ½)/m`. `None` for fewer than three values or zero spread.
pub fn normality_diagnostic(values: &[f64]) -> Option<NormalityReport> {
    let m = values.len();
    if m < 3 {
        return None;
    }
    let mu = mean(values)?;
    let central = |p: i32| pairwise_sum(&values.iter().map(|v| (v - mu).powi(p)).collect::<Vec<_>>()) / m as f64;
    let m2 = central(2);
    if !(m2 > 0.0) {
        return None;
    }
    let skewness = central(3) / m2.powf(1.5);
    let excess_kurtosis = central(4) / (m2 * m2) - 3.0;
    let sd = sample_std(values)?;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let qq = sorted
        .iter()
        .enumerate()
        .map(|(i, v)| (normal.inverse_cdf((i as f64 + 0.5) / m as f64), (v - mu) / sd))
        .collect();
    Some(NormalityReport {
        count: m,
        skewness,
        excess_kurtosis,
        qq,
    })
}
