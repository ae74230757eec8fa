//! Experiment drivers behind the `greedy-stable` binary.
//!
//! Each `cmd_*` function computes its results, renders them as an
//! [`Artifact`] (CSV or JSON) that embeds the full configuration, and leaves
//! writing to the caller. CSV artifacts start with `# key=value` metadata
//! lines, then one header row; all line endings are LF. JSON artifacts are a
//! single object with flat `meta`, `rows` and `summary` members.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{default_k_max, exact_pk};
use crate::greedy::{collect_empirical, EmpiricalPmf, Method};
use crate::hypo::{self, LimitTable};
use crate::metrics::{l1_discrete, DistanceReport};
use crate::series::SeriesConfig;

pub const TOOL: &str = concat!("greedy-stable ", env!("CARGO_PKG_VERSION"));

/// Environment variable consulted for the default seed.
pub const SEED_ENV: &str = "GREEDY_STABLE_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_list: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    pub method: Method,
    pub series: SeriesConfig,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: vec![1 << 10],
            trials: 10_000,
            seed: DEFAULT_SEED,
            method: Method::Graph,
            series: SeriesConfig::default(),
            output_format: OutputFormat::Csv,
            output_path: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::invalid("n_list", "must not be empty"));
        }
        if self.n_list.contains(&0) {
            return Err(Error::invalid("n_list", "every n must be at least 1"));
        }
        self.series.validate()
    }

    fn meta(&self, command: &str) -> Vec<(String, String)> {
        let n_list = self
            .n_list
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        vec![
            ("tool".into(), TOOL.into()),
            ("command".into(), command.into()),
            ("n_list".into(), n_list),
            ("trials".into(), self.trials.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("method".into(), self.method.as_str().into()),
            ("max_terms".into(), self.series.max_terms.to_string()),
            ("abs_tol".into(), format!("{:e}", self.series.abs_tol)),
        ]
    }
}

/// Parses `1024`, `2^10` or a comma-separated list of either.
pub fn parse_n_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_n)
        .collect()
}

pub fn parse_n(s: &str) -> Result<u64> {
    let bad = || Error::invalid("n", format!("cannot parse `{s}`"));
    let n = match s.split_once('^') {
        Some((base, exp)) => {
            let base: u64 = base.trim().parse().map_err(|_| bad())?;
            let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
            base.checked_pow(exp).ok_or_else(bad)?
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    Ok(n)
}

/// A cell of a tabular artifact.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Uint(u64),
    Real(f64),
    Empty,
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Real(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Uint(v) => json!(v),
            Cell::Real(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rendered output of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub format: OutputFormat,
    pub text: String,
}

impl Artifact {
    fn render(
        format: OutputFormat,
        meta: &[(String, String)],
        columns: &[&str],
        rows: &[Vec<Cell>],
        summary: &[(String, Cell)],
    ) -> Result<Artifact> {
        let text = match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                for (k, v) in meta {
                    writeln!(out, "# {k}={v}").unwrap();
                }
                for (k, v) in summary {
                    writeln!(out, "# summary.{k}={}", v.to_csv()).unwrap();
                }
                writeln!(out, "{}", columns.join(",")).unwrap();
                for row in rows {
                    let line: Vec<String> = row.iter().map(Cell::to_csv).collect();
                    writeln!(out, "{}", line.join(",")).unwrap();
                }
                out
            }
            OutputFormat::Json => {
                let meta: Map<String, Value> = meta
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect();
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            columns
                                .iter()
                                .zip(row)
                                .map(|(c, v)| (c.to_string(), v.to_json()))
                                .collect(),
                        )
                    })
                    .collect();
                let summary: Map<String, Value> = summary
                    .iter()
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect();
                let mut s = serde_json::to_string_pretty(
                    &json!({ "meta": meta, "rows": rows, "summary": summary }),
                )?;
                s.push('\n');
                s
            }
        };
        Ok(Artifact { format, text })
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        let io = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = File::create(path).map_err(io)?;
        file.write_all(self.text.as_bytes()).map_err(io)
    }

    /// Writes to `path`, or to standard output when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => self.write_to(p),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes()).map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
            }
        }
    }
}

fn real(x: f64) -> Cell {
    Cell::Real(x)
}


/// Empirical distribution of `bk` for each `n` in the list.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Vec<EmpiricalPmf>> {
    cfg.validate()?;
    if cfg.trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    cfg.n_list
        .par_iter()
        .map(|&n| collect_empirical(n, cfg.trials, cfg.seed, cfg.method))
        .collect()
}

pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<Artifact> {
    let results = simulate(cfg)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for pmf in &results {
        for (&k, &count) in &pmf.counts {
            rows.push(vec![
                Cell::Uint(pmf.n),
                Cell::Uint(k),
                Cell::Uint(count),
                real(count as f64 / pmf.trials as f64),
            ]);
        }
        summary.push((format!("mean_bk.n{}", pmf.n), real(pmf.mean())));
    }
    Artifact::render(
        cfg.output_format,
        &cfg.meta("simulate"),
        &["n", "k", "count", "frequency"],
        &rows,
        &summary,
    )
}

/// Exact `p_k` for `k = 0..=k_max` for each `n`.
pub fn exact_table(cfg: &ExperimentConfig, k_max: Option<usize>) -> Result<Vec<(u64, Vec<f64>)>> {
    cfg.validate()?;
    cfg.n_list
        .par_iter()
        .map(|&n| Ok((n, exact_pk(n, k_max.unwrap_or_else(|| default_k_max(n)))?)))
        .collect()
}

pub fn cmd_exact_pk(cfg: &ExperimentConfig, k_max: Option<usize>) -> Result<Artifact> {
    let tables = exact_table(cfg, k_max)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (n, pk) in &tables {
        for (k, &p) in pk.iter().enumerate() {
            rows.push(vec![Cell::Uint(*n), Cell::Uint(k as u64), real(p)]);
        }
        let total: f64 = pk.iter().sum();
        let mean: f64 = pk.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        summary.push((format!("total.n{n}"), real(total)));
        summary.push((format!("mean_bk.n{n}"), real(mean)));
    }
    let mut meta = cfg.meta("exact-pk");
    meta.push((
        "k_max".into(),
        k_max.map_or_else(|| "2*ceil(log2 n)+8".into(), |k| k.to_string()),
    ));
    Artifact::render(cfg.output_format, &meta, &["n", "k", "p_k"], &rows, &summary)
}

/// Exact-versus-limit comparison for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareResult {
    pub n: u64,
    pub theta: f64,
    /// `Σ_k |p_k - q_k|` with exact `p_k`.
    pub l1_pk_qk: f64,
    pub tv: f64,
    pub ks: f64,
    pub w1: f64,
    /// Monte Carlo version of `l1_pk_qk`, when trials were requested.
    pub l1_mc: Option<f64>,
    /// `l1_pk_qk / (sqrt(ln n) / n^{1/3})`.
    pub bound_ratio: f64,
}

/// Fractional part of `log2 n`.
pub fn theta_of(n: u64) -> f64 {
    if n.is_power_of_two() {
        0.0
    } else {
        let l = (n as f64).log2();
        l - l.floor()
    }
}

/// Reference rate `sqrt(ln n) / n^{1/3}`.
pub fn reference_rate(n: u64) -> f64 {
    (n as f64).ln().sqrt() / (n as f64).cbrt()
}

pub fn compare_one(n: u64, cfg: &ExperimentConfig) -> Result<CompareResult> {
    if n < 2 {
        return Err(Error::invalid("n", "compare needs n >= 2"));
    }
    let k_max = default_k_max(n);
    let p = exact_pk(n, k_max)?;
    let q = (0..=k_max as u32)
        .map(|k| hypo::q_k(n, k, &cfg.series))
        .collect::<Result<Vec<f64>>>()?;
    let report = DistanceReport::for_pmfs(&p, &q);
    let l1_mc = if cfg.trials > 0 {
        let emp = collect_empirical(n, cfg.trials, cfg.seed, cfg.method)?;
        let len = (k_max).max(emp.max_size() as usize);
        let mut q_ext = q.clone();
        q_ext.extend(
            (k_max as u32 + 1..=len as u32)
                .map(|k| hypo::q_k(n, k, &cfg.series))
                .collect::<Result<Vec<f64>>>()?,
        );
        Some(l1_discrete(&emp.frequencies(len), &q_ext))
    } else {
        None
    };
    Ok(CompareResult {
        n,
        theta: theta_of(n),
        l1_pk_qk: report.l1,
        tv: report.tv,
        ks: report.ks,
        w1: report.w1,
        l1_mc,
        bound_ratio: report.l1 / reference_rate(n),
    })
}

pub fn compare(cfg: &ExperimentConfig) -> Result<Vec<CompareResult>> {
    cfg.validate()?;
    cfg.n_list.par_iter().map(|&n| compare_one(n, cfg)).collect()
}

pub fn cmd_compare(cfg: &ExperimentConfig) -> Result<Artifact> {
    let results = compare(cfg)?;
    let rows: Vec<Vec<Cell>> = results
        .iter()
        .map(|r| {
            vec![
                Cell::Uint(r.n),
                real(r.theta),
                real(r.l1_pk_qk),
                real(r.tv),
                real(r.ks),
                real(r.w1),
                real(r.bound_ratio),
                r.l1_mc.map_or(Cell::Empty, real),
            ]
        })
        .collect();
    let ratios = results.iter().map(|r| r.bound_ratio);
    let (lo, hi) = ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let summary = vec![
        ("bound_ratio_min".into(), real(lo)),
        ("bound_ratio_max".into(), real(hi)),
    ];
    let mut meta = cfg.meta("compare");
    meta.push((
        "mode".into(),
        if cfg.trials == 0 { "exact" } else { "exact+monte_carlo" }.into(),
    ));
    Artifact::render(
        cfg.output_format,
        &meta,
        &["n", "theta", "l1_pk_qk", "tv", "ks", "w1", "bound_ratio", "l1_mc"],
        &rows,
        &summary,
    )
}

pub fn cmd_limit_table(
    theta: f64,
    c_range: (i32, i32),
    series: &SeriesConfig,
    format: OutputFormat,
) -> Result<(LimitTable, Artifact)> {
    let table = hypo::limit_table(theta, series, c_range)?;
    let rows: Vec<Vec<Cell>> = table
        .entries
        .iter()
        .map(|e| vec![Cell::Int(e.c as i64), real(e.probability)])
        .collect();
    let meta = vec![
        ("tool".to_string(), TOOL.to_string()),
        ("command".into(), "limit-table".into()),
        ("theta".into(), theta.to_string()),
        ("c_min".into(), c_range.0.to_string()),
        ("c_max".into(), c_range.1.to_string()),
        ("max_terms".into(), series.max_terms.to_string()),
        ("abs_tol".into(), format!("{:e}", series.abs_tol)),
    ];
    let summary = vec![
        ("total".into(), real(table.total())),
        ("mean_dev".into(), real(table.mean_dev)),
        ("variance".into(), real(table.variance)),
        ("std_dev".into(), real(table.std_dev)),
    ];
    let artifact = Artifact::render(format, &meta, &["c", "probability"], &rows, &summary)?;
    Ok((table, artifact))
}

/// Uniform grid for the density of `log2(1 / Hypo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub y_min: f64,
    pub y_max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            y_min: -4.0,
            y_max: 4.0,
            step: 0.01,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.y_min <= self.y_max) || !self.y_max.is_finite() {
            return Err(Error::invalid(
                "grid",
                format!("need y_min <= y_max and step > 0, got {self:?}"),
            ));
        }
        let count = ((self.y_max - self.y_min) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|i| self.y_min + i as f64 * self.step)
            .collect())
    }
}

pub fn density_rows(grid: &GridSpec, series: &SeriesConfig) -> Result<Vec<(f64, f64)>> {
    grid.points()?
        .into_iter()
        .map(|y| Ok((y, hypo::log_hypo_density(y, series)?)))
        .collect()
}

pub fn cmd_density_csv(grid: &GridSpec, series: &SeriesConfig, format: OutputFormat) -> Result<Artifact> {
    let rows = density_rows(grid, series)?;
    let meta = vec![
        ("tool".to_string(), TOOL.to_string()),
        ("command".into(), "density-csv".into()),
        ("y_min".into(), grid.y_min.to_string()),
        ("y_max".into(), grid.y_max.to_string()),
        ("step".into(), grid.step.to_string()),
        ("max_terms".into(), series.max_terms.to_string()),
        ("abs_tol".into(), format!("{:e}", series.abs_tol)),
        ("C".into(), hypo::euler_constant_c(series)?.to_string()),
    ];
    let table: Vec<Vec<Cell>> = rows.iter().map(|&(y, g)| vec![real(y), real(g)]).collect();
    let mass = crate::quad::trapezoid(&rows);
    Artifact::render(
        format,
        &meta,
        &["y", "g"],
        &table,
        &[("trapezoid_mass".into(), real(mass))],
    )
}
