//! Experiment orchestration: error against dimension and node count,
//! convergence against the Gauss-Jacobi baselines, and node-construction
//! timing. Every run is a pure function of its configuration and seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cluster::{kmeans_pp, pca_split, pmc, rsc, KmeParams, PcaParams, RscParams};
use crate::datagen::{DatasetKind, DatasetSpec};
use crate::error::{invalid, Error, Result};
use crate::genz::{CornerPeakForm, GenzSpec};
use crate::quadrature::{
    apply_rule, credulous_sc, exact_beta_reference, mc_reference, relative_error, tensor_grid,
    TensorGridSpec,
};
use crate::types::{DataMatrix, QuadratureRule, RngSpec};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Columns of `report.csv`, in order.
pub const REPORT_COLUMNS: [&str; 14] = [
    "experiment",
    "method",
    "dataset",
    "p",
    "k_max",
    "n_nodes",
    "genz_id",
    "repeat",
    "reference_kind",
    "estimate",
    "reference",
    "relative_error",
    "wall_time_ns",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum MethodConfig {
    Kme {
        #[serde(default = "default_r")]
        r: usize,
    },
    Pca {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Rsc {
        #[serde(default = "default_m")]
        m: usize,
    },
    Pmc {
        #[serde(default = "default_repeats")]
        repeats: usize,
    },
}

fn default_r() -> usize {
    25
}
fn default_alpha() -> f64 {
    f64::EPSILON
}
fn default_m() -> usize {
    500
}
fn default_repeats() -> usize {
    1
}

impl MethodConfig {
    /// KME(r=25), PCA(alpha=eps), RSC(M=500), PMC.
    pub fn standard_set() -> Vec<MethodConfig> {
        vec![
            MethodConfig::Pmc { repeats: 1 },
            MethodConfig::Pca { alpha: f64::EPSILON },
            MethodConfig::Rsc { m: 500 },
            MethodConfig::Kme { r: 25 },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Kme { .. } => "kme",
            MethodConfig::Pca { .. } => "pca",
            MethodConfig::Rsc { .. } => "rsc",
            MethodConfig::Pmc { .. } => "pmc",
        }
    }

    fn repeats(&self) -> usize {
        match self {
            MethodConfig::Pmc { repeats } => *repeats,
            _ => 1,
        }
    }

    /// Builds the collocation rule: cluster means weighted by cluster
    /// fractions, or the equal-weight subsample for PMC.
    pub fn build_rule(&self, data: &DataMatrix, k_max: usize, rng: RngSpec) -> Result<QuadratureRule> {
        Ok(match *self {
            MethodConfig::Kme { r } => kmeans_pp(data, &KmeParams::new(k_max, r)?, rng)?.to_rule(),
            MethodConfig::Pca { alpha } => pca_split(data, &PcaParams::new(k_max, alpha)?)?.to_rule(),
            MethodConfig::Rsc { m } => rsc(data, &RscParams::new(k_max, m)?, rng)?.to_rule(),
            MethodConfig::Pmc { .. } => pmc(data, k_max, rng)?,
        })
    }
}

/// A data set family whose dimension is supplied by the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetTemplate {
    pub kind: DatasetKind,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub rho: f64,
    #[serde(default = "default_sigma")]
    pub sigma_noise: f64,
    #[serde(default = "default_shape_alpha")]
    pub alpha: f64,
    #[serde(default = "default_shape_beta")]
    pub beta: f64,
}

fn default_sigma() -> f64 {
    0.5
}
fn default_shape_alpha() -> f64 {
    2.0
}
fn default_shape_beta() -> f64 {
    5.0
}

impl DatasetTemplate {
    pub fn new(kind: DatasetKind) -> Self {
        DatasetTemplate {
            kind,
            n: None,
            rho: 0.0,
            sigma_noise: default_sigma(),
            alpha: default_shape_alpha(),
            beta: default_shape_beta(),
        }
    }

    fn spec(&self, p: usize, default_n: usize) -> DatasetSpec {
        DatasetSpec {
            kind: self.kind,
            p,
            n: self.n.unwrap_or(default_n),
            rho: self.rho,
            sigma_noise: self.sigma_noise,
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}

/// A Genz function by id, optionally with explicit parameter vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionEntry {
    Id(u8),
    Custom {
        id: u8,
        #[serde(default)]
        a: Option<Vec<f64>>,
        #[serde(default)]
        u: Option<Vec<f64>>,
    },
}

impl FunctionEntry {
    pub fn id(&self) -> u8 {
        match self {
            FunctionEntry::Id(id) | FunctionEntry::Custom { id, .. } => *id,
        }
    }

    pub fn spec(&self, p: usize, corner: CornerPeakForm) -> Result<GenzSpec> {
        let mut spec = GenzSpec::standard(self.id(), p)?;
        if let FunctionEntry::Custom { a, u, .. } = self {
            if let Some(a) = a {
                spec.a = a.clone();
            }
            if let Some(u) = u {
                spec.u = u.clone();
            }
        }
        spec.corner = corner;
        spec.validate()?;
        if spec.dim() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: spec.dim(),
            });
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_datasets")]
    pub datasets: Vec<DatasetTemplate>,
    #[serde(default = "MethodConfig::standard_set")]
    pub methods: Vec<MethodConfig>,
    #[serde(default)]
    pub k_max: Vec<usize>,
    #[serde(default)]
    pub p: Vec<usize>,
    #[serde(default = "default_functions")]
    pub functions: Vec<FunctionEntry>,
    #[serde(default)]
    pub corner: CornerPeakForm,
    #[serde(default)]
    pub seed: u64,
    /// Sample size for data sets that do not set their own.
    #[serde(default = "default_n")]
    pub n: usize,
    /// Multiplies every sample size (`--scale` for quick runs).
    #[serde(default = "default_scale")]
    pub scale: f64,
    /// Correlations for the convergence comparison.
    #[serde(default = "default_rhos")]
    pub rhos: Vec<f64>,
    /// Finest grid level `l` for the convergence comparison.
    #[serde(default = "default_l_max")]
    pub l_max: u32,
    #[serde(default = "default_pmc_repeats")]
    pub pmc_repeats: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
}

fn default_datasets() -> Vec<DatasetTemplate> {
    vec![
        DatasetTemplate::new(DatasetKind::CorrelatedGaussian),
        DatasetTemplate::new(DatasetKind::IidBeta),
        DatasetTemplate::new(DatasetKind::Polynomial),
    ]
}
fn default_functions() -> Vec<FunctionEntry> {
    (1..=6).map(FunctionEntry::Id).collect()
}
fn default_n() -> usize {
    100_000
}
fn default_scale() -> f64 {
    1.0
}
fn default_rhos() -> Vec<f64> {
    vec![0.0, 0.5, 0.8]
}
fn default_l_max() -> u32 {
    6
}
fn default_pmc_repeats() -> usize {
    25
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) {
            return Err(invalid("scale must be positive"));
        }
        if let Some(&p) = self.p.iter().find(|&&p| p == 0) {
            return Err(invalid(format!("invalid dimension {p}")));
        }
        if self.k_max.contains(&0) {
            return Err(invalid("k_max values must be positive"));
        }
        for f in &self.functions {
            if !(1..=6).contains(&f.id()) {
                return Err(invalid(format!("Genz id must be in 1..=6, got {}", f.id())));
            }
        }
        for m in &self.methods {
            match *m {
                MethodConfig::Kme { r: 0 } => return Err(invalid("KME needs r >= 1")),
                MethodConfig::Pca { alpha } if !(alpha >= 0.0) => {
                    return Err(invalid("PCA needs alpha >= 0"))
                }
                MethodConfig::Rsc { m } if m < 4 => return Err(invalid("RSC needs M >= 4")),
                MethodConfig::Pmc { repeats: 0 } => {
                    return Err(invalid("PMC needs at least one repeat"))
                }
                _ => {}
            }
        }
        if self.rhos.iter().any(|r| !(r.abs() < 1.0)) {
            return Err(invalid("correlations must satisfy |rho| < 1"));
        }
        Ok(())
    }

    fn scaled_n(&self, n: usize) -> usize {
        ((n as f64 * self.scale).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub method: String,
    pub dataset: String,
    pub p: usize,
    pub k_max: usize,
    pub n_nodes: usize,
    pub genz_id: u8,
    pub repeat: usize,
    pub reference_kind: String,
    pub estimate: Option<f64>,
    pub reference: Option<f64>,
    pub relative_error: Option<f64>,
    pub wall_time_ns: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        self.render_csv(true)
    }

    /// CSV without the timing column, for golden-file comparison.
    pub fn to_csv_without_timing(&self) -> String {
        self.render_csv(false)
    }

    fn render_csv(&self, timing: bool) -> String {
        let mut out = String::new();
        let header: Vec<&str> = REPORT_COLUMNS
            .iter()
            .copied()
            .filter(|c| timing || *c != "wall_time_ns")
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.experiment,
                r.method,
                r.dataset,
                r.p,
                r.k_max,
                r.n_nodes,
                r.genz_id,
                r.repeat,
                r.reference_kind,
                fmt_opt(r.estimate),
                fmt_opt(r.reference),
                fmt_opt(r.relative_error),
            );
            if timing {
                let _ = write!(out, ",{}", r.wall_time_ns);
            }
            let _ = writeln!(out, ",{}", r.seed);
        }
        out
    }

    /// Mean, min and max relative error over repeats of each cell.
    pub fn summary(&self) -> serde_json::Value {
        type Key = (String, String, usize, usize, u8, String);
        let mut groups: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
        for r in &self.rows {
            if let Some(e) = r.relative_error {
                let key = (
                    r.method.clone(),
                    r.dataset.clone(),
                    r.p,
                    r.k_max,
                    r.genz_id,
                    r.reference_kind.clone(),
                );
                groups.entry(key).or_default().push(e);
            }
        }
        let cells: Vec<serde_json::Value> = groups
            .into_iter()
            .map(|((method, dataset, p, k_max, genz_id, reference_kind), errs)| {
                let mean = errs.iter().sum::<f64>() / errs.len() as f64;
                let min = errs.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = errs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                serde_json::json!({
                    "method": method, "dataset": dataset, "p": p, "k_max": k_max,
                    "genz_id": genz_id, "reference_kind": reference_kind,
                    "repeats": errs.len(), "mean_relative_error": mean,
                    "min_relative_error": min, "max_relative_error": max,
                })
            })
            .collect();
        serde_json::json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "experiment": self.experiment,
            "rows": self.rows.len(),
            "cells": cells,
        })
    }

    /// Writes `report.csv` and `summary.json` into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.csv"), self.to_csv())?;
        std::fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&self.summary())?,
        )?;
        Ok(())
    }
}

/// Generates data sets on demand, once per (spec, seed), optionally
/// persisting them as CSV under a content-hash file name.
pub struct DatasetStore {
    seed: u64,
    cache_dir: Option<PathBuf>,
    memory: Mutex<BTreeMap<String, std::sync::Arc<DataMatrix>>>,
}

impl DatasetStore {
    pub fn new(seed: u64, cache_dir: Option<PathBuf>) -> Self {
        DatasetStore {
            seed,
            cache_dir,
            memory: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn rng_for(&self, spec: &DatasetSpec) -> RngSpec {
        RngSpec::new(self.seed).derive(&[
            0xda7a,
            spec.kind as u64,
            spec.p as u64,
            spec.n as u64,
            spec.rho.to_bits(),
            spec.sigma_noise.to_bits(),
            spec.alpha.to_bits(),
            spec.beta.to_bits(),
        ])
    }

    fn key(&self, spec: &DatasetSpec) -> String {
        let json = serde_json::to_string(spec).expect("dataset spec serialises");
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        h.update(self.seed.to_le_bytes());
        hex::encode(&h.finalize()[..12])
    }

    pub fn get(&self, spec: &DatasetSpec) -> Result<std::sync::Arc<DataMatrix>> {
        let key = self.key(spec);
        if let Some(d) = self.memory.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let data = self.load_or_generate(spec, &key)?;
        let data = std::sync::Arc::new(data);
        self.memory.lock().unwrap().insert(key, data.clone());
        Ok(data)
    }

    fn load_or_generate(&self, spec: &DatasetSpec, key: &str) -> Result<DataMatrix> {
        let path = self.cache_dir.as_ref().map(|d| d.join(format!("dataset-{key}.csv")));
        if let Some(path) = &path {
            if path.exists() {
                let file = std::fs::File::open(path)?;
                return DataMatrix::read_csv(std::io::BufReader::new(file));
            }
        }
        let data = spec.generate_benchmark(self.rng_for(spec))?;
        if let Some(path) = &path {
            std::fs::create_dir_all(path.parent().unwrap())?;
            let file = std::fs::File::create(path)?;
            data.write_csv(std::io::BufWriter::new(file))?;
        }
        Ok(data)
    }
}

struct Cell<'a> {
    method_idx: usize,
    method: &'a MethodConfig,
    dataset: DatasetSpec,
    k_max: usize,
    repeat: usize,
}

fn cell_rng(seed: u64, experiment: u64, cell: &Cell<'_>) -> RngSpec {
    RngSpec::new(seed).derive(&[
        experiment,
        cell.method_idx as u64,
        cell.dataset.kind as u64,
        cell.dataset.p as u64,
        cell.k_max as u64,
        cell.repeat as u64,
    ])
}

fn sweep(config: &ExperimentConfig, experiment: &str, tag: u64) -> Result<ExperimentReport> {
    config.validate()?;
    let store = DatasetStore::new(config.seed, config.cache_dir.clone());
    let mut cells = Vec::new();
    for template in &config.datasets {
        for &p in &config.p {
            let dataset = template.spec(p, config.scaled_n(template.n.unwrap_or(config.n)));
            for (method_idx, method) in config.methods.iter().enumerate() {
                for &k_max in &config.k_max {
                    for repeat in 0..method.repeats() {
                        cells.push(Cell {
                            method_idx,
                            method,
                            dataset: dataset.clone(),
                            k_max,
                            repeat,
                        });
                    }
                }
            }
        }
    }

    let rows: Vec<Vec<ReportRow>> = cells
        .par_iter()
        .map(|cell| {
            let data = store.get(&cell.dataset)?;
            let rng = cell_rng(config.seed, tag, cell);
            let start = Instant::now();
            let rule = cell.method.build_rule(&data, cell.k_max, rng)?;
            let elapsed = start.elapsed().as_nanos() as u64;
            let mut rows = Vec::with_capacity(config.functions.len());
            for entry in &config.functions {
                let f = entry.spec(cell.dataset.p, config.corner)?;
                let estimate = apply_rule(&rule, |x| f.eval_unchecked(x))?;
                let reference = mc_reference(&data, |x| f.eval_unchecked(x))?;
                rows.push(ReportRow {
                    experiment: experiment.to_string(),
                    method: cell.method.name().to_string(),
                    dataset: cell.dataset.label(),
                    p: cell.dataset.p,
                    k_max: cell.k_max,
                    n_nodes: rule.len(),
                    genz_id: f.id,
                    repeat: cell.repeat,
                    reference_kind: "sample".into(),
                    estimate: Some(estimate),
                    reference: Some(reference),
                    relative_error: Some(relative_error(estimate, reference)?),
                    wall_time_ns: elapsed,
                    seed: config.seed,
                });
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(ExperimentReport {
        experiment: experiment.to_string(),
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Relative error of every (method, data set, p, k_max) cell for each
/// Genz function, against the sample mean.
pub fn run_error_vs_dimension(config: &ExperimentConfig) -> Result<ExperimentReport> {
    sweep(config, "dim", 1)
}

/// Same sweep, read as a function of `k_max` at fixed dimension.
pub fn run_error_vs_k(config: &ExperimentConfig) -> Result<ExperimentReport> {
    sweep(config, "k", 2)
}

/// Two-dimensional copula-Beta comparison of PCA, PMC, the full
/// Gauss-Jacobi grid and credulous collocation at `k = (2^l + 1)^2`.
/// Errors are reported against the sample mean and, for `rho = 0`, against
/// the exact product-Beta expectation.
pub fn run_convergence_comparison(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let store = DatasetStore::new(config.seed, config.cache_dir.clone());
    let shape = config
        .datasets
        .iter()
        .find(|d| d.kind == DatasetKind::CopulaBeta)
        .cloned()
        .unwrap_or_else(|| DatasetTemplate::new(DatasetKind::CopulaBeta));
    let functions: Vec<GenzSpec> = config
        .functions
        .iter()
        .map(|f| f.spec(2, config.corner))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for &rho in &config.rhos {
        let spec = DatasetTemplate { rho, ..shape.clone() }
            .spec(2, config.scaled_n(shape.n.unwrap_or(config.n)));
        let data = store.get(&spec)?;
        let samples: Vec<f64> = functions
            .iter()
            .map(|f| mc_reference(&data, |x| f.eval_unchecked(x)))
            .collect::<Result<_>>()?;
        let exact: Vec<Option<f64>> = if rho == 0.0 {
            functions
                .iter()
                .map(|f| exact_beta_reference(f, spec.alpha, spec.beta).map(Some))
                .collect::<Result<_>>()?
        } else {
            vec![None; functions.len()]
        };

        for level in 1..=config.l_max {
            let grid_spec = TensorGridSpec {
                level,
                p: 2,
                alpha: spec.alpha,
                beta: spec.beta,
            };
            let k = grid_spec.nodes_per_dim().pow(2);
            if k > data.n_rows() {
                break;
            }
            let mut rules: Vec<(&str, usize, QuadratureRule, u64)> = Vec::new();
            let timed = |f: &dyn Fn() -> Result<QuadratureRule>| -> Result<(QuadratureRule, u64)> {
                let start = Instant::now();
                let rule = f()?;
                Ok((rule, start.elapsed().as_nanos() as u64))
            };
            let (r, t) = timed(&|| MethodConfig::Pca { alpha: f64::EPSILON }.build_rule(&data, k, RngSpec::new(0)))?;
            rules.push(("pca", 0, r, t));
            let pmc_rules: Vec<(QuadratureRule, u64)> = (0..config.pmc_repeats)
                .into_par_iter()
                .map(|rep| {
                    let rng = RngSpec::new(config.seed).derive(&[3, rho.to_bits(), level as u64, rep as u64]);
                    timed(&|| pmc(&data, k, rng))
                })
                .collect::<Result<_>>()?;
            for (rep, (r, t)) in pmc_rules.into_iter().enumerate() {
                rules.push(("pmc", rep, r, t));
            }
            let (r, t) = timed(&|| tensor_grid(&grid_spec))?;
            rules.push(("grid", 0, r, t));
            let (r, t) = timed(&|| credulous_sc(&data, &grid_spec))?;
            rules.push(("credulous-sc", 0, r, t));

            for (method, repeat, rule, elapsed) in &rules {
                for (fi, f) in functions.iter().enumerate() {
                    let estimate = apply_rule(rule, |x| f.eval_unchecked(x))?;
                    let refs = [("sample", Some(samples[fi])), ("exact-beta", exact[fi])];
                    for (kind, reference) in refs {
                        let Some(reference) = reference else { continue };
                        rows.push(ReportRow {
                            experiment: "convergence".into(),
                            method: method.to_string(),
                            dataset: spec.label(),
                            p: 2,
                            k_max: k,
                            n_nodes: rule.len(),
                            genz_id: f.id,
                            repeat: *repeat,
                            reference_kind: kind.into(),
                            estimate: Some(estimate),
                            reference: Some(reference),
                            relative_error: Some(relative_error(estimate, reference)?),
                            wall_time_ns: *elapsed,
                            seed: config.seed,
                        });
                    }
                }
            }
        }
    }
    Ok(ExperimentReport {
        experiment: "convergence".into(),
        rows,
    })
}

/// Wall-clock time of node construction only, cells run one at a time.
pub fn run_timing(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let store = DatasetStore::new(config.seed, config.cache_dir.clone());
    let mut rows = Vec::new();
    for template in &config.datasets {
        for &p in &config.p {
            let dataset = template.spec(p, config.scaled_n(template.n.unwrap_or(config.n)));
            let data = store.get(&dataset)?;
            for (method_idx, method) in config.methods.iter().enumerate() {
                for &k_max in &config.k_max {
                    let cell = Cell {
                        method_idx,
                        method,
                        dataset: dataset.clone(),
                        k_max,
                        repeat: 0,
                    };
                    let rng = cell_rng(config.seed, 4, &cell);
                    let start = Instant::now();
                    let rule = method.build_rule(&data, k_max, rng)?;
                    let elapsed = (start.elapsed().as_nanos() as u64).max(1);
                    rows.push(ReportRow {
                        experiment: "timing".into(),
                        method: method.name().into(),
                        dataset: dataset.label(),
                        p,
                        k_max,
                        n_nodes: rule.len(),
                        genz_id: 0,
                        repeat: 0,
                        reference_kind: String::new(),
                        estimate: None,
                        reference: None,
                        relative_error: None,
                        wall_time_ns: elapsed,
                        seed: config.seed,
                    });
                }
            }
        }
    }
    Ok(ExperimentReport {
        experiment: "timing".into(),
        rows,
    })
}
