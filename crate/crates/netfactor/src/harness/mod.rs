//! Synthetic-data generation, experiment protocols, and report files.
//!
//! An experiment is described by a flat JSON config (see
//! [`ExperimentSpec::from_json_file`]) and produces three artifacts in its
//! output directory: `trials.csv` (one row per trial × variant × metric),
//! `summary.csv` (mean and standard deviation per variant × metric) and
//! `summary.txt` (the same aggregates as an aligned table). The convergence
//! protocol additionally writes one `trace_<variant>_k<K>.csv` per run.
//! Reports contain no timestamps; identical configs and seeds give
//! byte-identical files.

pub mod io;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::eval::{self, ScoreConfig};
use crate::factor::{factorize, FactorConfig, Variant};
use crate::matcore::DenseMatrix;
use crate::netstruct::{self, HorizontalNetwork};
use crate::{Error, Result};

/// Which synthetic protocol to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Cost traces for every variant across a list of latent dimensions.
    Convergence,
    /// Community preservation of reconstructed networks (pair metrics).
    Community,
    /// Degree-sequence preservation (Pearson correlation).
    Degree,
    /// Maximum-spanning-tree preservation (edge overlap).
    Tree,
    /// Downstream clustering on a planted-community instance.
    Clustering,
    /// Held-out prediction error on a planted instance's vertical network.
    Recommendation,
}

impl Protocol {
    fn default_variants(&self) -> Vec<Variant> {
        match self {
            Protocol::Community => vec![Variant::Nnmf, Variant::Cnmf],
            Protocol::Degree => vec![Variant::Nnmf, Variant::Dnmf],
            Protocol::Tree => vec![Variant::Nnmf, Variant::Tnmf],
            _ => Variant::ALL.to_vec(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Protocol::Convergence => "convergence",
            Protocol::Community => "community",
            Protocol::Degree => "degree",
            Protocol::Tree => "tree",
            Protocol::Clustering => "clustering",
            Protocol::Recommendation => "recommendation",
        }
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub protocol: Protocol,
    pub trials: usize,
    pub n: usize,
    pub p: usize,
    pub density: f64,
    pub variants: Vec<Variant>,
    pub cfg: FactorConfig,
    /// Cluster count for community comparisons; defaults to `cfg.k`.
    pub cluster_k: usize,
    /// Latent dimensions for the convergence protocol (values above
    /// min(n, p) are skipped).
    pub k_list: Vec<usize>,
    /// Planted community count for the clustering protocol.
    pub clusters: usize,
    /// Held-out fraction for the recommendation protocol.
    pub test_fraction: f64,
    pub out: PathBuf,
}

/// Flat JSON configuration; unknown keys are rejected.
#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    protocol: Protocol,
    #[serde(default)]
    trials: Option<usize>,
    n: usize,
    #[serde(default)]
    p: Option<usize>,
    #[serde(default)]
    density: Option<f64>,
    #[serde(default)]
    variants: Option<Vec<Variant>>,
    k: usize,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    alpha2: Option<f64>,
    #[serde(default)]
    max_iter: Option<usize>,
    #[serde(default)]
    sigma: Option<f64>,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    cluster_k: Option<usize>,
    #[serde(default)]
    k_list: Option<Vec<usize>>,
    #[serde(default)]
    clusters: Option<usize>,
    #[serde(default)]
    test_fraction: Option<f64>,
    #[serde(default)]
    out: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Parse a flat JSON config file.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let raw: RawConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let defaults = FactorConfig::default();
        let cfg = FactorConfig {
            k: raw.k,
            alpha: raw.alpha.unwrap_or(defaults.alpha),
            alpha2: raw.alpha2,
            max_iter: raw.max_iter.unwrap_or(defaults.max_iter),
            sigma: raw.sigma.unwrap_or(defaults.sigma),
            delta: raw.delta.unwrap_or(defaults.delta),
            stop_tol: raw.tol.unwrap_or(defaults.stop_tol),
            seed: raw.seed.unwrap_or(0),
        };
        let spec = ExperimentSpec {
            protocol: raw.protocol,
            trials: raw.trials.unwrap_or(100),
            n: raw.n,
            p: raw.p.unwrap_or(raw.n),
            density: raw.density.unwrap_or(1.0),
            variants: raw
                .variants
                .unwrap_or_else(|| raw.protocol.default_variants()),
            cluster_k: raw.cluster_k.unwrap_or(raw.k),
            k_list: raw.k_list.unwrap_or_else(|| vec![10, 100, 1000]),
            clusters: raw.clusters.unwrap_or(4),
            test_fraction: raw.test_fraction.unwrap_or(0.2),
            out: raw.out.unwrap_or_else(|| PathBuf::from("experiment_out")),
            cfg,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.cfg.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if self.n == 0 || self.p == 0 {
            return Err(Error::InvalidConfig("n and p must be >= 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidConfig("density must be in (0, 1]".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidConfig("variants must not be empty".into()));
        }
        if matches!(self.protocol, Protocol::Recommendation)
            && !(self.test_fraction > 0.0 && self.test_fraction < 1.0)
        {
            return Err(Error::InvalidConfig(
                "test_fraction must be in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Generate a random ⟨V, H⟩ pair: V has i.i.d. uniform(0,1) entries and H is
/// a symmetric zero-diagonal network where each node pair carries an edge
/// with the given probability and uniform(0,1) weight.
pub fn generate_synthetic_pair(
    n: usize,
    p: usize,
    density: f64,
    seed: u64,
) -> Result<(DenseMatrix, HorizontalNetwork)> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidConfig("density must be in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = DenseMatrix::from_shape_fn((n, p), |_| rng.random::<f64>());
    let mut w = DenseMatrix::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            if density >= 1.0 || rng.random::<f64>() < density {
                let weight: f64 = rng.random();
                w[[i, j]] = weight;
                w[[j, i]] = weight;
            }
        }
    }
    Ok((v, HorizontalNetwork::new(w)?))
}

/// A documents×words style instance with planted communities: block-heavy
/// citation-style network plus block-aligned word usage.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub v: DenseMatrix,
    pub h: HorizontalNetwork,
    pub labels: Vec<usize>,
}

/// Deterministically generate a planted-community instance.
pub fn generate_planted_instance(
    n: usize,
    p: usize,
    clusters: usize,
    seed: u64,
) -> Result<PlantedInstance> {
    if clusters == 0 || clusters > n {
        return Err(Error::InvalidConfig(format!(
            "planted instance needs 1 <= clusters <= n, got {clusters}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<usize> = (0..n).map(|i| (i * clusters / n).min(clusters - 1)).collect();

    let mut w = DenseMatrix::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let (prob, lo, hi) = if labels[i] == labels[j] {
                (0.25, 0.5, 1.0)
            } else {
                (0.02, 0.0, 0.2)
            };
            if rng.random::<f64>() < prob {
                let weight = lo + (hi - lo) * rng.random::<f64>();
                w[[i, j]] = weight;
                w[[j, i]] = weight;
            }
        }
    }

    let block = (p / clusters).max(1);
    let mut v = DenseMatrix::zeros((n, p));
    for i in 0..n {
        let lo_col = labels[i] * block;
        let hi_col = if labels[i] + 1 == clusters { p } else { (labels[i] + 1) * block };
        for j in 0..p {
            let in_block = j >= lo_col && j < hi_col;
            let (prob, lo, hi) = if in_block { (0.35, 0.4, 1.0) } else { (0.04, 0.0, 0.3) };
            if rng.random::<f64>() < prob {
                v[[i, j]] = lo + (hi - lo) * rng.random::<f64>();
            }
        }
    }

    Ok(PlantedInstance {
        v,
        h: HorizontalNetwork::new(w)?,
        labels,
    })
}

/// One metric value from one trial.
#[derive(Debug, Clone)]
pub struct TrialRow {
    pub trial: usize,
    pub variant: Variant,
    pub metric: &'static str,
    pub value: f64,
}

/// Aggregate over trials for one variant × metric cell.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub variant: Variant,
    pub metric: &'static str,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

/// Everything an experiment produced (also written to disk).
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<TrialRow>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentReport {
    /// Mean for one variant × metric cell, if present.
    pub fn mean(&self, variant: Variant, metric: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.variant == variant && s.metric == metric)
            .map(|s| s.mean)
    }
}

fn trial_cfg(spec: &ExperimentSpec, trial: usize) -> FactorConfig {
    FactorConfig {
        seed: spec.cfg.seed.wrapping_add(trial as u64),
        ..spec.cfg.clone()
    }
}

fn run_structure_trial(spec: &ExperimentSpec, trial: usize) -> Result<Vec<TrialRow>> {
    let cfg = trial_cfg(spec, trial);
    let (v, h) = generate_synthetic_pair(spec.n, spec.p, spec.density, cfg.seed)?;
    let mut rows = Vec::new();
    for &variant in &spec.variants {
        let result = factorize(&v, &h, None, variant, &cfg)?;
        match spec.protocol {
            Protocol::Degree => {
                rows.push(TrialRow {
                    trial,
                    variant,
                    metric: "degree_correlation",
                    value: eval::degree_correlation(&h, &result.a),
                });
            }
            Protocol::Tree => {
                let t_h = netstruct::max_spanning_tree(&h);
                let recon = eval::reconstruction_network(&result.a);
                let t_r = netstruct::max_spanning_tree(&recon);
                rows.push(TrialRow {
                    trial,
                    variant,
                    metric: "tree_overlap",
                    value: netstruct::tree_overlap(&t_h, &t_r)? as f64,
                });
            }
            Protocol::Community => {
                let basis = netstruct::community_basis(&h, spec.cluster_k)?.basis;
                let truth = eval::kmeans(&basis, spec.cluster_k, cfg.seed, 10)?;
                let pred = eval::kmeans(&result.a, spec.cluster_k, cfg.seed, 10)?;
                let pc = eval::pair_counts(&truth, &pred)?;
                rows.push(TrialRow {
                    trial,
                    variant,
                    metric: "jaccard",
                    value: eval::jaccard(&pc),
                });
                rows.push(TrialRow {
                    trial,
                    variant,
                    metric: "folkes_mallows",
                    value: eval::folkes_mallows(&pc),
                });
                rows.push(TrialRow {
                    trial,
                    variant,
                    metric: "f1",
                    value: eval::f1_measure(&pc),
                });
            }
            _ => unreachable!("structure trial called for {:?}", spec.protocol),
        }
    }
    Ok(rows)
}

fn run_clustering_trial(spec: &ExperimentSpec, trial: usize) -> Result<Vec<TrialRow>> {
    let cfg = trial_cfg(spec, trial);
    let planted = generate_planted_instance(spec.n, spec.p, spec.clusters, cfg.seed)?;
    let mut rows = Vec::new();
    for &variant in &spec.variants {
        let result = factorize(&planted.v, &planted.h, None, variant, &cfg)?;
        let pred = eval::kmeans(&result.a, spec.clusters, cfg.seed, 10)?;
        let pc = eval::pair_counts(&planted.labels, &pred)?;
        rows.push(TrialRow { trial, variant, metric: "jaccard", value: eval::jaccard(&pc) });
        rows.push(TrialRow {
            trial,
            variant,
            metric: "folkes_mallows",
            value: eval::folkes_mallows(&pc),
        });
        rows.push(TrialRow { trial, variant, metric: "f1", value: eval::f1_measure(&pc) });

        // chance level: mean metric over random permutations of the
        // predicted labels against the planted truth
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_ba5e);
        let mut perm = pred.clone();
        let mut base = [0.0f64; 3];
        let reps = 100;
        for _ in 0..reps {
            for i in (1..perm.len()).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let pc = eval::pair_counts(&planted.labels, &perm)?;
            base[0] += eval::jaccard(&pc);
            base[1] += eval::folkes_mallows(&pc);
            base[2] += eval::f1_measure(&pc);
        }
        for (metric, total) in ["baseline_jaccard", "baseline_folkes_mallows", "baseline_f1"]
            .iter()
            .zip(base)
        {
            rows.push(TrialRow {
                trial,
                variant,
                metric,
                value: total / reps as f64,
            });
        }
    }
    Ok(rows)
}

fn run_recommendation_trial(spec: &ExperimentSpec, trial: usize) -> Result<Vec<TrialRow>> {
    let cfg = trial_cfg(spec, trial);
    // planted instance: the vertical network carries block structure, so
    // held-out entries are actually predictable
    let planted = generate_planted_instance(spec.n, spec.p, spec.clusters, cfg.seed)?;
    let (v, h) = (planted.v, planted.h);

    // hold out a fixed fraction of entries by partial Fisher-Yates
    let total = spec.n * spec.p;
    let held = ((total as f64) * spec.test_fraction).floor() as usize;
    let held = held.clamp(2, total.saturating_sub(1));
    let mut idx: Vec<usize> = (0..total).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7e57_da7a);
    for i in 0..held {
        let j = rng.random_range(i..total);
        idx.swap(i, j);
    }
    let test_idx = &idx[..held];
    let mut train = v.clone();
    for &flat in test_idx {
        train[[flat / spec.p, flat % spec.p]] = 0.0;
    }

    let mut rows = Vec::new();
    for &variant in &spec.variants {
        let result = factorize(&train, &h, None, variant, &cfg)?;
        let recon = result.a.dot(&result.x);
        let pred: Vec<f64> = test_idx
            .iter()
            .map(|&f| recon[[f / spec.p, f % spec.p]])
            .collect();
        let actual: Vec<f64> = test_idx
            .iter()
            .map(|&f| v[[f / spec.p, f % spec.p]])
            .collect();
        rows.push(TrialRow {
            trial,
            variant,
            metric: "mae",
            value: eval::mae(&pred, &actual)?,
        });
        rows.push(TrialRow {
            trial,
            variant,
            metric: "pearson",
            value: eval::pearson(&pred, &actual)?,
        });
    }
    Ok(rows)
}

fn run_convergence(spec: &ExperimentSpec) -> Result<Vec<TrialRow>> {
    let mut rows = Vec::new();
    let limit = spec.n.min(spec.p);
    let (v, h) = generate_synthetic_pair(spec.n, spec.p, spec.density, spec.cfg.seed)?;
    for &k in spec.k_list.iter().filter(|&&k| k >= 1 && k <= limit) {
        for &variant in &spec.variants {
            let cfg = FactorConfig { k, ..spec.cfg.clone() };
            let result = factorize(&v, &h, None, variant, &cfg)?;
            io::save_trace(
                &result.trace,
                spec.out.join(format!("trace_{}_k{}.csv", variant.name(), k)),
            )?;
            rows.push(TrialRow {
                trial: k,
                variant,
                metric: "final_cost",
                value: *result.trace.last().unwrap_or(&f64::NAN),
            });
            rows.push(TrialRow {
                trial: k,
                variant,
                metric: "iterations",
                value: result.trace.len() as f64,
            });
        }
    }
    Ok(rows)
}

fn aggregate(spec: &ExperimentSpec, rows: &[TrialRow]) -> Vec<SummaryRow> {
    let mut order: Vec<(Variant, &'static str)> = Vec::new();
    for row in rows {
        if !order.contains(&(row.variant, row.metric)) {
            order.push((row.variant, row.metric));
        }
    }
    order
        .into_iter()
        .map(|(variant, metric)| {
            let values: Vec<f64> = rows
                .iter()
                .filter(|r| r.variant == variant && r.metric == metric)
                .map(|r| r.value)
                .collect();
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let std = if n > 1 {
                (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64)
                    .sqrt()
            } else {
                0.0
            };
            let _ = spec;
            SummaryRow {
                variant,
                metric,
                mean,
                std,
                trials: n,
            }
        })
        .collect()
}

fn write_reports(spec: &ExperimentSpec, report: &ExperimentReport) -> Result<()> {
    let mut trials = String::from("trial,variant,metric,value\n");
    for r in &report.rows {
        let _ = writeln!(trials, "{},{},{},{}", r.trial, r.variant, r.metric, r.value);
    }
    let path = spec.out.join("trials.csv");
    std::fs::write(&path, trials).map_err(|e| Error::io(path.display().to_string(), e))?;

    let mut summary = String::from("variant,metric,mean,std,trials\n");
    for s in &report.summary {
        let _ = writeln!(
            summary,
            "{},{},{},{},{}",
            s.variant, s.metric, s.mean, s.std, s.trials
        );
    }
    let path = spec.out.join("summary.csv");
    std::fs::write(&path, summary).map_err(|e| Error::io(path.display().to_string(), e))?;

    let path = spec.out.join("summary.txt");
    std::fs::write(&path, render_summary(spec, report))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// The aggregate table as human-readable text (mean ± std per cell).
pub fn render_summary(spec: &ExperimentSpec, report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "protocol={} n={} p={} k={} alpha={} trials={} seed={}",
        spec.protocol.name(),
        spec.n,
        spec.p,
        spec.cfg.k,
        spec.cfg.alpha,
        spec.trials,
        spec.cfg.seed
    );
    if matches!(spec.protocol, Protocol::Tree) {
        let _ = writeln!(out, "max overlap = {}", spec.n - 1);
    }
    let _ = writeln!(out, "{:<8} {:<26} {:>12} {:>12}", "variant", "metric", "mean", "std");
    for s in &report.summary {
        let _ = writeln!(
            out,
            "{:<8} {:<26} {:>12.4} {:>12.4}",
            s.variant.to_string(),
            s.metric,
            s.mean,
            s.std
        );
    }
    out
}

/// Run the configured protocol and write `trials.csv`, `summary.csv`,
/// `summary.txt` (and convergence traces) under `spec.out`.
///
/// Trials run in parallel; per-trial seeds are `seed + trial_index`, so
/// parallel and serial runs produce identical reports.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    std::fs::create_dir_all(&spec.out)
        .map_err(|e| Error::io(spec.out.display().to_string(), e))?;

    let rows: Vec<TrialRow> = match spec.protocol {
        Protocol::Convergence => run_convergence(spec)?,
        Protocol::Community | Protocol::Degree | Protocol::Tree => {
            let per_trial: Vec<Result<Vec<TrialRow>>> = (0..spec.trials)
                .into_par_iter()
                .map(|trial| run_structure_trial(spec, trial))
                .collect();
            let mut rows = Vec::new();
            for r in per_trial {
                rows.extend(r?);
            }
            rows
        }
        Protocol::Clustering => {
            let per_trial: Vec<Result<Vec<TrialRow>>> = (0..spec.trials)
                .into_par_iter()
                .map(|trial| run_clustering_trial(spec, trial))
                .collect();
            let mut rows = Vec::new();
            for r in per_trial {
                rows.extend(r?);
            }
            rows
        }
        Protocol::Recommendation => {
            let per_trial: Vec<Result<Vec<TrialRow>>> = (0..spec.trials)
                .into_par_iter()
                .map(|trial| run_recommendation_trial(spec, trial))
                .collect();
            let mut rows = Vec::new();
            for r in per_trial {
                rows.extend(r?);
            }
            rows
        }
    };

    let report = ExperimentReport {
        summary: aggregate(spec, &rows),
        rows,
    };
    write_reports(spec, &report)?;
    Ok(report)
}

/// Default k-means restarts used by the structure protocols.
pub const DEFAULT_RESTARTS: usize = 10;

/// Convenience constructor used by tests and examples.
pub fn spec_for(
    protocol: Protocol,
    n: usize,
    p: usize,
    trials: usize,
    cfg: FactorConfig,
    out: impl Into<PathBuf>,
) -> ExperimentSpec {
    ExperimentSpec {
        protocol,
        trials,
        n,
        p,
        density: 1.0,
        variants: protocol.default_variants(),
        cluster_k: cfg.k,
        k_list: vec![10, 100, 1000],
        clusters: 4,
        test_fraction: 0.2,
        out: out.into(),
        cfg,
    }
}

/// Score a factor matrix against a network with the default report shape
/// (used by the CLI `eval` subcommand).
pub fn score_factors(
    h: &HorizontalNetwork,
    a: &DenseMatrix,
    cluster_k: usize,
    seed: u64,
) -> Result<eval::StructureScores> {
    eval::structure_scores(
        h,
        a,
        &ScoreConfig {
            cluster_k,
            seed,
            restarts: DEFAULT_RESTARTS,
        },
    )
}
