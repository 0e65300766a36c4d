//! Evaluation machinery: pair-counting clustering metrics, k-means for
//! downstream clustering, prediction metrics, and structure-preservation
//! scores for factorization results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factor;
use crate::matcore::{self, DenseMatrix};
use crate::netstruct::{self, HorizontalNetwork};
use crate::{Error, Result};

/// Pair counts over all unordered point pairs:
/// `a` pairs co-clustered in both labelings, `b` co-clustered only in the
/// benchmark, `c` co-clustered only in the prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// Count agreeing / disagreeing pairs between a benchmark and a predicted
/// labeling. Label ids are arbitrary; only co-membership matters.
pub fn pair_counts(truth: &[usize], pred: &[usize]) -> Result<PairCounts> {
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch {
            op: "pair_counts",
            left: truth.len().to_string(),
            right: pred.len().to_string(),
        });
    }
    let n = truth.len();
    let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
    for i in 0..n {
        for j in (i + 1)..n {
            let same_truth = truth[i] == truth[j];
            let same_pred = pred[i] == pred[j];
            match (same_truth, same_pred) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => {}
            }
        }
    }
    Ok(PairCounts { a, b, c })
}

/// Jaccard coefficient `a / (a + b + c)`; 0 on an empty denominator.
pub fn jaccard(pc: &PairCounts) -> f64 {
    let den = pc.a + pc.b + pc.c;
    if den == 0 {
        0.0
    } else {
        pc.a as f64 / den as f64
    }
}

/// Folkes & Mallows index `√(a/(a+b) · a/(a+c))`; 0 on empty denominators.
pub fn folkes_mallows(pc: &PairCounts) -> f64 {
    if pc.a + pc.b == 0 || pc.a + pc.c == 0 {
        return 0.0;
    }
    let p1 = pc.a as f64 / (pc.a + pc.b) as f64;
    let p2 = pc.a as f64 / (pc.a + pc.c) as f64;
    (p1 * p2).sqrt()
}

/// F1 measure `2a² / (2a² + ac + ab)`; 0 when `a = 0`.
pub fn f1_measure(pc: &PairCounts) -> f64 {
    if pc.a == 0 {
        return 0.0;
    }
    let a = pc.a as f64;
    2.0 * a * a / (2.0 * a * a + a * pc.c as f64 + a * pc.b as f64)
}

fn sq_dist(points: &DenseMatrix, i: usize, center: &[f64]) -> f64 {
    points
        .row(i)
        .iter()
        .zip(center)
        .map(|(p, c)| (p - c) * (p - c))
        .sum()
}

/// One Lloyd run from given centers; returns labels plus the WCSS after
/// each assignment step (non-increasing across iterations).
fn lloyd(
    points: &DenseMatrix,
    mut centers: Vec<Vec<f64>>,
    max_iter: usize,
) -> (Vec<usize>, Vec<f64>) {
    let n = points.nrows();
    let d = points.ncols();
    let clusters = centers.len();
    let mut labels = vec![usize::MAX; n];
    let mut wcss_trace = Vec::new();
    for _ in 0..max_iter {
        let mut changed = false;
        let mut wcss = 0.0;
        for i in 0..n {
            let mut arg = 0;
            let mut best = sq_dist(points, i, &centers[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let dist = sq_dist(points, i, center);
                if dist < best {
                    best = dist;
                    arg = c;
                }
            }
            wcss += best;
            if labels[i] != arg {
                labels[i] = arg;
                changed = true;
            }
        }
        wcss_trace.push(wcss);
        if !changed {
            break;
        }
        let mut counts = vec![0usize; clusters];
        for center in centers.iter_mut() {
            center.iter_mut().for_each(|v| *v = 0.0);
        }
        for i in 0..n {
            counts[labels[i]] += 1;
            for j in 0..d {
                centers[labels[i]][j] += points[[i, j]];
            }
        }
        for c in 0..clusters {
            if counts[c] > 0 {
                centers[c].iter_mut().for_each(|v| *v /= counts[c] as f64);
            } else {
                // re-seed an empty cluster at the point farthest from its
                // current center (deterministic rule)
                let mut far = 0;
                let mut far_dist = -1.0;
                for i in 0..n {
                    let dist = sq_dist(points, i, &centers[labels[i]]);
                    if dist > far_dist {
                        far_dist = dist;
                        far = i;
                    }
                }
                centers[c] = points.row(far).to_vec();
            }
        }
    }
    (labels, wcss_trace)
}

/// Greedy farthest-point seeding from a random first center.
fn seed_centers(points: &DenseMatrix, clusters: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.nrows();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(clusters);
    let first = rng.random_range(0..n);
    centers.push(points.row(first).to_vec());
    let mut nearest: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centers[0])).collect();
    while centers.len() < clusters {
        let mut far = 0;
        for i in 1..n {
            if nearest[i] > nearest[far] {
                far = i;
            }
        }
        centers.push(points.row(far).to_vec());
        for i in 0..n {
            let dist = sq_dist(points, i, centers.last().unwrap());
            if dist < nearest[i] {
                nearest[i] = dist;
            }
        }
    }
    centers
}

/// Lloyd's k-means with greedy farthest-point seeding, best of `restarts`
/// by within-cluster sum of squares. Deterministic for a fixed seed.
pub fn kmeans(
    points: &DenseMatrix,
    clusters: usize,
    seed: u64,
    restarts: usize,
) -> Result<Vec<usize>> {
    let n = points.nrows();
    if clusters == 0 || clusters > n {
        return Err(Error::InvalidConfig(format!(
            "kmeans needs 1 <= clusters <= n, got clusters={clusters}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_labels = vec![0; n];
    let mut best_wcss = f64::INFINITY;
    for _ in 0..restarts.max(1) {
        let centers = seed_centers(points, clusters, &mut rng);
        let (labels, wcss_trace) = lloyd(points, centers, 100);
        let wcss = *wcss_trace.last().unwrap();
        if wcss < best_wcss {
            best_wcss = wcss;
            best_labels = labels;
        }
    }
    Ok(best_labels)
}

/// Mean absolute error `(1/N) Σ |r̂ − r|`.
pub fn mae(pred: &[f64], actual: &[f64]) -> Result<f64> {
    if pred.len() != actual.len() {
        return Err(Error::DimensionMismatch {
            op: "mae",
            left: pred.len().to_string(),
            right: actual.len().to_string(),
        });
    }
    if pred.is_empty() {
        return Err(Error::EmptyInput("mae needs at least one pair"));
    }
    Ok(pred
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a).abs())
        .sum::<f64>()
        / pred.len() as f64)
}

/// Pearson correlation coefficient; 0 when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            op: "pearson",
            left: x.len().to_string(),
            right: y.len().to_string(),
        });
    }
    if x.len() < 2 {
        return Err(Error::EmptyInput("pearson needs at least two pairs"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Pearson correlation between the degree sequence of `h` and the degree
/// sequence of the reconstruction `AAᵀ`.
pub fn degree_correlation(h: &HorizontalNetwork, a: &DenseMatrix) -> f64 {
    let truth = netstruct::degree_sequence(h);
    let recon = matcore::row_sums(&a.dot(&a.t()));
    pearson(truth.as_slice().unwrap(), recon.as_slice().unwrap()).unwrap_or(0.0)
}

/// Structure-preservation report for a factor matrix against its network.
#[derive(Debug, Clone, Copy)]
pub struct StructureScores {
    pub jaccard: f64,
    pub folkes_mallows: f64,
    pub f1: f64,
    pub degree_correlation: f64,
    pub tree_overlap: usize,
    pub max_overlap: usize,
}

/// Options for [`structure_scores`].
#[derive(Debug, Clone)]
pub struct ScoreConfig {
    /// Cluster count for the community comparison (often the latent k).
    pub cluster_k: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self {
            cluster_k: 10,
            seed: 0,
            restarts: 10,
        }
    }
}

/// Score how well `Ĥ = AAᵀ` preserves the structures of `h`.
///
/// Community agreement compares k-means on the rows of `A` against the
/// benchmark communities of `h` (k-means on the rows of the smallest-k
/// Laplacian eigenbasis, the RatioCut relaxation); degree preservation is
/// the Pearson correlation of the two degree sequences; tree preservation
/// counts edges shared by the maximum spanning trees of `Ĥ` and `h`.
pub fn structure_scores(
    h: &HorizontalNetwork,
    a: &DenseMatrix,
    score_cfg: &ScoreConfig,
) -> Result<StructureScores> {
    let n = h.size();
    if a.nrows() != n {
        return Err(Error::DimensionMismatch {
            op: "structure_scores",
            left: format!("{0}x{0}", n),
            right: format!("{}x{}", a.nrows(), a.ncols()),
        });
    }
    let basis = netstruct::community_basis(h, score_cfg.cluster_k)?.basis;
    let truth = kmeans(&basis, score_cfg.cluster_k, score_cfg.seed, score_cfg.restarts)?;
    let pred = kmeans(a, score_cfg.cluster_k, score_cfg.seed, score_cfg.restarts)?;
    let pc = pair_counts(&truth, &pred)?;

    let recon_h = reconstruction_network(a);
    let t_h = netstruct::max_spanning_tree(h);
    let t_r = netstruct::max_spanning_tree(&recon_h);

    Ok(StructureScores {
        jaccard: jaccard(&pc),
        folkes_mallows: folkes_mallows(&pc),
        f1: f1_measure(&pc),
        degree_correlation: degree_correlation(h, a),
        tree_overlap: netstruct::tree_overlap(&t_h, &t_r)?,
        max_overlap: n.saturating_sub(1),
    })
}

/// Convenience: run [`structure_scores`] on a [`factor::FactorResult`].
pub fn structure_scores_for(
    h: &HorizontalNetwork,
    result: &factor::FactorResult,
    score_cfg: &ScoreConfig,
) -> Result<StructureScores> {
    structure_scores(h, &result.a, score_cfg)
}

/// The reconstruction `AAᵀ` as a valid horizontal network: diagonal zeroed
/// and the upper triangle mirrored so rounding cannot break symmetry.
pub fn reconstruction_network(a: &DenseMatrix) -> HorizontalNetwork {
    let n = a.nrows();
    let recon = a.dot(&a.t());
    let mut w = DenseMatrix::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            w[[i, j]] = recon[[i, j]];
            w[[j, i]] = recon[[i, j]];
        }
    }
    HorizontalNetwork::new(w).expect("mirrored nonnegative reconstruction is a valid network")
}
