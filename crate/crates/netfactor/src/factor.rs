//! The four structure-preserving factorization solvers.
//!
//! Every solver alternates one clipped-step-size gradient step on `A` with
//! one on `X`. The step sizes are the multiplicative-update-equivalent forms
//! revised for convergence: entries of the iterate are floored at `σ` where
//! the gradient is negative (so steps stay bounded away from zero) and the
//! denominators carry a `δ` regularizer. Computed step sizes are clamped to
//! `[0, ETA_CAP]` and every step ends with a projection onto the nonnegative
//! orthant, so degenerate inputs cannot produce signs or overflow.
//!
//! Per-variant structure terms on top of the shared `½‖V − AX‖²`:
//!
//! * whole:     `α/2 ‖P − A‖²` with `P = argmin ½‖H − PPᵀ‖²` (symmetric NMF)
//! * community: `α/2 ‖P_k − A‖²` with `P_k` the smallest-k Laplacian eigenbasis
//! * degree:    `α/2 ‖H·1 − AAᵀ·1‖²`
//! * tree:      `α/2 ‖T⊙H − AAᵀ‖²` with `T` the max-spanning-tree mask
//!
//! With `α = 0` all variants collapse to the same plain-NMF iteration and
//! produce bit-identical trajectories for identical seeds.

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{self, pos_neg_split, DenseMatrix};
use crate::netstruct::{self, HorizontalNetwork, TreeMask};
use crate::{Error, Result};

/// Upper clamp for every computed step size.
pub const ETA_CAP: f64 = 1e6;

/// Which horizontal-network structure the factorization preserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// NNMF: whole network structure.
    #[serde(alias = "whole")]
    Nnmf,
    /// CNMF: community structure.
    #[serde(alias = "community")]
    Cnmf,
    /// DNMF: degree distribution.
    #[serde(alias = "degree")]
    Dnmf,
    /// TNMF: maximum spanning tree.
    #[serde(alias = "tree")]
    Tnmf,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Nnmf, Variant::Cnmf, Variant::Dnmf, Variant::Tnmf];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Nnmf => "nnmf",
            Variant::Cnmf => "cnmf",
            Variant::Dnmf => "dnmf",
            Variant::Tnmf => "tnmf",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nnmf" | "whole" => Ok(Variant::Nnmf),
            "cnmf" | "community" => Ok(Variant::Cnmf),
            "dnmf" | "degree" => Ok(Variant::Dnmf),
            "tnmf" | "tree" => Ok(Variant::Tnmf),
            other => Err(Error::InvalidConfig(format!(
                "unknown variant '{other}' (expected nnmf|cnmf|dnmf|tnmf)"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// All solver knobs.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FactorConfig {
    /// Latent dimension k.
    pub k: usize,
    /// Structure weight α ≥ 0.
    pub alpha: f64,
    /// Second-level structure weight; defaults to `alpha` when a second
    /// horizontal network is present.
    pub alpha2: Option<f64>,
    /// Iteration cap I_max.
    pub max_iter: usize,
    /// Clipping floor σ for the revised step sizes.
    pub sigma: f64,
    /// Step-size denominator regularizer δ.
    pub delta: f64,
    /// Stationarity threshold on the absolute cost change.
    pub stop_tol: f64,
    /// RNG seed for the uniform (σ, 1] factor initialization.
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            k: 10,
            alpha: 0.1,
            alpha2: None,
            max_iter: 10_000,
            sigma: 1e-9,
            delta: 1e-9,
            stop_tol: 1e-10,
            seed: 0,
        }
    }
}

impl FactorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be >= 1".into()));
        }
        if !(self.sigma > 0.0) || !(self.delta > 0.0) || !(self.stop_tol > 0.0) {
            return Err(Error::InvalidConfig(
                "sigma, delta and stop_tol must be positive".into(),
            ));
        }
        if !(self.alpha >= 0.0) || self.alpha2.is_some_and(|a| !(a >= 0.0)) {
            return Err(Error::InvalidConfig("alpha must be >= 0".into()));
        }
        Ok(())
    }
}

/// Why the iteration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxIterReached,
    Stationary,
}

/// Factors plus the per-iteration cost trace.
#[derive(Debug, Clone)]
pub struct FactorResult {
    pub a: DenseMatrix,
    pub x: DenseMatrix,
    pub trace: Vec<f64>,
    pub terminated: Termination,
}

/// Precomputed per-variant structure payload for one horizontal network.
#[derive(Debug, Clone)]
pub enum StructureTarget {
    /// P from the symmetric NMF pre-solve (whole-network anchor).
    Whole(DenseMatrix),
    /// P_k, the smallest-k Laplacian eigenbasis (community anchor).
    Community(DenseMatrix),
    /// H·1, the weighted degree sequence.
    Degree(Array1<f64>),
    /// Max-spanning-tree masks and the weighted tree network T⊙H.
    Tree(TreeMask),
}

fn clip_floor(m: &DenseMatrix, grad: &DenseMatrix, sigma: f64) -> DenseMatrix {
    let mut out = m.clone();
    out.zip_mut_with(grad, |v, g| {
        if *g < 0.0 {
            *v = v.max(sigma);
        }
    });
    out
}

fn project_step(
    m: &DenseMatrix,
    grad: &DenseMatrix,
    eta: &DenseMatrix,
    scale: f64,
) -> DenseMatrix {
    let mut out = m.clone();
    out.zip_mut_with(&(grad * eta), |v, step| {
        *v = (*v - scale * step).max(0.0);
    });
    out
}

/// Plain NMF step on the row factor: the α = 0 limit every variant shares.
fn plain_a_step(v: &DenseMatrix, a: &DenseMatrix, x: &DenseMatrix, cfg: &FactorConfig) -> DenseMatrix {
    let xxt = x.dot(&x.t());
    let b = v.dot(&x.t());
    let grad = a.dot(&xxt) - &b;
    let abar = clip_floor(a, &grad, cfg.sigma);
    let dbar = abar.dot(&xxt);
    let mut eta = DenseMatrix::zeros(a.raw_dim());
    ndarray::Zip::from(&mut eta)
        .and(&abar)
        .and(&dbar)
        .and(&b)
        .for_each(|e, &ab, &d, &num| {
            *e = (ab / ((d.sqrt() + num.sqrt()) * d.sqrt() + cfg.delta)).clamp(0.0, ETA_CAP);
        });
    project_step(a, &grad, &eta, 1.0)
}

/// Gradient of `½‖V−AX‖² + α/2‖P−A‖²` with respect to A:
/// `A(XXᵀ + αI) − (VXᵀ + αP)`.
pub fn nnmf_a_gradient(
    v: &DenseMatrix,
    p: &DenseMatrix,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> DenseMatrix {
    let xxt = x.dot(&x.t());
    a.dot(&xxt) + &(alpha * a) - v.dot(&x.t()) - &(alpha * p)
}

/// One clipped step on A for the whole-network / community cost.
///
/// With δ → 0 and no clipping active this reproduces the multiplicative
/// update `A ⊙ √((VXᵀ + αP⁺) / (AXXᵀ + αA + αP⁻))`.
pub fn nnmf_a_step(
    v: &DenseMatrix,
    p: &DenseMatrix,
    a: &DenseMatrix,
    x: &DenseMatrix,
    cfg: &FactorConfig,
) -> DenseMatrix {
    if cfg.alpha == 0.0 {
        return plain_a_step(v, a, x, cfg);
    }
    let alpha = cfg.alpha;
    let split = pos_neg_split(p);
    let xxt = x.dot(&x.t());
    let b = v.dot(&x.t()) + &(alpha * &split.plus);
    let d = a.dot(&xxt) + &(alpha * a) + &(alpha * &split.minus);
    let grad = &d - &b;
    let abar = clip_floor(a, &grad, cfg.sigma);
    let dbar = abar.dot(&xxt) + &(alpha * &abar) + &(alpha * &split.minus);
    let mut eta = DenseMatrix::zeros(a.raw_dim());
    ndarray::Zip::from(&mut eta)
        .and(&abar)
        .and(&dbar)
        .and(&b)
        .for_each(|e, &ab, &den, &num| {
            *e = (ab / ((den.sqrt() + num.sqrt()) * den.sqrt() + cfg.delta)).clamp(0.0, ETA_CAP);
        });
    project_step(a, &grad, &eta, 1.0)
}

/// One clipped step on X for `½‖V−AX‖²` (shared by all one-level variants).
pub fn update_x_step(
    v: &DenseMatrix,
    a: &DenseMatrix,
    x: &DenseMatrix,
    cfg: &FactorConfig,
) -> DenseMatrix {
    let ata = a.t().dot(a);
    let b = a.t().dot(v);
    let grad = ata.dot(x) - &b;
    let xbar = clip_floor(x, &grad, cfg.sigma);
    let cbar = ata.dot(&xbar);
    let mut eta = DenseMatrix::zeros(x.raw_dim());
    ndarray::Zip::from(&mut eta)
        .and(&xbar)
        .and(&cbar)
        .and(&b)
        .for_each(|e, &xb, &den, &num| {
            *e = (xb / ((den.sqrt() + num.sqrt()) * den.sqrt() + cfg.delta)).clamp(0.0, ETA_CAP);
        });
    project_step(x, &grad, &eta, 1.0)
}

/// The degree-preserving gradient exactly as printed in the source update
/// equations: `−VXᵀ + AXXᵀ − α·(H1)(1ᵀA) + 2α·(AAᵀ1)(1ᵀA)`.
///
/// This formula is kept as a cross-check oracle; it is not the gradient of
/// the degree cost (the symmetrized pair below is) and [`dnmf_a_step`] does
/// not descend along it. The ones-matrices are never materialized.
pub fn dnmf_a_gradient(
    v: &DenseMatrix,
    deg: &Array1<f64>,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> DenseMatrix {
    let xxt = x.dot(&x.t());
    let mut grad = a.dot(&xxt) - &v.dot(&x.t());
    if alpha > 0.0 {
        let cols = matcore::col_sums(a); // 1ᵀA
        let r = a.dot(&cols); // AAᵀ1
        for ((i, j), g) in grad.indexed_iter_mut() {
            *g += alpha * (2.0 * r[i] - deg[i]) * cols[j];
        }
    }
    grad
}

/// Gradient of the degree cost `½‖V−AX‖² + α/2‖H1 − AAᵀ1‖²`:
/// `AXXᵀ − VXᵀ − α[e·(1ᵀA) + 1·(eᵀA)]` with `e = H1 − AAᵀ1`.
pub fn dnmf_cost_gradient(
    v: &DenseMatrix,
    deg: &Array1<f64>,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> DenseMatrix {
    let xxt = x.dot(&x.t());
    let mut grad = a.dot(&xxt) - &v.dot(&x.t());
    if alpha > 0.0 {
        let cols = matcore::col_sums(a);
        let e = deg - &a.dot(&cols);
        let ate = a.t().dot(&e); // eᵀA as a k-vector
        for ((i, j), g) in grad.indexed_iter_mut() {
            *g -= alpha * (e[i] * cols[j] + ate[j]);
        }
    }
    grad
}

fn quad_eta(
    abar: &DenseMatrix,
    bbar: &DenseMatrix,
    cbar: &DenseMatrix,
    q: &DenseMatrix,
    delta: f64,
) -> DenseMatrix {
    // per-entry positive root of q·y² + c·y − b = 0 drives the step size
    // η = 2Ā / [(2q + c + √(c² + 4qb)) (1 + √y) + δ]
    let mut eta = DenseMatrix::zeros(abar.raw_dim());
    ndarray::Zip::from(&mut eta)
        .and(abar)
        .and(bbar)
        .and(cbar)
        .and(q)
        .for_each(|e, &ab, &b, &c, &qq| {
            let root = (c * c + 4.0 * qq * b).sqrt();
            let y = if c + root > 0.0 { 2.0 * b / (c + root) } else { 1.0 };
            *e = (2.0 * ab / ((2.0 * qq + c + root) * (1.0 + y.sqrt()) + delta)).clamp(0.0, ETA_CAP);
        });
    eta
}

/// One clipped step on A for the degree cost `½‖V−AX‖² + α/2‖H1 − AAᵀ1‖²`.
///
/// Descends along [`dnmf_cost_gradient`] with the per-entry quadratic step
/// size of the majorize-minimize derivation; a halving safeguard re-checks
/// descent of the cost and shortens the step in the rare degenerate case.
pub fn dnmf_a_step(
    v: &DenseMatrix,
    deg: &Array1<f64>,
    a: &DenseMatrix,
    x: &DenseMatrix,
    cfg: &FactorConfig,
) -> DenseMatrix {
    if cfg.alpha == 0.0 {
        return plain_a_step(v, a, x, cfg);
    }
    let alpha = cfg.alpha;
    let xxt = x.dot(&x.t());
    let vxt = v.dot(&x.t());
    let grad = dnmf_cost_gradient(v, deg, a, x, alpha);
    let abar = clip_floor(a, &grad, cfg.sigma);

    let cols = matcore::col_sums(&abar);
    let r = abar.dot(&cols);
    let atdeg = abar.t().dot(deg);
    let cbar = abar.dot(&xxt);
    let mut bbar = vxt.clone();
    let mut q = DenseMatrix::zeros(a.raw_dim());
    for ((i, j), b) in bbar.indexed_iter_mut() {
        *b += alpha * (deg[i] * cols[j] + atdeg[j]);
        q[[i, j]] = 2.0 * alpha * r[i] * cols[j];
    }
    let eta = quad_eta(&abar, &bbar, &cbar, &q, cfg.delta);

    let cost_at = |m: &DenseMatrix| {
        let e = deg - &m.dot(&matcore::col_sums(m));
        0.5 * matcore::frobenius_sq(&(v - &m.dot(x))) + 0.5 * alpha * e.iter().map(|v| v * v).sum::<f64>()
    };
    let before = cost_at(a);
    let mut scale = 1.0;
    for _ in 0..60 {
        let cand = project_step(a, &grad, &eta, scale);
        if cost_at(&cand) <= before {
            return cand;
        }
        scale *= 0.5;
    }
    a.clone()
}

/// The tree-preserving gradient exactly as printed in the source update
/// equations: `(−VXᵀ + AXXᵀ) + α·(T̄ − T)⊙(AAᵀ)·A`.
///
/// This is the gradient of the mask objective
/// `½‖V−AX‖² + α/4(‖T̄⊙AAᵀ‖² − ‖T⊙AAᵀ‖²)`; it is kept as a cross-check
/// oracle. [`tnmf_a_step`] descends the tree-network matching cost instead,
/// which concentrates reconstruction mass on the spanning tree.
pub fn tnmf_a_gradient(
    v: &DenseMatrix,
    t: &TreeMask,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> DenseMatrix {
    let xxt = x.dot(&x.t());
    let mut grad = a.dot(&xxt) - &v.dot(&x.t());
    if alpha > 0.0 {
        let aat = a.dot(&a.t());
        let masked = (&t.complement - &t.mask) * &aat;
        grad += &(alpha * &masked.dot(a));
    }
    grad
}

/// One clipped step on A for the tree cost `½‖V−AX‖² + α/2‖T⊙H − AAᵀ‖²`.
///
/// The step is the multiplicative-equivalent majorize-minimize update in
/// gradient form, so the cost is non-increasing and fixed points are
/// stationary points.
pub fn tnmf_a_step(
    v: &DenseMatrix,
    t: &TreeMask,
    a: &DenseMatrix,
    x: &DenseMatrix,
    cfg: &FactorConfig,
) -> DenseMatrix {
    if cfg.alpha == 0.0 {
        return plain_a_step(v, a, x, cfg);
    }
    let alpha = cfg.alpha;
    let w = &t.weighted;
    let xxt = x.dot(&x.t());
    let vxt = v.dot(&x.t());
    let aat = a.dot(&a.t());
    let grad = a.dot(&xxt) - &vxt + &((aat.dot(a) - w.dot(a)) * (2.0 * alpha));
    let abar = clip_floor(a, &grad, cfg.sigma);

    let cbar = abar.dot(&xxt);
    let bbar = &vxt + &(w.dot(&abar) * (2.0 * alpha));
    let q = abar.dot(&abar.t()).dot(&abar) * (2.0 * alpha);
    let eta = quad_eta(&abar, &bbar, &cbar, &q, cfg.delta);
    project_step(a, &grad, &eta, 1.0)
}

/// `½‖V − AX‖²`.
pub fn reconstruction_cost(v: &DenseMatrix, a: &DenseMatrix, x: &DenseMatrix) -> f64 {
    0.5 * matcore::frobenius_sq(&(v - &a.dot(x)))
}

/// `½‖V−AX‖² + α/2‖P−A‖²` (whole-network and community variants).
pub fn nnmf_cost(
    v: &DenseMatrix,
    p: &DenseMatrix,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> f64 {
    reconstruction_cost(v, a, x) + 0.5 * alpha * matcore::frobenius_sq(&(p - a))
}

/// `½‖V−AX‖² + α/2‖H1 − AAᵀ1‖²` (degree variant).
pub fn dnmf_cost(
    v: &DenseMatrix,
    deg: &Array1<f64>,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> f64 {
    let e = deg - &a.dot(&matcore::col_sums(a));
    reconstruction_cost(v, a, x) + 0.5 * alpha * e.iter().map(|v| v * v).sum::<f64>()
}

/// `½‖V−AX‖² + α/2‖T⊙H − AAᵀ‖²` (tree variant).
pub fn tree_cost(
    v: &DenseMatrix,
    t: &TreeMask,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> f64 {
    let aat = a.dot(&a.t());
    reconstruction_cost(v, a, x) + 0.5 * alpha * matcore::frobenius_sq(&(&t.weighted - &aat))
}

/// The objective implied by the printed tree gradient:
/// `½‖V−AX‖² + α/4(‖T̄⊙AAᵀ‖² − ‖T⊙AAᵀ‖²)`. Kept for the gradient oracle.
pub fn tnmf_implied_cost(
    v: &DenseMatrix,
    t: &TreeMask,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
) -> f64 {
    let aat = a.dot(&a.t());
    let pen = matcore::frobenius_sq(&(&t.complement * &aat));
    let rew = matcore::frobenius_sq(&(&t.mask * &aat));
    reconstruction_cost(v, a, x) + 0.25 * alpha * (pen - rew)
}

/// Uniform (σ, 1] init, drawn row-major from the given generator.
fn init_factor(rng: &mut ChaCha8Rng, rows: usize, cols: usize, sigma: f64) -> DenseMatrix {
    DenseMatrix::from_shape_fn((rows, cols), |_| {
        let u: f64 = rng.random();
        1.0 - (1.0 - sigma) * u
    })
}

/// Symmetric NMF pre-solve `P = argmin_{P≥0} ½‖H − PPᵀ‖²`.
///
/// Iterates the damped multiplicative update
/// `P ← P ⊙ (1/2 + 1/2 · (HP) / (PPᵀP + δ))` under the configured iteration
/// cap and stop tolerance and returns the best iterate seen. The undamped
/// ratio update oscillates around stationary points instead of settling on
/// them; the 1/2 damping removes the oscillation.
pub fn symmetric_nmf(h: &HorizontalNetwork, k: usize, cfg: &FactorConfig) -> Result<DenseMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    symmetric_nmf_with_rng(h, k, cfg, &mut rng)
}

fn symmetric_nmf_with_rng(
    h: &HorizontalNetwork,
    k: usize,
    cfg: &FactorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<DenseMatrix> {
    let n = h.size();
    if k > n {
        return Err(Error::InvalidConfig(format!(
            "symmetric nmf needs k <= n, got k={k}, n={n}"
        )));
    }
    let hw = h.weights();
    let mean = hw.iter().sum::<f64>() / (n * n) as f64;
    let scale = (mean.max(1e-12) / k as f64).sqrt();
    let mut p = init_factor(rng, n, k, cfg.sigma) * scale;

    let cost = |p: &DenseMatrix| 0.5 * matcore::frobenius_sq(&(hw - &p.dot(&p.t())));
    let mut best = p.clone();
    let mut best_cost = cost(&p);
    let mut prev = best_cost;
    for _ in 0..cfg.max_iter {
        let num = hw.dot(&p);
        let den = p.dot(&p.t().dot(&p)) + cfg.delta;
        p = &p * &(num / den).mapv(|r| 0.5 + 0.5 * r);
        let c = cost(&p);
        if c < best_cost {
            best_cost = c;
            best = p.clone();
        }
        if (prev - c).abs() < cfg.stop_tol {
            break;
        }
        prev = c;
    }
    Ok(best)
}

fn build_target(
    h: &HorizontalNetwork,
    variant: Variant,
    cfg: &FactorConfig,
    rng: &mut ChaCha8Rng,
) -> Result<StructureTarget> {
    match variant {
        Variant::Nnmf => Ok(StructureTarget::Whole(symmetric_nmf_with_rng(
            h, cfg.k, cfg, rng,
        )?)),
        Variant::Cnmf => Ok(StructureTarget::Community(
            netstruct::community_basis(h, cfg.k)?.basis,
        )),
        Variant::Dnmf => Ok(StructureTarget::Degree(netstruct::degree_sequence(h))),
        Variant::Tnmf => Ok(StructureTarget::Tree(netstruct::max_spanning_tree(h))),
    }
}

fn a_step_on(
    v: &DenseMatrix,
    target: Option<&StructureTarget>,
    a: &DenseMatrix,
    x: &DenseMatrix,
    alpha: f64,
    cfg: &FactorConfig,
) -> DenseMatrix {
    let step_cfg = FactorConfig { alpha, ..cfg.clone() };
    match (alpha > 0.0, target) {
        (true, Some(StructureTarget::Whole(p))) => nnmf_a_step(v, p, a, x, &step_cfg),
        (true, Some(StructureTarget::Community(p))) => nnmf_a_step(v, p, a, x, &step_cfg),
        (true, Some(StructureTarget::Degree(deg))) => dnmf_a_step(v, deg, a, x, &step_cfg),
        (true, Some(StructureTarget::Tree(t))) => tnmf_a_step(v, t, a, x, &step_cfg),
        _ => plain_a_step(v, a, x, &step_cfg),
    }
}

fn structure_term(target: &StructureTarget, a: &DenseMatrix, alpha: f64) -> f64 {
    match target {
        StructureTarget::Whole(p) | StructureTarget::Community(p) => {
            0.5 * alpha * matcore::frobenius_sq(&(p - a))
        }
        StructureTarget::Degree(deg) => {
            let e = deg - &a.dot(&matcore::col_sums(a));
            0.5 * alpha * e.iter().map(|v| v * v).sum::<f64>()
        }
        StructureTarget::Tree(t) => {
            0.5 * alpha * matcore::frobenius_sq(&(&t.weighted - &a.dot(&a.t())))
        }
    }
}

/// Factorize `v ≈ A·X` while preserving the chosen structure of `h1` (and,
/// when `h2` is given, the same structure of `h2` on the `X` side).
///
/// Seeds `A` and `X` from uniform (σ, 1], precomputes the structure targets,
/// then alternates one A-step and one X-step per iteration, recording the
/// cost after each X-step. Stops at `max_iter` or when the absolute cost
/// change drops below `stop_tol`.
pub fn factorize(
    v: &DenseMatrix,
    h1: &HorizontalNetwork,
    h2: Option<&HorizontalNetwork>,
    variant: Variant,
    cfg: &FactorConfig,
) -> Result<FactorResult> {
    cfg.validate()?;
    matcore::ensure_nonnegative(v)?;
    let (n, p) = v.dim();
    if h1.size() != n {
        return Err(Error::DimensionMismatch {
            op: "factorize (v rows vs h1)",
            left: format!("{n}x{p}"),
            right: format!("{0}x{0}", h1.size()),
        });
    }
    if let Some(h2) = h2 {
        if h2.size() != p {
            return Err(Error::DimensionMismatch {
                op: "factorize (v cols vs h2)",
                left: format!("{n}x{p}"),
                right: format!("{0}x{0}", h2.size()),
            });
        }
    }

    let alpha = cfg.alpha;
    let alpha2 = if h2.is_some() {
        cfg.alpha2.unwrap_or(cfg.alpha)
    } else {
        0.0
    };

    // fixed draw order: A, X, then targets; with alpha = 0 no target is
    // built, so all variants share one trajectory per seed
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut a = init_factor(&mut rng, n, cfg.k, cfg.sigma);
    let mut x = init_factor(&mut rng, cfg.k, p, cfg.sigma);

    let target1 = if alpha > 0.0 {
        Some(build_target(h1, variant, cfg, &mut rng)?)
    } else {
        None
    };
    let target2 = match h2 {
        Some(h2) if alpha2 > 0.0 => Some(build_target(h2, variant, cfg, &mut rng)?),
        _ => None,
    };

    let vt = target2.is_some().then(|| v.t().to_owned());

    let mut trace = Vec::new();
    let mut terminated = Termination::MaxIterReached;
    let mut prev = f64::INFINITY;
    for iter in 0..cfg.max_iter {
        a = a_step_on(v, target1.as_ref(), &a, &x, alpha, cfg);
        x = match (&target2, &vt) {
            (Some(t2), Some(vt)) => {
                // the X update is the A-type update on the transposed problem
                let xt = x.t().to_owned();
                let at = a.t().to_owned();
                a_step_on(vt, Some(t2), &xt, &at, alpha2, cfg).t().to_owned()
            }
            _ => update_x_step(v, &a, &x, cfg),
        };

        let mut cost = reconstruction_cost(v, &a, &x);
        if let Some(t1) = &target1 {
            cost += structure_term(t1, &a, alpha);
        }
        if let Some(t2) = &target2 {
            cost += structure_term(t2, &x.t().to_owned(), alpha2);
        }
        trace.push(cost);
        if iter > 0 && (prev - cost).abs() < cfg.stop_tol {
            terminated = Termination::Stationary;
            break;
        }
        prev = cost;
    }

    Ok(FactorResult {
        a,
        x,
        trace,
        terminated,
    })
}
