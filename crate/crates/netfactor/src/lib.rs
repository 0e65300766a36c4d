//! Structure-preserving nonnegative factorization of multi-level networks.
//!
//! A multi-level network couples a vertical relation matrix `V` (n×p, e.g.
//! user–item ratings or document–word counts) with one or two horizontal
//! networks `H` (n×n / p×p, e.g. a social or citation network). This crate
//! factorizes `V ≈ A·X` into nonnegative factors while steering `A·Aᵀ` to
//! retain a chosen structure of `H`:
//!
//! * [`Variant::Whole`] — the whole network, anchored to a symmetric NMF
//!   factor of `H`
//! * [`Variant::Community`] — the community structure, anchored to the
//!   smallest Laplacian eigenvectors (RatioCut relaxation)
//! * [`Variant::Degree`] — the (weighted) degree sequence of `H`
//! * [`Variant::Tree`] — the maximum spanning tree of `H`
//!
//! All four solvers are clipped-step-size gradient iterations with
//! non-increasing cost traces and deterministic, seeded behavior.
//!
//! ```
//! use netfactor::factor::{factorize, FactorConfig, Variant};
//! use netfactor::harness::generate_synthetic_pair;
//!
//! let (v, h) = generate_synthetic_pair(20, 15, 1.0, 7).unwrap();
//! let cfg = FactorConfig { k: 4, alpha: 1.0, max_iter: 200, ..FactorConfig::default() };
//! let result = factorize(&v, &h, None, Variant::Dnmf, &cfg).unwrap();
//! assert!(result.trace.windows(2).all(|w| w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs())));
//! ```
//!
//! The `netfactor` binary exposes the same machinery as `synth`, `factorize`,
//! `experiment` and `eval` subcommands; the crate's `examples/` directory has
//! one runnable example per capability.

pub mod eval;
pub mod factor;
pub mod harness;
pub mod matcore;
pub mod netstruct;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimensionMismatch {
        op: &'static str,
        left: String,
        right: String,
    },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("network is not symmetric: w[{i},{j}]={a} != w[{j},{i}]={b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },

    #[error("network has nonzero diagonal entry at ({i},{i}): {value}")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("negative entry at ({i},{j}): {value}")]
    NegativeEntry { i: usize, j: usize, value: f64 },

    #[error("non-finite entry at ({i},{j})")]
    NonFiniteEntry { i: usize, j: usize },

    #[error("eigensolver did not converge (max residual {residual:.3e})")]
    EigenFailure { residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
