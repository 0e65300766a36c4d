//! Dense real-matrix kernels shared by every solver.
//!
//! Matrices are row-major [`ndarray::Array2<f64>`] values; everything here is
//! a pure function with fixed reduction order, so identical inputs give
//! bit-identical outputs.

use ndarray::{Array1, Array2};

use crate::{Error, Result};

/// Row-major dense real matrix, the carrier for V, H, A, X and P.
pub type DenseMatrix = Array2<f64>;

/// A matrix split into disjoint nonnegative positive / negative parts:
/// `plus - minus` reconstructs the source exactly and `plus ⊙ minus = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub plus: DenseMatrix,
    pub minus: DenseMatrix,
}

fn shape_str(m: &DenseMatrix) -> String {
    format!("{}x{}", m.nrows(), m.ncols())
}

/// Matrix product `a · b`, checking conformability instead of panicking.
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: shape_str(a),
            right: shape_str(b),
        });
    }
    Ok(a.dot(b))
}

/// Squared Frobenius norm `Σ m_ij²`.
pub fn frobenius_sq(m: &DenseMatrix) -> f64 {
    m.iter().map(|v| v * v).sum()
}

/// Entrywise (Hadamard) product of two same-shape matrices.
pub fn hadamard(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            op: "hadamard",
            left: shape_str(a),
            right: shape_str(b),
        });
    }
    Ok(a * b)
}

/// Split into `plus_ij = (|m_ij|+m_ij)/2` and `minus_ij = (|m_ij|-m_ij)/2`.
pub fn pos_neg_split(m: &DenseMatrix) -> SplitPair {
    let plus = m.mapv(|v| (v.abs() + v) / 2.0);
    let minus = m.mapv(|v| (v.abs() - v) / 2.0);
    SplitPair { plus, minus }
}

/// Row sums, i.e. `M · 1`.
pub fn row_sums(m: &DenseMatrix) -> Array1<f64> {
    let mut out = Array1::zeros(m.nrows());
    for (i, row) in m.rows().into_iter().enumerate() {
        out[i] = row.iter().sum();
    }
    out
}

/// Column sums, i.e. `1ᵀ · M` (used by the degree-preserving updates).
pub fn col_sums(m: &DenseMatrix) -> Array1<f64> {
    let mut out = Array1::zeros(m.ncols());
    for row in m.rows() {
        for (j, v) in row.iter().enumerate() {
            out[j] += v;
        }
    }
    out
}

/// Errors if any entry is NaN or infinite.
pub fn ensure_finite(m: &DenseMatrix, _what: &'static str) -> Result<()> {
    for ((i, j), v) in m.indexed_iter() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry { i, j });
        }
    }
    Ok(())
}

/// Errors if any entry is negative (NaN counts as non-finite, checked first).
pub fn ensure_nonnegative(m: &DenseMatrix) -> Result<()> {
    ensure_finite(m, "matrix")?;
    for ((i, j), v) in m.indexed_iter() {
        if *v < 0.0 {
            return Err(Error::NegativeEntry { i, j, value: *v });
        }
    }
    Ok(())
}
