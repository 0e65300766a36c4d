//! Plain-text coordinate matrix files and label files.
//!
//! The matrix format is one header line `rows cols nnz` followed by `nnz`
//! lines `row col value` with 0-indexed coordinates. Values are written with
//! Rust's shortest round-trip float formatting, so `load(save(m)) == m`
//! bit for bit. Unlisted entries are zero.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::matcore::DenseMatrix;
use crate::{Error, Result};

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Load a coordinate matrix file.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(path, 1, "header must be 'rows cols nnz'"));
    }
    let parse_count = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(path, 1, format!("invalid {what}: '{s}'")))
    };
    let rows = parse_count(fields[0], "row count")?;
    let cols = parse_count(fields[1], "column count")?;
    let nnz = parse_count(fields[2], "entry count")?;

    let mut m = DenseMatrix::zeros((rows, cols));
    let mut seen = vec![false; rows * cols];
    let mut count = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(path, lineno, "entry must be 'row col value'"));
        }
        let r: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("invalid row index '{}'", fields[0])))?;
        let c: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("invalid col index '{}'", fields[1])))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(path, lineno, format!("invalid value '{}'", fields[2])))?;
        if r >= rows || c >= cols {
            return Err(parse_err(
                path,
                lineno,
                format!("index ({r},{c}) out of range for {rows}x{cols}"),
            ));
        }
        if !v.is_finite() {
            return Err(parse_err(path, lineno, format!("non-finite value '{v}'")));
        }
        if seen[r * cols + c] {
            return Err(parse_err(path, lineno, format!("duplicate entry ({r},{c})")));
        }
        seen[r * cols + c] = true;
        m[[r, c]] = v;
        count += 1;
    }
    if count != nnz {
        return Err(parse_err(
            path,
            1,
            format!("header declares {nnz} entries but file has {count}"),
        ));
    }
    Ok(m)
}

/// Save a matrix in coordinate format (nonzero entries only, row-major).
pub fn save_matrix(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let nnz = m.iter().filter(|v| **v != 0.0).count();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", m.nrows(), m.ncols(), nnz);
    for ((i, j), v) in m.indexed_iter() {
        if *v != 0.0 {
            let _ = writeln!(out, "{i} {j} {v}");
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load a label file: one cluster id per line.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut labels = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let l: usize = line
            .trim()
            .parse()
            .map_err(|_| parse_err(path, idx + 1, format!("invalid label '{}'", line.trim())))?;
        labels.push(l);
    }
    if labels.is_empty() {
        return Err(parse_err(path, 1, "label file has no entries"));
    }
    Ok(labels)
}

/// Save labels, one per line.
pub fn save_labels(labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for l in labels {
        let _ = writeln!(out, "{l}");
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Write a cost trace as `iter,cost` CSV.
pub fn save_trace(trace: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("iter,cost\n");
    for (i, c) in trace.iter().enumerate() {
        let _ = writeln!(out, "{i},{c}");
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}
