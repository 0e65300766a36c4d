//! Minimal end-to-end run: generate a synthetic pair, factorize it with the
//! tree-preserving variant, inspect the trace, and round-trip the factors
//! through the coordinate file format.
//!
//! ```bash
//! cargo run --release --example factorize_basic
//! ```

use netfactor::factor::{factorize, FactorConfig, Variant};
use netfactor::harness::{generate_synthetic_pair, io};

fn main() -> netfactor::Result<()> {
    let (v, h) = generate_synthetic_pair(30, 20, 1.0, 7)?;

    let cfg = FactorConfig {
        k: 4,
        alpha: 10.0,
        max_iter: 500,
        seed: 7,
        ..FactorConfig::default()
    };
    let result = factorize(&v, &h, None, Variant::Tnmf, &cfg)?;

    println!(
        "tree variant: {} iterations, cost {:.6} -> {:.6} ({:?})",
        result.trace.len(),
        result.trace.first().unwrap(),
        result.trace.last().unwrap(),
        result.terminated,
    );

    let dir = std::env::temp_dir().join("netfactor_basic");
    std::fs::create_dir_all(&dir).map_err(|e| netfactor::Error::io(dir.display().to_string(), e))?;
    io::save_matrix(&result.a, dir.join("A.mtx"))?;
    io::save_matrix(&result.x, dir.join("X.mtx"))?;
    io::save_trace(&result.trace, dir.join("trace.csv"))?;

    let back = io::load_matrix(dir.join("A.mtx"))?;
    assert_eq!(back, result.a, "coordinate files round-trip bit for bit");
    println!("factors and trace written to {}", dir.display());
    Ok(())
}
