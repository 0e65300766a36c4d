//! Degree-distribution preservation: the degree-preserving variant keeps
//! the reconstruction's degree sequence correlated with the source network,
//! while the whole-network variant does not.
//!
//! ```bash
//! cargo run --release --example degree_preservation
//! ```

use netfactor::factor::FactorConfig;
use netfactor::harness::{run_experiment, spec_for, Protocol};

fn main() -> netfactor::Result<()> {
    let out = std::env::temp_dir().join("netfactor_degree");
    let cfg = FactorConfig {
        k: 10,
        alpha: 0.3,
        max_iter: 400,
        seed: 0,
        ..FactorConfig::default()
    };
    let spec = spec_for(Protocol::Degree, 100, 100, 20, cfg, &out);
    let report = run_experiment(&spec)?;

    println!("degree correlation over {} trials (n=100, k=10):", spec.trials);
    for s in &report.summary {
        println!("  {:<5} {:>8.4} ± {:.4}", s.variant.to_string(), s.mean, s.std);
    }
    println!("full report in {}", out.display());
    Ok(())
}
