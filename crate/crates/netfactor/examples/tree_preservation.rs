//! Maximum-spanning-tree preservation: after factorization, the spanning
//! tree of the reconstruction AAᵀ is compared edge-by-edge with the tree of
//! the original network.
//!
//! ```bash
//! cargo run --release --example tree_preservation
//! ```

use netfactor::factor::FactorConfig;
use netfactor::harness::{run_experiment, spec_for, Protocol};

fn main() -> netfactor::Result<()> {
    let out = std::env::temp_dir().join("netfactor_tree");
    let cfg = FactorConfig {
        k: 3,
        alpha: 10.0,
        max_iter: 1500,
        seed: 0,
        ..FactorConfig::default()
    };
    let spec = spec_for(Protocol::Tree, 10, 10, 25, cfg, &out);
    let report = run_experiment(&spec)?;

    println!(
        "shared tree edges over {} trials (n=10, max = 9):",
        spec.trials
    );
    for s in &report.summary {
        println!("  {:<5} {:>6.2} ± {:.2}", s.variant.to_string(), s.mean, s.std);
    }
    println!("full report in {}", out.display());
    Ok(())
}
