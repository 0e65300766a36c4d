//! Community preservation: communities of the reconstruction (k-means on
//! the factor rows) against the spectral communities of the source network,
//! scored with the pair-counting metrics JC, FM and F1.
//!
//! ```bash
//! cargo run --release --example community_preservation
//! ```

use netfactor::factor::FactorConfig;
use netfactor::harness::{run_experiment, spec_for, Protocol};

fn main() -> netfactor::Result<()> {
    let out = std::env::temp_dir().join("netfactor_community");
    let cfg = FactorConfig {
        k: 10,
        alpha: 50.0,
        max_iter: 400,
        seed: 0,
        ..FactorConfig::default()
    };
    let spec = spec_for(Protocol::Community, 100, 100, 20, cfg, &out);
    let report = run_experiment(&spec)?;

    println!(
        "community agreement over {} trials (n=100, K=10):",
        spec.trials
    );
    println!("  {:<5} {:>10} {:>10} {:>10}", "", "JC", "FM", "F1");
    for variant in &spec.variants {
        let get = |metric| report.mean(*variant, metric).unwrap();
        println!(
            "  {:<5} {:>10.4} {:>10.4} {:>10.4}",
            variant.to_string(),
            get("jaccard"),
            get("folkes_mallows"),
            get("f1"),
        );
    }
    println!("full report in {}", out.display());
    Ok(())
}
