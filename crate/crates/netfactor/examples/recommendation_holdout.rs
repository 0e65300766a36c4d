//! Recommendation-style evaluation: hold out a fraction of a planted
//! instance's vertical network, factorize the rest, and score the
//! predictions r̂ = (AX)_ui on the held-out entries with MAE and Pearson
//! correlation.
//!
//! ```bash
//! cargo run --release --example recommendation_holdout
//! ```

use netfactor::factor::FactorConfig;
use netfactor::harness::{run_experiment, spec_for, Protocol};

fn main() -> netfactor::Result<()> {
    let out = std::env::temp_dir().join("netfactor_recommendation");
    let cfg = FactorConfig {
        k: 8,
        alpha: 10.0,
        max_iter: 300,
        seed: 0,
        ..FactorConfig::default()
    };
    let mut spec = spec_for(Protocol::Recommendation, 60, 50, 10, cfg, &out);
    spec.test_fraction = 0.2;
    let report = run_experiment(&spec)?;

    println!(
        "held-out prediction over {} trials (n=60, p=50, 20% held out):",
        spec.trials
    );
    println!("  {:<5} {:>10} {:>10}", "", "MAE", "pearson");
    for variant in &spec.variants {
        println!(
            "  {:<5} {:>10.4} {:>10.4}",
            variant.to_string(),
            report.mean(*variant, "mae").unwrap(),
            report.mean(*variant, "pearson").unwrap(),
        );
    }
    println!("full report in {}", out.display());
    Ok(())
}
