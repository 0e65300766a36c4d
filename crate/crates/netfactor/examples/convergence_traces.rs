//! Cost traces for all four variants on one synthetic instance, across a
//! few latent dimensions — the data behind a convergence figure.
//!
//! ```bash
//! cargo run --release --example convergence_traces
//! ```

use netfactor::factor::{factorize, FactorConfig, Variant};
use netfactor::harness::generate_synthetic_pair;

fn main() -> netfactor::Result<()> {
    let (v, h) = generate_synthetic_pair(60, 50, 1.0, 3)?;

    for k in [5, 10, 20] {
        println!("k = {k}");
        for variant in Variant::ALL {
            let cfg = FactorConfig {
                k,
                alpha: 0.1,
                max_iter: 400,
                seed: 3,
                ..FactorConfig::default()
            };
            let result = factorize(&v, &h, None, variant, &cfg)?;
            let first = result.trace.first().unwrap();
            let mid = result.trace[result.trace.len() / 2];
            let last = result.trace.last().unwrap();
            let monotone = result
                .trace
                .windows(2)
                .all(|w| w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs()));
            println!(
                "  {variant}: {:>4} iters  cost {first:>10.3} -> {mid:>10.3} -> {last:>10.3}  monotone: {monotone}",
                result.trace.len()
            );
        }
    }
    Ok(())
}
