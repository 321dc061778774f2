//! Compares acceptance-rejection draws with sup-norms of simulated Brownian bridges.
//!
//! cargo run --release --example bridge

use kolmogorov::validation::{
    mean_variance, target_mean, two_sample_critical, two_sample_ks_distance,
};
use kolmogorov::{bridge_sup_batch, sample_batch, BridgeConfig, SamplerConfig};

fn main() -> kolmogorov::Result<()> {
    let paths = 10_000;
    let ar = sample_batch(&SamplerConfig::with_seed(1), paths)?;
    println!("target mean {:.6}", target_mean());
    println!("AR mean     {:.6}", mean_variance(&ar.values).0);

    // discretization biases the bridge maximum downward
    for steps in [100, 1_000, 10_000] {
        let sups = bridge_sup_batch(&BridgeConfig::new(steps, 2)?, paths);
        let (mean, _) = mean_variance(&sups);
        let d = two_sample_ks_distance(&ar.values, &sups)?;
        println!("bridge, {steps:>6} steps: mean {mean:.6}, distance to AR {d:.4}");
    }
    println!(
        "1% two-sample critical distance: {:.4}",
        two_sample_critical(0.01, paths, paths)
    );
    Ok(())
}
