//! 2WZ with W Kolmogorov and Z standard normal is standard logistic.
//!
//! cargo run --release --example logistic

use kolmogorov::oracles::logistic_cdf;
use kolmogorov::streams::substream;
use kolmogorov::validation::mean_variance;
use kolmogorov::{
    ks_pvalue, ks_statistic, logistic_mixture_sample, stream_sampler, SamplerConfig,
    TruncationConfig,
};

fn main() -> kolmogorov::Result<()> {
    let mut kolmo = stream_sampler(&SamplerConfig::with_seed(3))?;
    let mut rng = substream(3, u64::MAX);
    let ys = (0..200_000)
        .map(|_| logistic_mixture_sample(&mut kolmo, &mut rng))
        .collect::<kolmogorov::Result<Vec<f64>>>()?;

    let (mean, var) = mean_variance(&ys);
    let pi2_3 = std::f64::consts::PI.powi(2) / 3.0;
    println!("mean {mean:+.5} (0), variance {var:.5} ({pi2_3:.5})");
    let d = ks_statistic(&ys, logistic_cdf)?;
    println!(
        "KS against logistic: D = {d:.4}, p = {:.4}",
        ks_pvalue(d, &TruncationConfig::default())?
    );
    Ok(())
}
