use kolmogorov::oracles::{bridge_path, logistic_cdf};
use kolmogorov::streams::substream;
use kolmogorov::validation::{
    mean_variance, target_mean, target_variance, two_sample_critical, two_sample_ks_distance,
};
use kolmogorov::*;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

#[test]
fn streamed_variance_matches_target() {
    let cfg = SamplerConfig::with_seed(1);
    let xs: Vec<f64> = stream_sampler(&cfg)
        .unwrap()
        .take(100_000)
        .map(|r| r.unwrap())
        .collect();
    assert!(xs.iter().all(|&x| x > 0.0));
    let (_, var) = mean_variance(&xs);
    assert!((var - 0.067_773_2).abs() < 1e-3, "{var}");
}

#[test]
fn stream_prefix_equals_batch() {
    let cfg = SamplerConfig::with_seed(4);
    let batch = sample_batch(&cfg, 1000).unwrap();
    let streamed: Vec<f64> = stream_sampler(&cfg)
        .unwrap()
        .take(1000)
        .map(|r| r.unwrap())
        .collect();
    assert_eq!(batch.values, streamed);
}

#[test]
fn gamma_proposal_batch_is_kolmogorov() {
    let trunc = TruncationConfig::default();
    let spec = ProposalSpec::reference(ProposalFamily::Gamma);
    let cfg = SamplerConfig::new(spec, trunc, 9).unwrap();
    let b = sample_batch(&cfg, 100_000).unwrap();
    let d = ks_statistic(&b.values, |x| cdf(x, &trunc).unwrap()).unwrap();
    assert!(ks_pvalue(d, &trunc).unwrap() > 0.01);
    let (mean, _) = mean_variance(&b.values);
    assert!((mean - target_mean()).abs() < 3.0 * target_variance().sqrt() / (1e5_f64).sqrt());
}

#[test]
fn logistic_mixture_moments_and_fit() {
    let trunc = TruncationConfig::default();
    let mut kolmo = stream_sampler(&SamplerConfig::with_seed(12)).unwrap();
    let mut rng = substream(12, 1 << 40);
    let n = 100_000;
    let ys: Vec<f64> = (0..n)
        .map(|_| logistic_mixture_sample(&mut kolmo, &mut rng).unwrap())
        .collect();
    let (mean, var) = mean_variance(&ys);
    let sigma2 = PI * PI / 3.0;
    let nf = n as f64;
    assert!(mean.abs() < 3.0 * (sigma2 / nf).sqrt(), "mean {mean}");
    // logistic excess kurtosis is 1.2, so Var(s^2) ~ 3.2 sigma^4 / n
    assert!(
        (var - sigma2).abs() < 3.0 * sigma2 * (3.2 / nf).sqrt(),
        "var {var}"
    );
    let d = ks_statistic(&ys, logistic_cdf).unwrap();
    assert!(ks_pvalue(d, &trunc).unwrap() > 0.01);
}

#[test]
fn bridge_sup_mean_slightly_below_target() {
    let sups = bridge_sup_batch(&BridgeConfig::new(10_000, 5).unwrap(), 10_000);
    let (mean, _) = mean_variance(&sups);
    assert!((mean - target_mean()).abs() < 0.01, "{mean}");
}

#[test]
fn bridge_refinement_common_random_numbers() {
    let paths = 500;
    let (mut fine, mut coarse) = (0.0, 0.0);
    for i in 0..paths {
        let mut rng = substream(31, i);
        let z: Vec<f64> = (0..10_000).map(|_| rng.sample(StandardNormal)).collect();
        let b = bridge_path(&z);
        fine += b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        coarse += b.iter().step_by(100).fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    assert!(fine / paths as f64 >= coarse / paths as f64);
}

#[test]
fn ar_and_bridge_samples_agree() {
    let ar = sample_batch(&SamplerConfig::with_seed(17), 10_000).unwrap();
    let bridge = bridge_sup_batch(&BridgeConfig::new(10_000, 18).unwrap(), 10_000);
    let dist = two_sample_ks_distance(&ar.values, &bridge).unwrap();
    let limit = two_sample_critical(0.01, 10_000, 10_000) + 0.02;
    assert!(dist < limit, "{dist} >= {limit}");
}

#[test]
fn full_validation_passes() {
    let report = validate_sampler(&SamplerConfig::with_seed(1), 1_000_000).unwrap();
    assert!(report.passed, "{report}");
    assert_eq!(report.checks.len(), 3);
    assert!(report.checks.iter().all(|c| c.passed));
    assert_eq!(report.checks[0].tolerance, 1e-3);
    assert_eq!(report.checks[1].tolerance, 1e-3);
    assert!((report.acceptance_rate - 0.9523).abs() < 3e-3);
}
