//! Goodness-of-fit and moment checks for generated variates.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use std::fmt;

use crate::density::{cdf, sf, TruncationConfig};
use crate::error::{domain, Result};
use crate::sampler::{sample_batch, SamplerConfig};

/// Kolmogorov mean `sqrt(pi/2) ln 2`.
pub fn target_mean() -> f64 {
    (PI / 2.0).sqrt() * LN_2
}

/// Kolmogorov variance `pi^2/12 - mu^2`.
pub fn target_variance() -> f64 {
    let mu = target_mean();
    PI * PI / 12.0 - mu * mu
}

pub const MOMENT_TOLERANCE: f64 = 1e-3;
pub const KS_ALPHA: f64 = 0.01;
pub const MIN_VALIDATION_SIZE: usize = 1_000;

/// `D_n = sqrt(n) sup |F_n - F_0|`, taking both one-sided gaps at each order
/// statistic. The input need not be sorted.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf0: F) -> Result<f64> {
    if samples.is_empty() {
        return domain("KS statistic of an empty sample");
    }
    if samples.iter().any(|v| v.is_nan()) {
        return domain("sample contains NaN");
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf0(x);
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        sup = sup.max(upper.abs()).max(lower.abs());
    }
    Ok(n.sqrt() * sup)
}

/// Asymptotic p-value `1 - Lambda(d)`.
pub fn ks_pvalue(d: f64, cfg: &TruncationConfig) -> Result<f64> {
    if d.is_nan() || d < 0.0 {
        return domain(format!("KS statistic must be nonnegative, got {d}"));
    }
    sf(d, cfg)
}

/// `sup_x |F_a(x) - F_b(x)|` between two empirical CDFs (no `sqrt(n)` factor).
pub fn two_sample_ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return domain("two-sample distance needs two nonempty samples");
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return domain("sample contains NaN");
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}

/// Asymptotic critical value of the two-sample distance at level `alpha`.
pub fn two_sample_critical(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Sample mean and unbiased variance.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub seed: u64,
    pub empirical_mean: f64,
    pub empirical_var: f64,
    pub target_mean: f64,
    pub target_var: f64,
    pub ks_stat: f64,
    /// Asymptotic p-value `1 - Lambda(D_n)`.
    pub ks_pvalue: f64,
    pub pvalue_kind: String,
    pub acceptance_rate: f64,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

/// Tolerance for a moment estimate: `1e-3`, widened to three standard
/// errors when `n` is too small for `1e-3` to be meaningful.
fn moment_tolerance(std_err: f64) -> f64 {
    MOMENT_TOLERANCE.max(3.0 * std_err)
}

/// Checks a set of variates against the Kolmogorov moments and CDF.
pub fn validate_values(
    values: &[f64],
    cfg: &TruncationConfig,
    seed: u64,
    acceptance_rate: f64,
) -> Result<ValidationReport> {
    if values.len() < MIN_VALIDATION_SIZE {
        return domain(format!(
            "validation needs at least {MIN_VALIDATION_SIZE} values, got {}",
            values.len()
        ));
    }
    let n = values.len();
    let (mean, var) = mean_variance(values);
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n as f64;
    let nf = n as f64;
    let mean_tol = moment_tolerance((var / nf).sqrt());
    let var_tol = moment_tolerance(((m4 - var * var).max(0.0) / nf).sqrt());

    let ks_stat = ks_statistic(values, |x| cdf(x, cfg).unwrap_or(f64::NAN))?;
    let ks_p = ks_pvalue(ks_stat, cfg)?;

    let (tm, tv) = (target_mean(), target_variance());
    let checks = vec![
        CheckOutcome {
            name: "mean".into(),
            value: mean,
            target: tm,
            tolerance: mean_tol,
            passed: (mean - tm).abs() < mean_tol,
        },
        CheckOutcome {
            name: "variance".into(),
            value: var,
            target: tv,
            tolerance: var_tol,
            passed: (var - tv).abs() < var_tol,
        },
        CheckOutcome {
            name: "ks_pvalue".into(),
            value: ks_p,
            target: KS_ALPHA,
            tolerance: 0.0,
            passed: ks_p > KS_ALPHA,
        },
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(ValidationReport {
        n,
        seed,
        empirical_mean: mean,
        empirical_var: var,
        target_mean: tm,
        target_var: tv,
        ks_stat,
        ks_pvalue: ks_p,
        pvalue_kind: "asymptotic".into(),
        acceptance_rate,
        checks,
        passed,
    })
}

/// Draws `n` variates with `cfg` and validates them.
pub fn validate_sampler(cfg: &SamplerConfig, n: usize) -> Result<ValidationReport> {
    if n < MIN_VALIDATION_SIZE {
        return domain(format!(
            "validation needs n >= {MIN_VALIDATION_SIZE}, got {n}"
        ));
    }
    let batch = sample_batch(cfg, n)?;
    validate_values(&batch.values, &cfg.trunc, cfg.seed, batch.acceptance_rate)
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n = {}  seed = {}  acceptance rate = {:.6}",
            self.n, self.seed, self.acceptance_rate
        )?;
        writeln!(
            f,
            "KS D_n = {:.6}  p = {:.6} ({})",
            self.ks_stat, self.ks_pvalue, self.pvalue_kind
        )?;
        writeln!(
            f,
            "{:<10} {:>14} {:>14} {:>12} {:>6}",
            "check", "value", "target", "tolerance", "pass"
        )?;
        for c in &self.checks {
            let target = if c.name == "ks_pvalue" {
                format!("> {}", c.target)
            } else {
                format!("{:.8}", c.target)
            };
            writeln!(
                f,
                "{:<10} {:>14.8} {:>14} {:>12.2e} {:>6}",
                c.name,
                c.value,
                target,
                c.tolerance,
                if c.passed { "yes" } else { "NO" }
            )?;
        }
        write!(f, "overall: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_closed_form() {
        assert!((target_mean() - 0.868_731_160_636_159_1).abs() < 1e-15);
        assert!((target_variance() - 0.067_773_203_963_865_08).abs() < 1e-15);
    }

    #[test]
    fn single_sample_statistic() {
        let cfg = TruncationConfig::default();
        let d = ks_statistic(&[0.5], |x| cdf(x, &cfg).unwrap()).unwrap();
        assert!((d - (1.0 - 0.036_054_756_335_124_91)).abs() < 1e-12, "{d}");
    }

    #[test]
    fn statistic_errors() {
        assert!(ks_statistic(&[], |x| x).is_err());
        assert!(ks_statistic(&[0.1, f64::NAN], |x| x).is_err());
    }

    #[test]
    fn quantile_placed_samples() {
        // uniform F0 with samples at i/(n+1)
        for n in [1usize, 5, 50, 1000] {
            let xs: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
            let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
            let nf = n as f64;
            assert!(d <= nf.sqrt() / (nf + 1.0) + nf.sqrt() / nf + 1e-12);
        }
    }

    #[test]
    fn duplication_scales_by_sqrt2() {
        let xs = [0.3, 0.9, 0.45, 1.7, 0.81, 1.1];
        let cfg = TruncationConfig::default();
        let f = |x: f64| cdf(x, &cfg).unwrap();
        let d = ks_statistic(&xs, f).unwrap();
        let doubled: Vec<f64> = xs.iter().chain(xs.iter()).copied().collect();
        let d2 = ks_statistic(&doubled, f).unwrap();
        assert!((d2 - std::f64::consts::SQRT_2 * d).abs() <= 1e-14 * d2);
    }

    #[test]
    fn pvalue_examples() {
        let cfg = TruncationConfig::default();
        assert_eq!(ks_pvalue(0.0, &cfg).unwrap(), 1.0);
        assert!((ks_pvalue(1.0, &cfg).unwrap() - 0.269_999_671_677_354_5).abs() < 1e-14);
        assert!(ks_pvalue(10.0, &cfg).unwrap() < 1e-15);
        assert!(ks_pvalue(-0.1, &cfg).is_err());
        assert!(ks_pvalue(f64::NAN, &cfg).is_err());
    }

    #[test]
    fn two_sample_distance() {
        assert_eq!(
            two_sample_ks_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(),
            0.0
        );
        assert_eq!(
            two_sample_ks_distance(&[0.0, 0.1], &[5.0, 6.0]).unwrap(),
            1.0
        );
        let d = two_sample_ks_distance(&[1.0, 2.0, 3.0, 4.0], &[2.5]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert!(two_sample_ks_distance(&[], &[1.0]).is_err());
    }

    #[test]
    fn small_validation_rejected() {
        let cfg = SamplerConfig::with_seed(1);
        assert!(validate_sampler(&cfg, 999).is_err());
    }

    #[test]
    fn report_aggregates_checks() {
        let cfg = SamplerConfig::with_seed(1);
        let r = validate_sampler(&cfg, 20_000).unwrap();
        assert_eq!(r.passed, r.checks.iter().all(|c| c.passed));
        assert_eq!(r.target_mean, target_mean());
        assert!((0.0..=1.0).contains(&r.ks_pvalue));
        let json = serde_json::to_string(&r).unwrap();
        let back: ValidationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let table = r.to_string();
        assert!(table.contains("variance") && table.contains("overall"));
    }
}
