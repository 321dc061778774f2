//! Kolmogorov CDF and density by truncated series.
//!
//! Two equivalent series represent the CDF on `x > 0`:
//!
//! ```text
//! upper:  1 - 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)
//! lower:  sqrt(2 pi) / x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
//! ```
//!
//! The upper series converges fast for large `x`, the lower one for small `x`.
//! Both are truncated after `k_star` terms and the switch happens at the
//! branch point `x0_star`. The pair is picked from the exponent cutoff of the
//! floating-point format: the largest `t` such that `exp(-t)` is still nonzero.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Error, Result};

/// Exponent cutoff of IEEE-754 binary64, rounded to two decimals.
pub const DEFAULT_X_BAR: f64 = 745.13;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const PI_SQ: f64 = PI * PI;

const SCAN_LO: f64 = 0.2;
const SCAN_HI: f64 = 3.0;
const SCAN_STEP: f64 = 1e-4;

/// Which of the two series is used at a given abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesBranch {
    /// Alternating series, used for `x >= x0_star`.
    UpperLambda1,
    /// Theta-transformed series, used for `0 < x < x0_star`.
    LowerLambda2,
}

/// Truncation parameters shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    x_bar: f64,
    x0_star: f64,
    k_star: usize,
}

impl TruncationConfig {
    pub fn x_bar(&self) -> f64 {
        self.x_bar
    }

    pub fn x0_star(&self) -> f64 {
        self.x0_star
    }

    pub fn k_star(&self) -> usize {
        self.k_star
    }

    pub fn branch(&self, x: f64) -> SeriesBranch {
        if x >= self.x0_star {
            SeriesBranch::UpperLambda1
        } else {
            SeriesBranch::LowerLambda2
        }
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        make_truncation_config(DEFAULT_X_BAR).expect("default exponent cutoff is valid")
    }
}

/// Largest `t` for which `exp(-t)` is a nonzero `f64` on this machine.
///
/// Found by bisection on the library `exp`, so it reflects subnormal
/// rounding (about 745.133 for binary64).
pub fn machine_exponent_cutoff() -> f64 {
    let (mut lo, mut hi) = (1.0_f64, 2000.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (-mid).exp() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn check_args(x: f64, x_bar: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return domain(format!("x must be positive and finite, got {x}"));
    }
    if !(x_bar.is_finite() && x_bar > 0.0) {
        return domain(format!("x_bar must be positive and finite, got {x_bar}"));
    }
    Ok(())
}

/// Largest `k` with `2 k^2 x^2 <= x_bar`: terms of the upper series beyond it underflow.
pub fn kbar1(x: f64, x_bar: f64) -> Result<usize> {
    check_args(x, x_bar)?;
    Ok(((2.0 * x_bar).sqrt() / (2.0 * x)).floor() as usize)
}

/// Largest `k` with `(2k-1)^2 pi^2 / (8 x^2) <= x_bar`: same role for the lower series.
pub fn kbar2(x: f64, x_bar: f64) -> Result<usize> {
    check_args(x, x_bar)?;
    Ok((x * (2.0 * x_bar).sqrt() / PI + 0.5).floor() as usize)
}

fn order_at(x0: f64, x_bar: f64) -> usize {
    // arguments are validated by the caller
    let k1 = ((2.0 * x_bar).sqrt() / (2.0 * x0)).floor() as usize;
    let k2 = (x0 * (2.0 * x_bar).sqrt() / PI + 0.5).floor() as usize;
    k1.max(k2)
}

/// Picks the branch point as the leftmost minimizer of `max(kbar1, kbar2)`
/// over a `1e-4` grid on `(0.2, 3.0)`.
pub fn make_truncation_config(x_bar: f64) -> Result<TruncationConfig> {
    if !(x_bar.is_finite() && x_bar > 0.0) {
        return domain(format!("x_bar must be positive and finite, got {x_bar}"));
    }
    let steps = ((SCAN_HI - SCAN_LO) / SCAN_STEP).round() as usize;
    let mut best: Option<(f64, usize)> = None;
    for i in 1..steps {
        let x0 = SCAN_LO + i as f64 * SCAN_STEP;
        let k = order_at(x0, x_bar);
        if best.is_none_or(|(_, kb)| k < kb) {
            best = Some((x0, k));
        }
    }
    match best {
        Some((x0_star, k_star)) if k_star >= 1 => Ok(TruncationConfig {
            x_bar,
            x0_star,
            k_star,
        }),
        _ => Err(Error::Configuration(format!(
            "x_bar = {x_bar} leaves no series term above the underflow threshold"
        ))),
    }
}

// Raw partial sums with an explicit number of terms.

/// Upper CDF series truncated after `terms` terms.
pub fn upper_cdf_series(x: f64, terms: usize) -> f64 {
    let x2 = x * x;
    let mut sum = 0.0;
    for k in 1..=terms {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x2).exp();
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    1.0 - 2.0 * sum
}

/// Lower CDF series truncated after `terms` terms.
pub fn lower_cdf_series(x: f64, terms: usize) -> f64 {
    let inv8x2 = 1.0 / (8.0 * x * x);
    let mut sum = 0.0;
    for k in 1..=terms {
        let odd = (2 * k - 1) as f64;
        sum += (-odd * odd * PI_SQ * inv8x2).exp();
    }
    SQRT_2PI / x * sum
}

/// Term-by-term derivative of [`upper_cdf_series`].
pub fn upper_pdf_series(x: f64, terms: usize) -> f64 {
    let x2 = x * x;
    let mut sum = 0.0;
    for k in 1..=terms {
        let kf = k as f64;
        let term = kf * kf * (-2.0 * kf * kf * x2).exp();
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    8.0 * x * sum
}

/// Term-by-term derivative of [`lower_cdf_series`].
pub fn lower_pdf_series(x: f64, terms: usize) -> f64 {
    let x2 = x * x;
    let mut sum = 0.0;
    for k in 1..=terms {
        let odd = (2 * k - 1) as f64;
        let q = odd * odd * PI_SQ / (8.0 * x2);
        sum += (2.0 * q - 1.0) * (-q).exp();
    }
    SQRT_2PI / x2 * sum
}

fn check_input(x: f64) -> Result<()> {
    if x.is_nan() {
        return domain("x is NaN");
    }
    Ok(())
}

/// Kolmogorov CDF.
pub fn cdf(x: f64, cfg: &TruncationConfig) -> Result<f64> {
    check_input(x)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let v = match cfg.branch(x) {
        SeriesBranch::UpperLambda1 => upper_cdf_series(x, cfg.k_star),
        SeriesBranch::LowerLambda2 => lower_cdf_series(x, cfg.k_star),
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Survival function `1 - cdf(x)`, summed directly on the upper branch so
/// far-tail values keep their relative accuracy.
pub fn sf(x: f64, cfg: &TruncationConfig) -> Result<f64> {
    check_input(x)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    let v = match cfg.branch(x) {
        SeriesBranch::UpperLambda1 => {
            let x2 = x * x;
            let mut sum = 0.0;
            for k in 1..=cfg.k_star {
                let kf = k as f64;
                let term = (-2.0 * kf * kf * x2).exp();
                if k % 2 == 1 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            2.0 * sum
        }
        SeriesBranch::LowerLambda2 => 1.0 - lower_cdf_series(x, cfg.k_star),
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Kolmogorov density `f*`, zero outside `(0, inf)`.
pub fn pdf(x: f64, cfg: &TruncationConfig) -> Result<f64> {
    check_input(x)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let v = match cfg.branch(x) {
        SeriesBranch::UpperLambda1 => upper_pdf_series(x, cfg.k_star),
        SeriesBranch::LowerLambda2 => lower_pdf_series(x, cfg.k_star),
    };
    Ok(v.max(0.0))
}

/// Natural log of [`pdf`], with the leading exponential factored out of the
/// sum so the result stays finite where the density itself underflows.
pub fn ln_pdf(x: f64, cfg: &TruncationConfig) -> Result<f64> {
    check_input(x)?;
    if x <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(ln_pdf_unchecked(x, cfg))
}

pub(crate) fn ln_pdf_unchecked(x: f64, cfg: &TruncationConfig) -> f64 {
    let x2 = x * x;
    let (lead, sum) = match cfg.branch(x) {
        SeriesBranch::UpperLambda1 => {
            // 8x e^{-2x^2} * sum (-1)^{k-1} k^2 e^{-2(k^2-1)x^2}
            let mut sum = 0.0;
            for k in 1..=cfg.k_star {
                let kf = k as f64;
                let term = kf * kf * (-2.0 * (kf * kf - 1.0) * x2).exp();
                if k % 2 == 1 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            ((8.0 * x).ln() - 2.0 * x2, sum)
        }
        SeriesBranch::LowerLambda2 => {
            let q1 = PI_SQ / (8.0 * x2);
            let mut sum = 0.0;
            for k in 1..=cfg.k_star {
                let odd = (2 * k - 1) as f64;
                let q = odd * odd * q1;
                sum += (2.0 * q - 1.0) * (q1 - q).exp();
            }
            (SQRT_2PI.ln() - 2.0 * x.ln() - q1, sum)
        }
    };
    if sum > 0.0 {
        lead + sum.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Leibniz remainder bound `a_{n+1}(x) = 4 (n+1)^2 x exp(-2 (n+1)^2 x^2)` for
/// the upper-branch series after `n` terms.
///
/// The magnitudes `a_k(x)` decrease in `k` only once `k > 1/(x sqrt 2)`, so
/// the bound is refused before that point.
pub fn lambda1_tail_bound(x: f64, n: usize) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return domain(format!("x must be positive and finite, got {x}"));
    }
    if n == 0 {
        return domain("n must be at least 1");
    }
    let m = (n + 1) as f64;
    if m <= 1.0 / (x * SQRT_2) {
        return Err(Error::BoundNotApplicable { x, n });
    }
    Ok(4.0 * m * m * x * (-2.0 * m * m * x * x).exp())
}
