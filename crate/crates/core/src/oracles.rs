//! Independent stochastic representations of the Kolmogorov law, used to
//! cross-check the acceptance-rejection sampler.
//!
//! - `sup_t |B(t)|` of a standard Brownian bridge on `[0, 1]`, simulated on a
//!   uniform grid (biased slightly low by the discretization).
//! - `Y = 2 W Z` with `W` Kolmogorov and `Z ~ N(0, 1)` is standard logistic.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::streams::substream;

pub const DEFAULT_BRIDGE_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeConfig {
    pub n_steps: usize,
    pub seed: u64,
}

impl BridgeConfig {
    pub fn new(n_steps: usize, seed: u64) -> Result<Self> {
        if n_steps == 0 {
            return domain("n_steps must be at least 1");
        }
        Ok(Self { n_steps, seed })
    }
}

impl Default for BridgeConfig {
    fn default() -> Self {
        Self {
            n_steps: DEFAULT_BRIDGE_STEPS,
            seed: 1,
        }
    }
}

/// Bridge values `B(t_i) = W(t_i) - t_i W(1)` on `t_i = i/n` from the
/// standard-normal increments `z` (scaled by `sqrt(1/n)` here).
/// `B(0)` and `B(1)` are exactly zero.
pub fn bridge_path(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    let mut w = Vec::with_capacity(n + 1);
    w.push(0.0);
    if n == 0 {
        return w;
    }
    let scale = (1.0 / n as f64).sqrt();
    let mut acc = 0.0;
    for &zi in z {
        acc += zi * scale;
        w.push(acc);
    }
    let end = acc;
    for (i, wi) in w.iter_mut().enumerate() {
        *wi -= (i as f64 / n as f64) * end;
    }
    w
}

/// `max_i |B(t_i)|` for a sequence of increments; equivalent to the max of
/// [`bridge_path`] without storing the path.
pub fn bridge_sup_from_increments(z: &[f64]) -> f64 {
    let n = z.len();
    if n == 0 {
        return 0.0;
    }
    let scale = (1.0 / n as f64).sqrt();
    let end: f64 = z.iter().map(|&zi| zi * scale).sum();
    let mut acc = 0.0;
    let mut sup = 0.0_f64;
    for (i, &zi) in z.iter().enumerate() {
        acc += zi * scale;
        let b = acc - ((i + 1) as f64 / n as f64) * end;
        sup = sup.max(b.abs());
    }
    sup
}

/// One simulated bridge supremum.
pub fn brownian_bridge_sup<R: Rng + ?Sized>(cfg: &BridgeConfig, rng: &mut R) -> f64 {
    let z: Vec<f64> = (0..cfg.n_steps)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    bridge_sup_from_increments(&z)
}

/// `paths` independent suprema; path `i` uses substream `(seed, i)`.
pub fn bridge_sup_batch(cfg: &BridgeConfig, paths: usize) -> Vec<f64> {
    (0..paths)
        .into_par_iter()
        .map(|i| brownian_bridge_sup(cfg, &mut substream(cfg.seed, i as u64)))
        .collect()
}

/// `2 W Z` with `W` taken from `kolmo`.
pub fn logistic_mixture_sample<I, R>(kolmo: &mut I, rng: &mut R) -> Result<f64>
where
    I: Iterator<Item = Result<f64>>,
    R: Rng + ?Sized,
{
    let w = kolmo
        .next()
        .ok_or_else(|| Error::Domain("Kolmogorov source exhausted".into()))??;
    let z: f64 = rng.sample(StandardNormal);
    Ok(2.0 * w * z)
}

/// Standard logistic CDF `1 / (1 + exp(-y))`.
pub fn logistic_cdf(y: f64) -> f64 {
    if y >= 0.0 {
        1.0 / (1.0 + (-y).exp())
    } else {
        let e = y.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::StreamRng;
    use rand::SeedableRng;

    #[test]
    fn single_step_bridge_is_pinned() {
        let cfg = BridgeConfig::new(1, 0).unwrap();
        let mut rng = StreamRng::seed_from_u64(0);
        for _ in 0..10 {
            assert_eq!(brownian_bridge_sup(&cfg, &mut rng), 0.0);
        }
        assert!(BridgeConfig::new(0, 0).is_err());
    }

    #[test]
    fn paths_are_pinned_at_both_ends() {
        let mut rng = StreamRng::seed_from_u64(4);
        for n in [1usize, 2, 7, 100, 1000] {
            let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let b = bridge_path(&z);
            assert_eq!(b.len(), n + 1);
            assert_eq!(b[0], 0.0);
            assert_eq!(b[n], 0.0);
            let direct = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!((direct - bridge_sup_from_increments(&z)).abs() < 1e-12);
        }
    }

    #[test]
    fn sign_flip_leaves_sup_unchanged() {
        let mut rng = StreamRng::seed_from_u64(8);
        for _ in 0..20 {
            let z: Vec<f64> = (0..500).map(|_| rng.sample(StandardNormal)).collect();
            let flipped: Vec<f64> = z.iter().map(|v| -v).collect();
            assert_eq!(
                bridge_sup_from_increments(&z),
                bridge_sup_from_increments(&flipped)
            );
        }
    }

    #[test]
    fn refinement_never_lowers_the_sup() {
        // coarse path on every 100th node of the fine one (common random numbers)
        let mut rng = StreamRng::seed_from_u64(21);
        let (fine_n, coarse_n) = (10_000, 100);
        let (mut fine_sum, mut coarse_sum) = (0.0, 0.0);
        for _ in 0..200 {
            let z: Vec<f64> = (0..fine_n).map(|_| rng.sample(StandardNormal)).collect();
            let b = bridge_path(&z);
            let fine = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let coarse = b
                .iter()
                .step_by(fine_n / coarse_n)
                .fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!(fine >= coarse);
            fine_sum += fine;
            coarse_sum += coarse;
        }
        assert!(fine_sum >= coarse_sum);
    }

    #[test]
    fn batch_is_reproducible() {
        let cfg = BridgeConfig::new(200, 3).unwrap();
        assert_eq!(bridge_sup_batch(&cfg, 64), bridge_sup_batch(&cfg, 64));
    }

    #[test]
    fn logistic_cdf_is_symmetric() {
        for &y in &[0.0, 0.5, 3.0, 40.0, 800.0] {
            assert!((logistic_cdf(y) + logistic_cdf(-y) - 1.0).abs() < 1e-15);
        }
        assert_eq!(logistic_cdf(0.0), 0.5);
    }

    #[test]
    fn exhausted_source_is_an_error() {
        let mut empty = std::iter::empty::<Result<f64>>();
        let mut rng = StreamRng::seed_from_u64(0);
        assert!(logistic_mixture_sample(&mut empty, &mut rng).is_err());
    }
}
