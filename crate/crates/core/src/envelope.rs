//! Gamma and inverse-Gamma proposals and the envelope constant `M = sup f*/g`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::fmt;

use crate::density::{ln_pdf_unchecked, TruncationConfig};
use crate::error::{domain, Error, Result};
use crate::simplex::{self, SimplexOptions};

const SEARCH_LO: f64 = 0.05;
const SEARCH_HI: f64 = 6.0;
const SEARCH_POINTS: usize = 10_000;
const GOLDEN_X_TOL: f64 = 1e-8;

const TAIL_PROBES: [f64; 4] = [0.05, 0.08, 4.0, 6.0];
const TAIL_LIMIT: f64 = 1e-6;

const START_GRID: [f64; 10] = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0];
const REFINED_STARTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProposalFamily {
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "inv-gamma")]
    InverseGamma,
}

impl ProposalFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Gamma => "gamma",
            Self::InverseGamma => "inv-gamma",
        }
    }
}

impl fmt::Display for ProposalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProposalFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Self::Gamma),
            "inv-gamma" | "inverse-gamma" => Ok(Self::InverseGamma),
            other => domain(format!("unknown proposal family '{other}'")),
        }
    }
}

/// A proposal density with shape `alpha`, rate `beta` and envelope constant `M`.
///
/// Serialized as `{"family": "gamma"|"inv-gamma", "alpha": .., "beta": .., "M": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct ProposalSpec {
    pub family: ProposalFamily,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "M")]
    pub m_const: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    family: ProposalFamily,
    alpha: f64,
    beta: f64,
    #[serde(rename = "M")]
    m_const: f64,
}

impl TryFrom<RawSpec> for ProposalSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        ProposalSpec::new(r.family, r.alpha, r.beta, r.m_const)
    }
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
        return domain(format!(
            "alpha and beta must be positive, got ({alpha}, {beta})"
        ));
    }
    Ok(())
}

impl ProposalSpec {
    pub fn new(family: ProposalFamily, alpha: f64, beta: f64, m_const: f64) -> Result<Self> {
        check_params(alpha, beta)?;
        if !(m_const.is_finite() && m_const >= 1.0) {
            return domain(format!(
                "envelope constant must be finite and >= 1, got {m_const}"
            ));
        }
        Ok(Self {
            family,
            alpha,
            beta,
            m_const,
        })
    }

    /// Builds a spec whose `M` is computed by [`envelope_constant`].
    pub fn with_computed_envelope(
        family: ProposalFamily,
        alpha: f64,
        beta: f64,
        cfg: &TruncationConfig,
    ) -> Result<Self> {
        let m = envelope_constant(family, alpha, beta, cfg)?;
        Self::new(family, alpha, beta, m.max(1.0))
    }

    /// Published optimum for each family, rounded as reported: inverse-Gamma
    /// `(10.29, 8.33, M = 1.05)`, Gamma `(9.21, 10.96, M = 1.123)`.
    pub fn reference(family: ProposalFamily) -> Self {
        match family {
            ProposalFamily::InverseGamma => Self {
                family,
                alpha: 10.29,
                beta: 8.33,
                m_const: 1.05,
            },
            ProposalFamily::Gamma => Self {
                family,
                alpha: 9.21,
                beta: 10.96,
                m_const: 1.123,
            },
        }
    }

    /// Theoretical acceptance rate `1/M`.
    pub fn acceptance_rate(&self) -> f64 {
        1.0 / self.m_const
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        ln_proposal(
            self.family,
            self.alpha,
            self.beta,
            ln_norm(self.alpha, self.beta),
            x,
        )
    }
}

fn ln_norm(alpha: f64, beta: f64) -> f64 {
    alpha * beta.ln() - ln_gamma(alpha)
}

#[inline]
pub(crate) fn ln_proposal(family: ProposalFamily, alpha: f64, beta: f64, norm: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    match family {
        ProposalFamily::Gamma => norm + (alpha - 1.0) * x.ln() - beta * x,
        ProposalFamily::InverseGamma => norm - (alpha + 1.0) * x.ln() - beta / x,
    }
}

/// Gamma or inverse-Gamma density at `x`; zero for `x <= 0`.
pub fn proposal_pdf(spec: &ProposalSpec, x: f64) -> Result<f64> {
    if x.is_nan() {
        return domain("x is NaN");
    }
    Ok(spec.ln_pdf(x).exp())
}

/// Shape/rate Gamma sampler; the inverse-Gamma variate is the reciprocal of
/// a Gamma(alpha, rate beta) draw.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ProposalDraw {
    family: ProposalFamily,
    gamma: Gamma<f64>,
}

impl ProposalDraw {
    pub(crate) fn new(spec: &ProposalSpec) -> Result<Self> {
        let gamma = Gamma::new(spec.alpha, 1.0 / spec.beta)
            .map_err(|e| Error::Domain(format!("invalid Gamma parameters: {e}")))?;
        Ok(Self {
            family: spec.family,
            gamma,
        })
    }

    #[inline]
    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let y = self.gamma.sample(rng);
        match self.family {
            ProposalFamily::Gamma => y,
            ProposalFamily::InverseGamma => 1.0 / y,
        }
    }
}

/// Draws one variate from the proposal.
pub fn proposal_sample<R: Rng + ?Sized>(spec: &ProposalSpec, rng: &mut R) -> Result<f64> {
    Ok(ProposalDraw::new(spec)?.draw(rng))
}

/// Log-spaced grid over the supremum search window with the target's log
/// density cached, so repeated envelope evaluations only pay for `ln g`.
#[derive(Debug, Clone)]
pub struct EnvelopeSearch {
    cfg: TruncationConfig,
    xs: Vec<f64>,
    ln_xs: Vec<f64>,
    ln_f: Vec<f64>,
}

impl EnvelopeSearch {
    pub fn new(cfg: &TruncationConfig) -> Self {
        let (a, b) = (SEARCH_LO.ln(), SEARCH_HI.ln());
        let step = (b - a) / (SEARCH_POINTS - 1) as f64;
        let ln_xs: Vec<f64> = (0..SEARCH_POINTS).map(|i| a + i as f64 * step).collect();
        let xs: Vec<f64> = ln_xs.iter().map(|l| l.exp()).collect();
        let ln_f = xs.iter().map(|&x| ln_pdf_unchecked(x, cfg)).collect();
        Self {
            cfg: *cfg,
            xs,
            ln_xs,
            ln_f,
        }
    }

    fn ln_ratio(&self, family: ProposalFamily, alpha: f64, beta: f64, norm: f64, x: f64) -> f64 {
        ln_pdf_unchecked(x, &self.cfg) - ln_proposal(family, alpha, beta, norm, x)
    }

    /// `sup f*/g` over the search window: coarse grid, then golden-section
    /// refinement around the best grid point.
    pub fn constant(&self, family: ProposalFamily, alpha: f64, beta: f64) -> Result<f64> {
        check_params(alpha, beta)?;
        let norm = ln_norm(alpha, beta);
        let (mut best_i, mut best) = (0usize, f64::NEG_INFINITY);
        for (i, (&lf, &lx)) in self.ln_f.iter().zip(&self.ln_xs).enumerate() {
            let lg = match family {
                ProposalFamily::Gamma => norm + (alpha - 1.0) * lx - beta * self.xs[i],
                ProposalFamily::InverseGamma => norm - (alpha + 1.0) * lx - beta / self.xs[i],
            };
            let r = lf - lg;
            if r > best {
                best = r;
                best_i = i;
            }
        }
        if !best.is_finite() || best_i == 0 || best_i == self.xs.len() - 1 {
            return Err(Error::EnvelopeUnbounded {
                family: family.as_str(),
                alpha,
                beta,
                at: self.xs[best_i],
            });
        }
        let refined = golden_max(
            |x| self.ln_ratio(family, alpha, beta, norm, x),
            self.xs[best_i - 1],
            self.xs[best_i + 1],
            GOLDEN_X_TOL,
        );
        Ok(best.max(refined).exp())
    }

    pub fn truncation(&self) -> &TruncationConfig {
        &self.cfg
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Envelope constant `M = sup_x f*(x) / g(x; alpha, beta)`.
pub fn envelope_constant(
    family: ProposalFamily,
    alpha: f64,
    beta: f64,
    cfg: &TruncationConfig,
) -> Result<f64> {
    EnvelopeSearch::new(cfg).constant(family, alpha, beta)
}

/// Largest value of `f*(x) / (M g(x))` over a log grid of `points` on `[lo, hi]`.
/// At most one for a valid envelope.
pub fn max_envelope_ratio(
    spec: &ProposalSpec,
    cfg: &TruncationConfig,
    lo: f64,
    hi: f64,
    points: usize,
) -> f64 {
    let norm = ln_norm(spec.alpha, spec.beta);
    let ln_m = spec.m_const.ln();
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points.max(2) - 1) as f64;
    (0..points.max(2))
        .map(|i| {
            let x = (a + i as f64 * step).exp();
            ln_pdf_unchecked(x, cfg)
                - ln_proposal(spec.family, spec.alpha, spec.beta, norm, x)
                - ln_m
        })
        .fold(f64::NEG_INFINITY, f64::max)
        .exp()
}

/// `f*/g` at the fixed tail probes `0.05, 0.08, 4.0, 6.0`.
pub fn tail_ratios(spec: &ProposalSpec, cfg: &TruncationConfig) -> [(f64, f64); 4] {
    let norm = ln_norm(spec.alpha, spec.beta);
    TAIL_PROBES.map(|x| {
        let r = ln_pdf_unchecked(x, cfg) - ln_proposal(spec.family, spec.alpha, spec.beta, norm, x);
        (x, r.exp())
    })
}

/// Numerical witness that `f*/g` vanishes as `x -> 0+` and `x -> inf`: the
/// ratio must be below `1e-6` at every tail probe.
pub fn tail_ratio_check(spec: &ProposalSpec, cfg: &TruncationConfig) -> bool {
    tail_ratios(spec, cfg).iter().all(|&(_, r)| r < TAIL_LIMIT)
}

/// Result of [`optimize_proposal_detailed`].
#[derive(Debug, Clone)]
pub struct Optimization {
    pub spec: ProposalSpec,
    /// Best `(alpha, beta, M)` on the start grid.
    pub best_start: (f64, f64, f64),
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `M(alpha, beta)` for the given family.
pub fn optimize_proposal(family: ProposalFamily, cfg: &TruncationConfig) -> Result<ProposalSpec> {
    optimize_proposal_detailed(family, cfg).map(|o| o.spec)
}

/// Grid of starts over `alpha, beta in [2, 20]`, then a simplex search in
/// `(ln alpha, ln beta)` from the few best starts.
pub fn optimize_proposal_detailed(
    family: ProposalFamily,
    cfg: &TruncationConfig,
) -> Result<Optimization> {
    let search = EnvelopeSearch::new(cfg);
    let h = |alpha: f64, beta: f64| {
        search
            .constant(family, alpha, beta)
            .unwrap_or(f64::INFINITY)
    };

    let starts: Vec<(f64, f64)> = START_GRID
        .iter()
        .flat_map(|&a| START_GRID.iter().map(move |&b| (a, b)))
        .collect();
    // indexed collect keeps grid order regardless of scheduling
    let values: Vec<f64> = starts.par_iter().map(|&(a, b)| h(a, b)).collect();

    let mut ranked: Vec<usize> = (0..starts.len())
        .filter(|&i| values[i].is_finite())
        .collect();
    if ranked.is_empty() {
        return Err(Error::OptimizationFailed(format!(
            "envelope unbounded at every start for {family} proposal"
        )));
    }
    ranked.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let grid_best = ranked[0];
    let best_start = (starts[grid_best].0, starts[grid_best].1, values[grid_best]);

    let opts = SimplexOptions::default();
    let runs: Vec<simplex::SimplexResult> = ranked
        .iter()
        .take(REFINED_STARTS)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&i| {
            let (a, b) = starts[i];
            simplex::minimize(|p| h(p[0].exp(), p[1].exp()), &[a.ln(), b.ln()], opts)
        })
        .collect();

    let run = runs
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    let (alpha, beta, m) = if run.value.is_finite() && run.value <= best_start.2 {
        (run.x[0].exp(), run.x[1].exp(), run.value)
    } else {
        best_start
    };
    if !m.is_finite() {
        return Err(Error::OptimizationFailed("simplex search diverged".into()));
    }
    Ok(Optimization {
        spec: ProposalSpec::new(family, alpha, beta, m.max(1.0))?,
        best_start,
        iterations: run.iterations,
        converged: run.converged,
    })
}
