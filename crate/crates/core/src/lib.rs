//! Kolmogorov distribution: truncated-series density and CDF, and
//! acceptance-rejection variate generation with Gamma or inverse-Gamma
//! envelopes.
//!
//! ```
//! use kolmogorov::{cdf, pdf, sample_batch, SamplerConfig, TruncationConfig};
//!
//! let trunc = TruncationConfig::default();
//! assert_eq!(trunc.k_star(), 15);
//! assert!((cdf(1.0, &trunc).unwrap() - 0.7300003).abs() < 1e-7);
//! assert!(pdf(1.0, &trunc).unwrap() > 1.07);
//!
//! let batch = sample_batch(&SamplerConfig::with_seed(1), 1000).unwrap();
//! assert!(batch.values.iter().all(|&x| x > 0.0));
//! ```

pub mod cli;
pub mod density;
pub mod envelope;
pub mod error;
pub mod io;
pub mod oracles;
pub mod sampler;
pub mod simplex;
pub mod streams;
pub mod validation;

pub use density::{
    cdf, kbar1, kbar2, lambda1_tail_bound, ln_pdf, machine_exponent_cutoff, make_truncation_config,
    pdf, sf, SeriesBranch, TruncationConfig, DEFAULT_X_BAR,
};
pub use envelope::{
    envelope_constant, optimize_proposal, optimize_proposal_detailed, proposal_pdf,
    proposal_sample, tail_ratio_check, ProposalFamily, ProposalSpec,
};
pub use error::{Error, Result};
pub use oracles::{bridge_sup_batch, brownian_bridge_sup, logistic_mixture_sample, BridgeConfig};
pub use sampler::{
    sample_batch, sample_batch_with_threads, sample_one, stream_sampler, BatchMetadata,
    KolmogorovStream, SampleBatch, Sampler, SamplerConfig,
};
pub use validation::{ks_pvalue, ks_statistic, validate_sampler, ValidationReport};
