use thiserror::Error;

/// Errors produced by the evaluation, envelope, sampling and validation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The truncation machinery cannot be configured for the given cutoff.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The Leibniz remainder bound does not apply because the terms are not yet decreasing.
    #[error("remainder bound not applicable at x = {x}, n = {n}: need n + 1 > 1/(x*sqrt(2))")]
    BoundNotApplicable { x: f64, n: usize },

    /// The ratio target/proposal peaks at the edge of the search window.
    #[error("envelope unbounded for {family} proposal (alpha = {alpha}, beta = {beta}): ratio peaks at x = {at}")]
    EnvelopeUnbounded {
        family: &'static str,
        alpha: f64,
        beta: f64,
        at: f64,
    },

    #[error("proposal optimization failed: {0}")]
    OptimizationFailed(String),

    /// Too many consecutive rejections; the envelope constant is almost certainly wrong.
    #[error("sampler stuck after {rejections} consecutive rejections")]
    SamplerStuck { rejections: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
