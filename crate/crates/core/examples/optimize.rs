//! Searches for the proposal parameters that minimize the envelope constant.
//!
//! cargo run --release --example optimize

use std::time::Instant;

use kolmogorov::{optimize_proposal_detailed, ProposalFamily, TruncationConfig};

fn main() -> kolmogorov::Result<()> {
    let trunc = TruncationConfig::default();
    for family in [ProposalFamily::InverseGamma, ProposalFamily::Gamma] {
        let start = Instant::now();
        let opt = optimize_proposal_detailed(family, &trunc)?;
        let (a0, b0, m0) = opt.best_start;
        println!("{family}: grid start alpha = {a0}, beta = {b0}, M = {m0:.5}");
        println!(
            "  optimum alpha = {:.4}, beta = {:.4}, M = {:.5} after {} iterations (converged: {}, {:.2} s)",
            opt.spec.alpha,
            opt.spec.beta,
            opt.spec.m_const,
            opt.iterations,
            opt.converged,
            start.elapsed().as_secs_f64()
        );
        println!("  {}", serde_json::to_string(&opt.spec)?);
    }
    Ok(())
}
