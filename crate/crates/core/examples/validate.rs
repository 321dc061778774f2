//! Moment and KS checks for both proposal families.
//!
//! cargo run --release --example validate [n]

use kolmogorov::{validate_sampler, ProposalFamily, ProposalSpec, SamplerConfig, TruncationConfig};

fn main() -> kolmogorov::Result<()> {
    let n = std::env::args()
        .nth(1)
        .map_or(1_000_000, |s| s.parse().expect("n must be an integer"));
    let trunc = TruncationConfig::default();
    for family in [ProposalFamily::InverseGamma, ProposalFamily::Gamma] {
        let cfg = SamplerConfig::new(ProposalSpec::reference(family), trunc, 1)?;
        println!("== {family} ==");
        println!("{}\n", validate_sampler(&cfg, n)?);
    }
    Ok(())
}
