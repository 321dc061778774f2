//! Envelope constants for the reference proposals, plus a few neighbours.
//!
//! cargo run --example envelope

use kolmogorov::envelope::tail_ratios;
use kolmogorov::{
    envelope_constant, tail_ratio_check, ProposalFamily, ProposalSpec, TruncationConfig,
};

fn main() -> kolmogorov::Result<()> {
    let trunc = TruncationConfig::default();
    for family in [ProposalFamily::InverseGamma, ProposalFamily::Gamma] {
        let reference = ProposalSpec::reference(family);
        println!("{family}");
        for (da, db) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, -1.0)] {
            let (a, b) = (reference.alpha + da, reference.beta + db);
            let m = envelope_constant(family, a, b, &trunc)?;
            println!(
                "  alpha = {a:>6.2}  beta = {b:>6.2}  M = {m:.5}  acceptance = {:.4}",
                1.0 / m
            );
        }
        for (x, r) in tail_ratios(&reference, &trunc) {
            println!("  f/g at {x}: {r:.3e}");
        }
        println!("  tail check: {}", tail_ratio_check(&reference, &trunc));
    }

    // a proposal whose ratio keeps growing to the edge of the search window
    match envelope_constant(ProposalFamily::Gamma, 2.0, 50.0, &trunc) {
        Ok(m) => println!("gamma(2, 50): M = {m}"),
        Err(e) => println!("gamma(2, 50): {e}"),
    }
    Ok(())
}
