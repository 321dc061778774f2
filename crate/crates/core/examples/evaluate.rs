//! Tabulates the density and CDF, marking which series branch is used.
//!
//! cargo run --example evaluate

use kolmogorov::{cdf, pdf, sf, TruncationConfig};

fn main() -> kolmogorov::Result<()> {
    let trunc = TruncationConfig::default();
    println!(
        "{:>6} {:>14} {:>14} {:>14}  branch",
        "x", "pdf", "cdf", "sf"
    );
    for i in 1..=24 {
        let x = 0.125 * i as f64;
        println!(
            "{x:>6.3} {:>14.8e} {:>14.8e} {:>14.8e}  {:?}",
            pdf(x, &trunc)?,
            cdf(x, &trunc)?,
            sf(x, &trunc)?,
            trunc.branch(x)
        );
    }
    Ok(())
}
