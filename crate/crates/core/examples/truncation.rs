//! Shows how the truncation order depends on the exponent cutoff.
//!
//! cargo run --example truncation [x_bar]

use kolmogorov::{kbar1, kbar2, machine_exponent_cutoff, make_truncation_config};

fn main() -> kolmogorov::Result<()> {
    let x_bar = match std::env::args().nth(1) {
        Some(s) => s.parse().expect("x_bar must be a number"),
        None => kolmogorov::DEFAULT_X_BAR,
    };
    println!(
        "machine cutoff: exp(-{:.4}) is the smallest positive double",
        machine_exponent_cutoff()
    );

    let cfg = make_truncation_config(x_bar)?;
    println!(
        "x_bar = {}  x0* = {:.4}  k* = {}",
        cfg.x_bar(),
        cfg.x0_star(),
        cfg.k_star()
    );

    println!("{:>5} {:>6} {:>6}", "x", "kbar1", "kbar2");
    for x in [0.25, 0.5, 0.75, 1.0, cfg.x0_star(), 1.5, 2.0, 3.0] {
        println!("{x:>5.3} {:>6} {:>6}", kbar1(x, x_bar)?, kbar2(x, x_bar)?);
    }
    Ok(())
}
