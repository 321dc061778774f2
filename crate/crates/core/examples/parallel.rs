//! Batches are bit-identical whatever the thread count.
//!
//! cargo run --release --example parallel

use std::time::Instant;

use kolmogorov::{sample_batch_with_threads, SamplerConfig};

fn main() -> kolmogorov::Result<()> {
    let cfg = SamplerConfig::with_seed(2024);
    let n = 2_000_000;
    let mut first = None;
    for threads in [1, 2, 4, 8] {
        let start = Instant::now();
        let batch = sample_batch_with_threads(&cfg, n, threads)?;
        let secs = start.elapsed().as_secs_f64();
        let same = match &first {
            None => {
                first = Some(batch);
                true
            }
            Some(f) => *f == batch,
        };
        println!("{threads} threads: {secs:.3} s, identical to 1 thread: {same}");
    }
    Ok(())
}
