//! Draws a batch, streams a few more values, and writes both output formats.
//!
//! cargo run --release --example sample [n] [seed]

use std::fs::File;
use std::io::{BufReader, BufWriter};

use kolmogorov::io::{read_binary, read_csv, write_binary, write_csv};
use kolmogorov::{sample_batch, stream_sampler, SamplerConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(100_000), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse())?;

    let cfg = SamplerConfig::with_seed(seed);
    let batch = sample_batch(&cfg, n)?;
    println!(
        "{} draws from {} proposals (acceptance {:.5}), mean {:.6}",
        batch.n,
        batch.proposals_used,
        batch.acceptance_rate,
        batch.mean()
    );
    println!("{}", serde_json::to_string_pretty(&batch.metadata())?);

    // the stream reproduces the batch
    let head: Vec<f64> = stream_sampler(&cfg)?.take(5).collect::<Result<_, _>>()?;
    println!("first five: {head:?}");
    assert_eq!(head[..], batch.values[..5.min(n)]);

    let dir = std::env::temp_dir();
    let csv = dir.join("kolmogorov_sample.csv");
    let bin = dir.join("kolmogorov_sample.bin");
    write_csv(&batch.values, BufWriter::new(File::create(&csv)?))?;
    write_binary(&batch.values, BufWriter::new(File::create(&bin)?))?;
    assert_eq!(read_csv(BufReader::new(File::open(&csv)?))?, batch.values);
    assert_eq!(read_binary(File::open(&bin)?)?, batch.values);
    println!("wrote {} and {}", csv.display(), bin.display());
    Ok(())
}
