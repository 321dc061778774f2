//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::density::{cdf, pdf, TruncationConfig};
use crate::envelope::{optimize_proposal, ProposalFamily, ProposalSpec};
use crate::error::{Error, Result};
use crate::io::{fmt_sig17, write_csv};
use crate::sampler::{sample_batch, SamplerConfig};
use crate::validation::validate_sampler;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "kolmogorov",
    version,
    about = "Kolmogorov distribution: evaluation, sampling and validation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Cap on worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum FamilyArg {
    #[default]
    #[value(name = "inv-gamma")]
    InvGamma,
    Gamma,
}

impl From<FamilyArg> for ProposalFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::InvGamma => ProposalFamily::InverseGamma,
            FamilyArg::Gamma => ProposalFamily::Gamma,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the density.
    Pdf(EvalArgs),
    /// Evaluate the CDF.
    Cdf(EvalArgs),
    /// Generate variates.
    Sample(SampleArgs),
    /// Optimize proposal parameters and print the spec as JSON.
    Optimize(FamilyArgs),
    /// Generate variates and check moments and KS fit.
    Validate(ValidateArgs),
    /// Time repeated batch generation.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(
        long,
        allow_negative_numbers = true,
        conflicts_with = "grid",
        required_unless_present = "grid"
    )]
    pub x: Option<f64>,
    /// Evenly spaced points `a:b:n`, endpoints included.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value_t)]
    pub proposal: FamilyArg,
}

#[derive(Debug, Args)]
pub struct ProposalArgs {
    #[arg(long, value_enum, default_value_t)]
    pub proposal: FamilyArg,
    /// Shape override; requires --beta.
    #[arg(long, requires = "beta")]
    pub alpha: Option<f64>,
    /// Rate override; requires --alpha.
    #[arg(long, requires = "alpha")]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub proposal: ProposalArgs,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub proposal: ProposalArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub proposal: ProposalArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            Error::Domain(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    // buffered so the work can move onto a dedicated pool
    let (mut out_buf, mut err_buf) = (Vec::new(), Vec::new());
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut out_buf, &mut err_buf)),
            Err(e) => Err(Failure {
                code: EXIT_NUMERICAL,
                message: format!("cannot start worker pool: {e}"),
            }),
        },
        None => dispatch(&cli, &mut out_buf, &mut err_buf),
    };
    let flushed = stdout
        .write_all(&out_buf)
        .and_then(|_| stdout.flush())
        .and_then(|_| stderr.write_all(&err_buf));
    let outcome = match (outcome, flushed) {
        (Ok(()), Err(e)) => Err(Failure::from(e)),
        (other, _) => other,
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let trunc = TruncationConfig::default();
    match &cli.command {
        Command::Pdf(a) => run_eval(cli, a, "pdf", |x| pdf(x, &trunc), stdout, stderr),
        Command::Cdf(a) => run_eval(cli, a, "cdf", |x| cdf(x, &trunc), stdout, stderr),
        Command::Sample(a) => run_sample(cli, a, &trunc, stdout),
        Command::Optimize(a) => run_optimize(cli, a, &trunc, stdout),
        Command::Validate(a) => run_validate(cli, a, &trunc, stdout),
        Command::Bench(a) => run_bench(cli, a, &trunc, stdout),
    }
}

fn with_output<F>(out: Option<&Path>, stdout: &mut dyn Write, body: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("cannot write {}: {e}", path.display()),
            })?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            body(stdout)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Parses `a:b:n` into `n` evenly spaced points from `a` to `b`.
pub fn parse_grid(spec: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("grid must look like a:b:n, got '{spec}'"));
    };
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad grid start '{a}'"))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad grid end '{b}'"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("bad grid size '{n}'"))?;
    if !(a.is_finite() && b.is_finite()) || n == 0 || b < a {
        return Err(format!("grid needs finite a <= b and n >= 1, got '{spec}'"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * step })
        .collect())
}

#[derive(Serialize)]
struct EvalRow {
    x: f64,
    value: f64,
}

fn run_eval<F>(
    cli: &Cli,
    args: &EvalArgs,
    name: &str,
    f: F,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<()>
where
    F: Fn(f64) -> Result<f64>,
{
    let xs = match (&args.x, &args.grid) {
        (Some(x), None) => vec![*x],
        (None, Some(g)) => parse_grid(g).map_err(Failure::usage)?,
        _ => return Err(Failure::usage("exactly one of --x or --grid is required")),
    };
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        if x <= 0.0 {
            writeln!(
                stderr,
                "warning: x = {x:?} is outside the support (0, inf); {name} is 0"
            )?;
        }
        rows.push(EvalRow { x, value: f(x)? });
    }
    with_output(cli.out.as_deref(), stdout, |w| {
        match cli.format {
            Format::Csv => {
                writeln!(w, "x,{name}")?;
                for r in &rows {
                    writeln!(w, "{:?},{}", r.x, fmt_sig17(r.value))?;
                }
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &rows).map_err(Error::from)?;
                writeln!(w)?;
            }
        }
        Ok(())
    })
}

fn sampler_config(
    p: &ProposalArgs,
    trunc: &TruncationConfig,
    seed: u64,
) -> CliResult<SamplerConfig> {
    let family = ProposalFamily::from(p.proposal);
    let spec = match (p.alpha, p.beta) {
        (Some(a), Some(b)) => ProposalSpec::with_computed_envelope(family, a, b, trunc)?,
        (None, None) => ProposalSpec::reference(family),
        _ => return Err(Failure::usage("--alpha and --beta must be given together")),
    };
    Ok(SamplerConfig::new(spec, *trunc, seed)?)
}

#[derive(Serialize)]
struct SampleDocument<'a> {
    metadata: crate::sampler::BatchMetadata,
    values: &'a [f64],
}

fn run_sample(
    cli: &Cli,
    args: &SampleArgs,
    trunc: &TruncationConfig,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    if args.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let cfg = sampler_config(&args.proposal, trunc, cli.seed)?;
    let batch = sample_batch(&cfg, args.n)?;
    match (cli.format, cli.out.as_deref()) {
        (Format::Csv, out) => with_output(out, stdout, |w| Ok(write_csv(&batch.values, w)?)),
        (Format::Json, Some(path)) => {
            with_output(Some(path), stdout, |w| Ok(write_csv(&batch.values, w)?))?;
            let sidecar = sidecar_path(path);
            with_output(Some(&sidecar), stdout, |w| {
                serde_json::to_writer_pretty(&mut *w, &batch.metadata()).map_err(Error::from)?;
                writeln!(w)?;
                Ok(())
            })
        }
        (Format::Json, None) => with_output(None, stdout, |w| {
            let doc = SampleDocument {
                metadata: batch.metadata(),
                values: &batch.values,
            };
            serde_json::to_writer(&mut *w, &doc).map_err(Error::from)?;
            writeln!(w)?;
            Ok(())
        }),
    }
}

/// `<out>.json` next to the data file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn run_optimize(
    cli: &Cli,
    args: &FamilyArgs,
    trunc: &TruncationConfig,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let spec = optimize_proposal(args.proposal.into(), trunc)?;
    with_output(cli.out.as_deref(), stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, &spec).map_err(Error::from)?;
        writeln!(w)?;
        Ok(())
    })
}

fn run_validate(
    cli: &Cli,
    args: &ValidateArgs,
    trunc: &TruncationConfig,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let cfg = sampler_config(&args.proposal, trunc, cli.seed)?;
    let report = validate_sampler(&cfg, args.n)?;
    with_output(cli.out.as_deref(), stdout, |w| {
        match cli.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &report).map_err(Error::from)?;
                writeln!(w)?;
            }
            Format::Csv => writeln!(w, "{report}")?,
        }
        Ok(())
    })
}

#[derive(Debug, Serialize)]
struct BenchSummary {
    n: usize,
    reps: usize,
    mean_s: f64,
    min_s: f64,
    max_s: f64,
}

fn run_bench(
    cli: &Cli,
    args: &BenchArgs,
    trunc: &TruncationConfig,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    if args.n == 0 || args.reps == 0 {
        return Err(Failure::usage("--n and --reps must be at least 1"));
    }
    let base = sampler_config(&args.proposal, trunc, cli.seed)?;
    let mut times = Vec::with_capacity(args.reps);
    for rep in 0..args.reps {
        let cfg = SamplerConfig {
            seed: base.seed.wrapping_add(rep as u64),
            ..base
        };
        let start = Instant::now();
        let batch = sample_batch(&cfg, args.n)?;
        times.push(start.elapsed().as_secs_f64());
        std::hint::black_box(&batch.values);
    }
    let summary = BenchSummary {
        n: args.n,
        reps: args.reps,
        mean_s: times.iter().sum::<f64>() / times.len() as f64,
        min_s: times.iter().copied().fold(f64::INFINITY, f64::min),
        max_s: times.iter().copied().fold(0.0, f64::max),
    };
    with_output(cli.out.as_deref(), stdout, |w| {
        match cli.format {
            Format::Csv => {
                writeln!(w, "n,reps,mean_s,min_s,max_s")?;
                writeln!(
                    w,
                    "{},{},{:.6},{:.6},{:.6}",
                    summary.n, summary.reps, summary.mean_s, summary.min_s, summary.max_s
                )?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &summary).map_err(Error::from)?;
                writeln!(w)?;
            }
        }
        Ok(())
    })
}
