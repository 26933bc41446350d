use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hadamard_core::harness::{
    certify_suite, emit_report, read_report, run_suite, Format, Report, RunOptions, SuiteConfig,
    DEFAULT_SAMPLES,
};
use hadamard_core::quadrature::DEFAULT_TOL;

/// Numerical checks of Hermite–Hadamard type bounds.
#[derive(Parser, Debug)]
#[command(name = "hadamard", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the derivative hypotheses of every case and report the largest sampled modulus.
    Certify(RunArgs),
    /// Run every requested check of every case.
    Verify(RunArgs),
    /// Run every case once per value of the config's `sweep` grid.
    Sweep(RunArgs),
    /// Convert a JSON report to another format.
    Report {
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    config: PathBuf,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Random sample triples per certification, on top of the fixed lattice.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Overrides every per-case seed (default when unset: the case seed, else 42).
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            quad_tol: self.tol,
            samples: self.samples,
            seed_override: self.seed,
        }
    }
}

fn emit(report: &Report, output: &OutputArgs) -> anyhow::Result<()> {
    emit_report(report, output.format.into(), output.out.as_deref()).with_context(|| match &output.out {
        Some(p) => format!("writing {}", p.display()),
        None => "writing report to stdout".into(),
    })
}

fn summarize(report: &Report) {
    let s = &report.summary;
    eprintln!(
        "{} records: {} passed, {} failed, {} skipped, {} corollary discrepancies (seed {})",
        s.total, s.passed, s.failed, s.precondition_skips, s.discrepancies, report.seed
    );
}

/// `Ok(true)` when some check failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let (report, output) = match cli.command {
        Command::Report { input, output } => {
            let report = read_report(&input)?;
            emit(&report, &output)?;
            return Ok(false);
        }
        Command::Certify(args) => {
            let cases = SuiteConfig::load(&args.config)?.cases;
            (certify_suite(&cases, &args.options())?, args.output)
        }
        Command::Verify(args) => {
            let cases = SuiteConfig::load(&args.config)?.cases;
            (run_suite(&cases, &args.options())?, args.output)
        }
        Command::Sweep(args) => {
            let cases = SuiteConfig::load(&args.config)?.expand_sweep()?;
            (run_suite(&cases, &args.options())?, args.output)
        }
    };
    emit(&report, &output)?;
    summarize(&report);
    Ok(report.has_failures())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
