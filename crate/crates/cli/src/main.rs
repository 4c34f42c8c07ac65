use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use hexalab::exactfield::{FieldSpec, DEFAULT_PRIME};
use hexalab::exotic::read_complex_file;
use hexalab::verify::{parse_cluster, run, RunConfig, Suite};

#[derive(Parser, Debug)]
#[command(
    name = "hexalab",
    version,
    about = "Exact verification of hexagon structures on the 5-simplex"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// pentachoron, pachner, exotic, cocycle3, cocycle4, cocycle4char2, cohomology, isotropy or all
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    /// Field: p=<prime>, gf2=<k> or q
    #[arg(long, default_value_t = FieldSpec::Prime { modulus: DEFAULT_PRIME }, value_parser = parse_field)]
    field: FieldSpec,
    /// Base seed; trial i uses seed + i
    #[arg(long, env = "HEXALAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Independent trials per check
    #[arg(long, default_value_t = 1)]
    trials: u32,
    /// Restrict cluster checks to one cluster and its complement, e.g. omit=6,5
    #[arg(long)]
    cluster: Option<String>,
    /// Pentachoron list for the general exotic complex
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
        .map_err(|e: hexalab::verify::ConfigError| e.to_string())
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse()
        .map_err(|e: hexalab::exactfield::FieldError| e.to_string())
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let mut config = RunConfig::new(args.suite, args.field, args.seed, args.trials);
    if let Some(c) = &args.cluster {
        match parse_cluster(c) {
            Ok(vs) => config.cluster = Some(vs),
            Err(e) => {
                eprintln!("hexalab: {e}");
                return Ok(ExitCode::from(2));
            }
        }
    }
    if let Some(path) = &args.complex {
        match read_complex_file(path) {
            Ok(k) => config.complex = Some((path.display().to_string(), k)),
            Err(e) => {
                eprintln!("hexalab: {e}");
                return Ok(ExitCode::from(2));
            }
        }
    }
    let start = Instant::now();
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hexalab: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let text = report.to_json();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!(
        "{} checks: {} pass, {} degenerate-resampled, {} fail, {} error ({:.2?})",
        s.checks,
        s.pass,
        s.degenerate_resampled,
        s.fail,
        s.error,
        start.elapsed()
    );
    Ok(if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("hexalab: {e:#}");
        ExitCode::from(2)
    })
}
