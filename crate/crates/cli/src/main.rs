use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use seqwit::par::Mode;
use seqwit::query::eval_descriptor;
use seqwit::suites::{run_suite_with, SuiteConfig};

#[derive(Parser)]
#[command(name = "seqwit", version, about = "Verification suites for sequential test sets on the sequential fan")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and emit its report.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_spoke: Option<u64>,
        #[arg(long)]
        max_depth: Option<u64>,
        #[arg(long)]
        probes: Option<u64>,
        #[arg(long, env = "SEQWIT_SEED")]
        seed: Option<u64>,
        /// Absolute tolerance for the real-line suite.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Evaluate checks on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Answer one query about a JSON descriptor file.
    Eval {
        path: PathBuf,
        /// member, converges, injective, in-ip, almost-disjoint,
        /// in-witness-family, discontinuous, test-set-relative
        query: String,
    },
}

const USAGE: u8 = 2;

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e).context("writing stdout"),
            _ => Ok(()),
        },
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { suite, max_spoke, max_depth, probes, seed, tolerance, format, out, sequential } => {
            let config = SuiteConfig { suite, max_spoke, max_depth, probes, seed, tolerance };
            let mode = if sequential { Mode::Sequential } else { Mode::Parallel };
            let report = match run_suite_with(&config, mode) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("seqwit: {e}");
                    return Ok(ExitCode::from(USAGE));
                }
            };
            let text = match format {
                Format::Json => report.to_json(),
                Format::Markdown => report.to_markdown(),
            };
            emit(&text, out.as_ref())?;
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Eval { path, query } => match eval_descriptor(&path, &query) {
            Ok(answer) => {
                emit(&answer.to_json(), None)?;
                Ok(ExitCode::SUCCESS)
            }
            Err(e) => {
                eprintln!("seqwit: {e}");
                Ok(ExitCode::from(USAGE))
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("seqwit: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
