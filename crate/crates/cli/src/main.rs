//! `shiftlab`: exact analysis of weighted shifts on rooted directed trees,
//! plus a dense-matrix lab for their finite-dimensional structure theorems.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use shiftlab_cli::{
    default_analyses, fixture_input, load_input, parse_analysis_list, registry, render_json,
    resolve_horizon, run, Analysis, Input, Options, RunOutcome, DEFAULT_TRIALS, HORIZON_ENV,
};

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Exact weighted-shift analysis on rooted directed trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run analyses against a fixture or an input file (tree or matrix JSON).
    Analyze(AnalyzeArgs),
    /// List the built-in fixture corpus.
    Fixtures,
    /// Decompose a matrix input into scaled-unitary blocks.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Built-in fixture name (a, b, c, d, e).
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// Path to a JSON input: a tree spec, or a matrix {"n": .., "rows": ..}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Comma-separated analyses; defaults to the full bundle for the input kind.
    #[arg(long, value_delimiter = ',')]
    analyses: Vec<String>,
    /// Tail-verification horizon (default 10000; SHIFTLAB_HORIZON overrides).
    #[arg(long)]
    horizon: Option<u64>,
    /// Seed for randomized analyses.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trial budget for randomized analyses.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    /// Also write the machine-readable report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Path to a matrix JSON file {"n": .., "rows": [[..], ..]}.
    #[arg(long)]
    input: PathBuf,
    /// Seed for the class-hypothesis sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample budget for the class-hypothesis test.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    /// Also write the machine-readable report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("shiftlab: error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Fixtures => {
            print!("{}", registry::listing());
            Ok(0)
        }
        Command::Analyze(args) => {
            let (input, source) = resolve_input(args.fixture.as_deref(), args.input.as_deref())?;
            let analyses = if args.analyses.is_empty() {
                default_analyses(&input)
            } else {
                parse_analysis_list(&args.analyses)?
            };
            let env = std::env::var(HORIZON_ENV).ok();
            let options = Options {
                horizon: resolve_horizon(args.horizon, env.as_deref())?,
                seed: args.seed,
                trials: args.trials,
            };
            emit(run(&input, &analyses, &options, &source)?, args.json.as_deref())
        }
        Command::Decompose(args) => {
            let input = load_input(&args.input)?;
            if !matches!(input, Input::Matrix(_)) {
                bail!("decompose needs a matrix input");
            }
            let source = format!("file:{}", args.input.display());
            let options = Options {
                seed: args.seed,
                trials: args.trials,
                ..Options::default()
            };
            emit(
                run(&input, &[Analysis::Decompose], &options, &source)?,
                args.json.as_deref(),
            )
        }
    }
}

fn resolve_input(fixture: Option<&str>, path: Option<&std::path::Path>) -> Result<(Input, String)> {
    match (fixture, path) {
        (Some(name), None) => Ok((fixture_input(name)?, format!("fixture:{name}"))),
        (None, Some(p)) => Ok((load_input(p)?, format!("file:{}", p.display()))),
        (None, None) => bail!("one of --fixture or --input is required"),
        (Some(_), Some(_)) => bail!("--fixture and --input are mutually exclusive"),
    }
}

fn emit(outcome: RunOutcome, json_path: Option<&std::path::Path>) -> Result<u8> {
    print!("{}", outcome.human);
    if let Some(path) = json_path {
        std::fs::write(path, render_json(&outcome.doc))?;
        println!("machine-readable report written to {}", path.display());
    }
    Ok(outcome.exit_status)
}
