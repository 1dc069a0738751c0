//! `gsbm` command-line front end: detection, evaluation, generation and
//! parameter-sweep benchmarks.

mod algo;
mod bench;
mod detect;
mod eval;
mod exit;
mod gen;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::exit::Failure;

#[derive(Debug, Parser)]
#[command(name = "gsbm", version, about = "Community detection with node-preference blockmodels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect communities in one graph.
    Detect(detect::DetectArgs),
    /// Compare two partition files.
    Eval(eval::EvalArgs),
    /// Generate a synthetic graph.
    #[command(subcommand)]
    Gen(gen::GenCommand),
    /// Run a parameter sweep described by a TOML file and write CSV.
    Bench(bench::BenchArgs),
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Detect(args) => detect::run(args),
        Command::Eval(args) => eval::run(args),
        Command::Gen(cmd) => gen::run(cmd),
        Command::Bench(args) => bench::run(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
