//! Command-line front end for the block-based sparse table RMQ structures.

mod bench;
mod offline_cmd;
mod space_cmd;
mod variant;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bbst_core::{generate_array, generate_queries, io};
use variant::with_threads;

#[derive(Parser)]
#[command(name = "bbst", version, about = "Block-based sparse table RMQ toolkit")]
struct Cli {
    /// Worker threads for parallel stages (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random array file (raw little-endian u32, no header).
    GenArray {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a query batch file ("l r" text lines, or pairs of
    /// little-endian u64 when the path ends in .qbin).
    GenQueries {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        #[arg(long = "max-width")]
        max_width: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a variant against the scan oracle and print statistics.
    Verify(verify::VerifyArgs),
    /// Median-of-repetitions benchmark sweep with CSV output.
    Bench(bench::BenchArgs),
    /// Component-wise space accounting (pure arithmetic, any n).
    Space(space_cmd::SpaceArgs),
    /// Batched offline pipeline; emits one 0-based position per query.
    Offline(offline_cmd::OfflineArgs),
}

/// Command failure with its exit code: usage errors exit 2, runtime
/// failures (mismatches, I/O) exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn failure(msg: impl Into<String>) -> Self {
        CliError::Failure(msg.into())
    }

    fn usage_from(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn failure_from(e: impl std::fmt::Display) -> Self {
        CliError::Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = with_threads(cli.threads, || run(&cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::GenArray { n, seed, out } => {
            let a = generate_array(*n, *seed).map_err(CliError::usage_from)?;
            io::write_array(out, &a).map_err(CliError::failure_from)?;
            println!("array n={} seed={} path={}", a.len(), seed, out.display());
            Ok(())
        }
        Command::GenQueries { n, q, max_width, seed, out } => {
            let batch =
                generate_queries(*n, *q, *max_width, *seed).map_err(CliError::usage_from)?;
            io::write_queries(out, &batch).map_err(CliError::failure_from)?;
            println!(
                "queries n={} q={} max_width={} seed={} path={}",
                n,
                batch.len(),
                batch.max_width(),
                seed,
                out.display()
            );
            Ok(())
        }
        Command::Verify(args) => verify::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Space(args) => space_cmd::run(args),
        Command::Offline(args) => offline_cmd::run(args),
    }
}
