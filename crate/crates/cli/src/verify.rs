//! `verify`: run a variant against the scan oracle and report statistics.

use std::path::PathBuf;
use std::time::Instant;

use bbst_core::offline;
use bbst_core::{generate_array, generate_queries, io, InputArray, QueryBatch};

use crate::variant::{count_mismatches, oracle_values, Built, StructureArgs, Variant};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    /// Array length when generating input.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,

    /// Number of queries when generating the batch.
    #[arg(long, default_value_t = 100_000)]
    pub q: usize,

    /// Width limit when generating the batch.
    #[arg(long = "max-width", default_value_t = 32_768)]
    pub max_width: usize,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Desk-scale cap on the array length.
    #[arg(long = "max-n", default_value_t = 10_000_000)]
    pub max_n: usize,

    /// Read the array from a file instead of generating it.
    #[arg(long)]
    pub array: Option<PathBuf>,

    /// Read the query batch from a file instead of generating it.
    #[arg(long)]
    pub queries: Option<PathBuf>,
}

pub fn load_inputs(
    array: &Option<PathBuf>,
    queries: &Option<PathBuf>,
    n: usize,
    q: usize,
    max_width: usize,
    seed: u64,
) -> Result<(InputArray, QueryBatch), CliError> {
    let a = match array {
        Some(path) => io::read_array(path).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?,
        None => generate_array(n, seed).map_err(CliError::usage_from)?,
    };
    let batch = match queries {
        Some(path) => io::read_queries(path).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?,
        None => generate_queries(a.len(), q, max_width.min(a.len()), seed).map_err(CliError::usage_from)?,
    };
    batch.check(a.len()).map_err(CliError::usage_from)?;
    Ok((a, batch))
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    let (a, batch) = load_inputs(
        &args.array,
        &args.queries,
        args.n,
        args.q,
        args.max_width,
        args.seed,
    )?;
    if a.len() > args.max_n {
        return Err(CliError::usage(format!(
            "n = {} exceeds the verification cap {} (override with --max-n)",
            a.len(),
            args.max_n
        )));
    }

    let (k1, k2) = args.structure.report_params(a.len());
    println!(
        "variant={} n={} k1={} k2={} q={} max_width={} seed={}",
        args.structure.variant.name(),
        a.len(),
        k1,
        k2,
        batch.len(),
        batch.max_width(),
        args.seed
    );

    let t = Instant::now();
    let built = Built::build(&args.structure, &a).map_err(CliError::usage_from)?;
    let build_time = t.elapsed();

    let t = Instant::now();
    let answers = built.answer_batch(&a, &batch).map_err(CliError::failure_from)?;
    let answer_time = t.elapsed();

    let t = Instant::now();
    let oracle = oracle_values(&a, &batch).map_err(CliError::failure_from)?;
    let oracle_time = t.elapsed();

    let mismatches = count_mismatches(&a, &batch, &answers, &oracle);
    println!("mismatches={}", mismatches);

    if let Some((success, fallback)) = built.try_stats(&batch).map_err(CliError::failure_from)? {
        println!("success_rate={:.6}", success);
        println!("fallback_rate={:.6}", fallback);
    }
    if let Built::Hybrid(h) = &built {
        let stats = h.stats();
        println!(
            "hybrid_counters speculative={} assisted={} quantized_tie={} out_of_range={}",
            stats.speculative_hits,
            stats.assisted_hits,
            stats.quantized_tie_declines,
            stats.out_of_range_declines
        );
    }
    if args.structure.variant == Variant::OfflineCon {
        let endpoints = offline::sort_endpoints(&batch).map_err(CliError::failure_from)?;
        let contracted = offline::contract(&a, &endpoints);
        println!("aq_cells={}", contracted.len());
    }

    println!("time_build_ms={:.3}", build_time.as_secs_f64() * 1e3);
    println!("time_answer_ms={:.3}", answer_time.as_secs_f64() * 1e3);
    println!("time_oracle_ms={:.3}", oracle_time.as_secs_f64() * 1e3);
    println!("result={}", if mismatches == 0 { "PASS" } else { "FAIL" });

    if mismatches == 0 {
        Ok(())
    } else {
        Err(CliError::failure(format!("{mismatches} mismatches")))
    }
}
