//! `bench`: median-of-repetitions timing sweep with CSV output.

use std::fmt::Write as _;
use std::hint::black_box;
use std::path::PathBuf;
use std::time::Instant;

use bbst_core::offline;
use bbst_core::{generate_array, generate_queries};

use crate::variant::{parse_widths, space_report, Built, StructureArgs, Variant};
use crate::CliError;

pub const CSV_HEADER: &str =
    "variant,n,k1,k2,max_width,q,median_ns_per_query,success_rate,fallback_rate,bits_per_element";

#[derive(clap::Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,

    #[arg(long, default_value_t = 100_000)]
    pub q: usize,

    /// Width sweep: comma-separated values and/or `lo..hix<factor>` ranges.
    #[arg(long = "max-width", value_delimiter = ',', default_value = "65536")]
    pub max_width: Vec<String>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Repetitions per measurement; must be odd so the median is a sample.
    #[arg(long, default_value_t = 7)]
    pub reps: usize,

    /// CSV output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    if args.reps == 0 || args.reps % 2 == 0 {
        return Err(CliError::usage(format!(
            "--reps must be odd and at least 1, got {}",
            args.reps
        )));
    }
    let widths = parse_widths(&args.max_width).map_err(CliError::usage)?;
    let a = generate_array(args.n, args.seed).map_err(CliError::usage_from)?;

    let mut csv = String::new();
    writeln!(csv, "{CSV_HEADER}").unwrap();

    for &width in &widths {
        let width = width.min(a.len()).max(1);
        let batch =
            generate_queries(a.len(), args.q, width, args.seed).map_err(CliError::usage_from)?;

        let built = Built::build(&args.structure, &a).map_err(CliError::usage_from)?;
        let mut times = Vec::with_capacity(args.reps);
        for _ in 0..args.reps {
            let t = Instant::now();
            let answers = built.answer_batch(&a, &batch).map_err(CliError::failure_from)?;
            black_box(answers.last().copied());
            times.push(t.elapsed());
        }
        times.sort_unstable();
        let median_ns = times[times.len() / 2].as_nanos() as f64 / batch.len() as f64;

        let stats = built.try_stats(&batch).map_err(CliError::failure_from)?;
        let (success, fallback) = match stats {
            Some((s, f)) => (format!("{s:.6}"), format!("{f:.6}")),
            None => (String::new(), String::new()),
        };
        let bits_per_element = bench_bits_per_element(args, &a, &batch)?;
        let (k1, k2) = args.structure.report_params(a.len());
        writeln!(
            csv,
            "{},{},{},{},{},{},{:.1},{},{},{:.6}",
            args.structure.variant.name(),
            a.len(),
            k1,
            k2,
            width,
            batch.len(),
            median_ns,
            success,
            fallback,
            bits_per_element
        )
        .unwrap();
    }

    match &args.out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

/// Bits per element for the CSV row. Offline contraction depends on the
/// actual batch, so it is measured from a pipeline run.
fn bench_bits_per_element(
    args: &BenchArgs,
    a: &[u32],
    batch: &bbst_core::QueryBatch,
) -> Result<f64, CliError> {
    if args.structure.variant == Variant::OfflineCon {
        let endpoints = offline::sort_endpoints(batch).map_err(CliError::failure_from)?;
        let contracted = offline::contract(a, &endpoints);
        let cells = contracted.len() as u64;
        let table = if cells == 0 {
            0
        } else {
            bbst_core::BbstIndex::space_bits(
                cells,
                (args.structure.one_level_k() as u64).min(cells),
            )
            .sparse_table_bits
        };
        // Input array + contracted cells (value and original position).
        return Ok((32 * a.len() as u64 + cells * 64 + table) as f64 / a.len() as f64);
    }
    Ok(space_report(&args.structure, a.len() as u64, Some(batch.len() as u64)).bits_per_element())
}
