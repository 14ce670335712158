//! `offline`: run a batched pipeline over array/query files and emit the
//! answer positions.

use std::path::PathBuf;
use std::time::Instant;

use bbst_core::io;
use bbst_core::offline::{self, StageTimings};

use crate::variant::{SortArg, StructureArgs, Variant};
use crate::verify::load_inputs;
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct OfflineArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    /// Array file (raw little-endian u32); generated when omitted.
    #[arg(long)]
    pub array: Option<PathBuf>,

    /// Query file ("l r" lines or .qbin); generated when omitted.
    #[arg(long)]
    pub queries: Option<PathBuf>,

    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,

    #[arg(long, default_value_t = 10_000)]
    pub q: usize,

    #[arg(long = "max-width", default_value_t = 32_768)]
    pub max_width: usize,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Endpoint sort backend for the contracted pipeline.
    #[arg(long, value_enum, default_value_t = SortArg::Radix)]
    pub sort: SortArg,

    /// Answer output path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write answers as little-endian u64 instead of text lines.
    #[arg(long)]
    pub binary: bool,
}

pub fn run(args: &OfflineArgs) -> Result<(), CliError> {
    let variant = args.structure.variant;
    if variant != Variant::OfflineCon && variant != Variant::OfflinePlain {
        return Err(CliError::usage(format!(
            "offline supports offline-con and offline-plain, got {}",
            variant.name()
        )));
    }
    let (a, batch) = load_inputs(
        &args.array,
        &args.queries,
        args.n,
        args.q,
        args.max_width,
        args.seed,
    )?;

    let (k1, _) = args.structure.report_params(a.len());
    println!(
        "variant={} n={} q={} k={} max_width={}",
        variant.name(),
        a.len(),
        batch.len(),
        k1,
        batch.max_width()
    );

    let answers = match variant {
        Variant::OfflineCon => {
            let run = offline::answer_batch_con_detailed(
                &a,
                &batch,
                args.structure.one_level_k(),
                args.sort.into(),
            )
            .map_err(CliError::usage_from)?;
            println!("aq_cells={}", run.contracted_cells);
            print_timings(&run.timings);
            run.answers
        }
        Variant::OfflinePlain => {
            let k = args
                .structure
                .k
                .or(args.structure.k1)
                .unwrap_or_else(|| offline::default_plain_block_size(a.len()));
            let t = Instant::now();
            let answers =
                offline::answer_batch_plain(&a, &batch, Some(k)).map_err(CliError::usage_from)?;
            println!("time_total_ms={:.3}", t.elapsed().as_secs_f64() * 1e3);
            answers
        }
        _ => unreachable!(),
    };

    match &args.out {
        Some(path) => {
            io::write_answers(path, &answers, args.binary)
                .map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?;
            println!("answers_written={}", answers.len());
        }
        None => {
            println!("answers:");
            for pos in &answers {
                println!("{pos}");
            }
        }
    }
    Ok(())
}

fn print_timings(t: &StageTimings) {
    println!("time_sort_ms={:.3}", t.sort.as_secs_f64() * 1e3);
    println!("time_contract_ms={:.3}", t.contract.as_secs_f64() * 1e3);
    println!("time_build_ms={:.3}", t.build.as_secs_f64() * 1e3);
    println!("time_answer_ms={:.3}", t.answer.as_secs_f64() * 1e3);
    println!("time_total_ms={:.3}", t.total().as_secs_f64() * 1e3);
}
