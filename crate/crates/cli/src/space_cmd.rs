//! `space`: component-wise space accounting, pure arithmetic.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::variant::{space_report, StructureArgs, Variant};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct SpaceArgs {
    #[command(flatten)]
    pub structure: StructureArgs,

    /// Element count; no structure is allocated, so any n works.
    #[arg(long, default_value_t = 1 << 30)]
    pub n: u64,

    /// Batch size assumed for offline variants.
    #[arg(long, default_value_t = 100_000)]
    pub q: u64,

    /// Optional CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const CSV_HEADER: &str = "variant,n,k1,k2,mode,value_mode,backend_bits_per_element,\
sparse_table_bits_per_element,second_level_bits_per_element,total_bits_per_element";

pub fn run(args: &SpaceArgs) -> Result<(), CliError> {
    let report = space_report(&args.structure, args.n, Some(args.q));
    let (k1, k2) = args.structure.report_params(args.n as usize);
    let mode = match args.structure.variant {
        Variant::Cbbst | Variant::Cbbst2 | Variant::Hybrid => {
            format!("{:?}", args.structure.mode).to_lowercase()
        }
        _ => String::new(),
    };
    let value_mode = match args.structure.variant {
        Variant::Cbbst2 => format!("{:?}", args.structure.value_mode).to_lowercase(),
        Variant::Hybrid => args
            .structure
            .hybrid_second_level()
            .map(|(_, vm)| format!("{vm:?}").to_lowercase())
            .unwrap_or_default(),
        _ => String::new(),
    };

    println!(
        "variant={} n={} k1={} k2={} mode={} value_mode={}",
        args.structure.variant.name(),
        args.n,
        k1,
        k2,
        mode,
        value_mode
    );
    println!("backend_bits={}", report.backend_bits);
    println!("sparse_table_bits={}", report.sparse_table_bits);
    println!("second_level_bits={}", report.second_level_bits);
    println!("total_bits={}", report.total_bits());
    println!("backend_bits_per_element={:.6}", report.backend_bits_per_element());
    println!(
        "sparse_table_bits_per_element={:.6}",
        report.sparse_table_bits_per_element()
    );
    println!(
        "second_level_bits_per_element={:.6}",
        report.second_level_bits_per_element()
    );
    println!("total_bits_per_element={:.6}", report.bits_per_element());

    if let Some(path) = &args.out {
        let mut csv = String::new();
        writeln!(csv, "{CSV_HEADER}").unwrap();
        writeln!(
            csv,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            args.structure.variant.name(),
            args.n,
            k1,
            k2,
            mode,
            value_mode,
            report.backend_bits_per_element(),
            report.sparse_table_bits_per_element(),
            report.second_level_bits_per_element(),
            report.bits_per_element()
        )
        .unwrap();
        std::fs::write(path, csv).map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
