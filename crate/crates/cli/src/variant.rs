//! Variant selection and parameter plumbing shared by verify and bench.

use clap::ValueEnum;
use rayon::prelude::*;

use bbst_core::offline::{self, SortBackend};
use bbst_core::{
    success_rate, BbstIndex, Bbst2Index, CompactIndex, DeltaMode, FrontSpec, HybridIndex,
    QueryBatch, Result, SparseTable, SpaceReport, ValueMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    St,
    Bbst,
    Bbst2,
    Cbbst,
    Cbbst2,
    Hybrid,
    OfflineCon,
    OfflinePlain,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::St => "st",
            Variant::Bbst => "bbst",
            Variant::Bbst2 => "bbst2",
            Variant::Cbbst => "cbbst",
            Variant::Cbbst2 => "cbbst2",
            Variant::Hybrid => "hybrid",
            Variant::OfflineCon => "offline-con",
            Variant::OfflinePlain => "offline-plain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Byte,
    Bit,
}

impl From<ModeArg> for DeltaMode {
    fn from(m: ModeArg) -> DeltaMode {
        match m {
            ModeArg::Byte => DeltaMode::Byte,
            ModeArg::Bit => DeltaMode::Bit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValueModeArg {
    None,
    Exact,
    Quantized,
}

impl From<ValueModeArg> for ValueMode {
    fn from(m: ValueModeArg) -> ValueMode {
        match m {
            ValueModeArg::None => ValueMode::None,
            ValueModeArg::Exact => ValueMode::Exact,
            ValueModeArg::Quantized => ValueMode::Quantized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrontArg {
    /// Plain one-level table with stored values.
    Bbst,
    /// Compact table (optionally with a second level).
    Cbbst,
}

/// Structure parameters shared by verify, bench and space.
#[derive(clap::Args, Debug, Clone, Copy)]
pub struct StructureArgs {
    /// Variant to build.
    #[arg(long, value_enum)]
    pub variant: Variant,

    /// Block size; defaults to 512 (offline-plain: nearest power of two
    /// to sqrt(n)).
    #[arg(long)]
    pub k: Option<usize>,

    /// First-level block size for two-level variants (falls back to --k).
    #[arg(long)]
    pub k1: Option<usize>,

    /// Second-level block size; for hybrid, 0 disables the second level.
    #[arg(long)]
    pub k2: Option<usize>,

    /// Sparse-table arity (st variant only).
    #[arg(long, default_value_t = 2)]
    pub arity: usize,

    /// Delta-layer encoding for compact variants.
    #[arg(long, value_enum, default_value_t = ModeArg::Byte)]
    pub mode: ModeArg,

    /// Second-level value storage (cbbst2 and hybrid).
    #[arg(long = "value-mode", value_enum, default_value_t = ValueModeArg::None)]
    pub value_mode: ValueModeArg,

    /// Hybrid front end.
    #[arg(long, value_enum, default_value_t = FrontArg::Cbbst)]
    pub front: FrontArg,
}

impl StructureArgs {
    pub fn k1(&self) -> usize {
        self.k1.or(self.k).unwrap_or(512)
    }

    pub fn k2(&self) -> usize {
        self.k2.unwrap_or(64)
    }

    pub fn one_level_k(&self) -> usize {
        self.k.or(self.k1).unwrap_or(512)
    }

    /// Second level for the hybrid front: default (64, quantized), value
    /// mode overridable, `--k2 0` disables it.
    pub fn hybrid_second_level(&self) -> Option<(usize, ValueMode)> {
        let values = match self.value_mode {
            ValueModeArg::None => ValueMode::Quantized,
            other => other.into(),
        };
        match self.k2 {
            Some(0) => None,
            Some(k2) => Some((k2, values)),
            None => Some((64, values)),
        }
    }

    pub fn front_spec(&self) -> FrontSpec {
        match self.front {
            FrontArg::Bbst => FrontSpec::Bbst { k: self.k1() },
            FrontArg::Cbbst => FrontSpec::Compact {
                k: self.k1(),
                mode: self.mode.into(),
                second_level: self.hybrid_second_level(),
            },
        }
    }

    /// Parameters echoed in reports: `(k1 column, k2 column)`.
    pub fn report_params(&self, n: usize) -> (String, String) {
        match self.variant {
            Variant::St => (String::new(), String::new()),
            Variant::Bbst | Variant::Cbbst | Variant::OfflineCon => {
                (self.one_level_k().to_string(), String::new())
            }
            Variant::OfflinePlain => (
                self.k
                    .or(self.k1)
                    .unwrap_or_else(|| offline::default_plain_block_size(n))
                    .to_string(),
                String::new(),
            ),
            Variant::Bbst2 | Variant::Cbbst2 => (self.k1().to_string(), self.k2().to_string()),
            Variant::Hybrid => (
                self.k1().to_string(),
                self.hybrid_second_level()
                    .map(|(k2, _)| k2.to_string())
                    .unwrap_or_default(),
            ),
        }
    }
}

/// A built structure ready to answer query batches.
pub enum Built {
    St(SparseTable),
    Bbst(BbstIndex),
    Bbst2(Bbst2Index),
    Compact(CompactIndex),
    Hybrid(HybridIndex),
    OfflineCon { k: usize },
    OfflinePlain(BbstIndex),
}

impl Built {
    pub fn build(args: &StructureArgs, a: &[u32]) -> Result<Built> {
        Ok(match args.variant {
            Variant::St => Built::St(SparseTable::build(a, args.arity)?),
            Variant::Bbst => Built::Bbst(BbstIndex::build(a, args.one_level_k())?),
            Variant::Bbst2 => Built::Bbst2(Bbst2Index::build(a, args.k1(), args.k2())?),
            Variant::Cbbst => {
                Built::Compact(CompactIndex::build(a, args.one_level_k(), args.mode.into(), None)?)
            }
            Variant::Cbbst2 => Built::Compact(CompactIndex::build(
                a,
                args.k1(),
                args.mode.into(),
                Some((args.k2(), args.value_mode.into())),
            )?),
            Variant::Hybrid => {
                Built::Hybrid(HybridIndex::build_with_reference_backend(a, args.front_spec())?)
            }
            Variant::OfflineCon => Built::OfflineCon { k: args.one_level_k() },
            Variant::OfflinePlain => Built::OfflinePlain(BbstIndex::build(
                a,
                args.k
                    .or(args.k1)
                    .unwrap_or_else(|| offline::default_plain_block_size(a.len())),
            )?),
        })
    }

    pub fn answer_batch(&self, a: &[u32], batch: &QueryBatch) -> Result<Vec<usize>> {
        let queries = batch.queries();
        match self {
            Built::St(st) => queries.par_iter().map(|q| st.query(q.l, q.r)).collect(),
            Built::Bbst(idx) => queries.par_iter().map(|q| idx.query(a, *q)).collect(),
            Built::Bbst2(idx) => queries.par_iter().map(|q| idx.query(a, *q)).collect(),
            Built::Compact(idx) => queries.par_iter().map(|q| idx.query(a, *q)).collect(),
            Built::Hybrid(h) => queries.par_iter().map(|q| h.query(*q)).collect(),
            Built::OfflineCon { k } => offline::answer_batch_con(a, batch, *k),
            Built::OfflinePlain(idx) => queries.par_iter().map(|q| idx.query(a, *q)).collect(),
        }
    }

    /// `(success_rate, fallback_rate)` for variants with a try-query path.
    pub fn try_stats(&self, batch: &QueryBatch) -> Result<Option<(f64, f64)>> {
        let rate = match self {
            Built::Bbst(idx) => Some(success_rate(idx, batch)?),
            Built::Bbst2(idx) => Some(success_rate(idx, batch)?),
            Built::Compact(idx) => Some(success_rate(idx, batch)?),
            Built::Hybrid(h) => Some(h.front_success_rate(batch)?),
            _ => None,
        };
        Ok(rate.map(|s| (s, 1.0 - s)))
    }
}

/// Formula-level space report for the configured variant.
///
/// Offline variants are batch-dependent: the table is built over at most
/// `2q - 1` contracted cells, and the cells themselves (value plus original
/// position) are counted as second-level payload.
pub fn space_report(args: &StructureArgs, n: u64, q: Option<u64>) -> SpaceReport {
    match args.variant {
        Variant::St => SpaceReport {
            n,
            backend_bits: 0,
            sparse_table_bits: SparseTable::space_bits(n, args.arity as u64, 64),
            second_level_bits: 0,
        },
        Variant::Bbst => BbstIndex::space_bits(n, args.one_level_k() as u64),
        Variant::Bbst2 => Bbst2Index::space_bits(n, args.k1() as u64, args.k2() as u64),
        Variant::Cbbst => CompactIndex::space_bits(n, args.one_level_k() as u64, args.mode.into(), None),
        Variant::Cbbst2 => CompactIndex::space_bits(
            n,
            args.k1() as u64,
            args.mode.into(),
            Some((args.k2() as u64, args.value_mode.into())),
        ),
        Variant::Hybrid => {
            let second = args.hybrid_second_level();
            let front = match args.front {
                FrontArg::Bbst => BbstIndex::space_bits(n, args.k1() as u64),
                FrontArg::Cbbst => CompactIndex::space_bits(
                    n,
                    args.k1() as u64,
                    args.mode.into(),
                    second.map(|(k2, vm)| (k2 as u64, vm)),
                ),
            };
            let second_level_bits = match (args.front, second) {
                (FrontArg::Cbbst, _) => front.second_level_bits,
                (FrontArg::Bbst, Some((k2, vm))) => {
                    let value_bits = match vm {
                        ValueMode::None => 0,
                        ValueMode::Exact => 32,
                        ValueMode::Quantized => 8,
                    };
                    n.div_ceil(k2 as u64) * (8 + value_bits)
                }
                (FrontArg::Bbst, None) => 0,
            };
            SpaceReport {
                n,
                backend_bits: SparseTable::space_bits(n, 2, 64),
                sparse_table_bits: front.sparse_table_bits,
                second_level_bits,
            }
        }
        Variant::OfflineCon => {
            let cells = q.map_or(0, |q| 2 * q - 1);
            let table = if cells == 0 {
                0
            } else {
                BbstIndex::space_bits(cells, (args.one_level_k() as u64).min(cells)).sparse_table_bits
            };
            SpaceReport {
                n,
                backend_bits: 32 * n,
                sparse_table_bits: table,
                second_level_bits: cells * 64,
            }
        }
        Variant::OfflinePlain => {
            let k = args
                .k
                .or(args.k1)
                .map(|k| k as u64)
                .unwrap_or_else(|| offline::default_plain_block_size(n as usize) as u64);
            BbstIndex::space_bits(n, k)
        }
    }
}

/// Runs `f` on a rayon pool with `threads` workers (0 = default pool).
pub fn with_threads<T>(threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    if threads == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("building thread pool")
            .install(f)
    }
}

/// Endpoint-sort backend flag for the offline command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SortArg {
    Radix,
    Comparison,
}

impl From<SortArg> for SortBackend {
    fn from(s: SortArg) -> SortBackend {
        match s {
            SortArg::Radix => SortBackend::Radix,
            SortArg::Comparison => SortBackend::Comparison,
        }
    }
}

/// Oracle minima for a whole batch, computed by parallel linear scans.
pub fn oracle_values(a: &[u32], batch: &QueryBatch) -> Result<Vec<u32>> {
    batch
        .queries()
        .par_iter()
        .map(|q| bbst_core::rmq_scan(a, *q).map(|pos| a[pos]))
        .collect()
}

pub fn count_mismatches(a: &[u32], batch: &QueryBatch, answers: &[usize], oracle: &[u32]) -> usize {
    batch
        .queries()
        .par_iter()
        .zip(answers)
        .zip(oracle)
        .filter(|((q, &pos), &want)| pos < q.l || pos > q.r || a[pos] != want)
        .count()
}

/// Parses a width sweep: comma-separated integers or `lo..hix<factor>`
/// geometric ranges (e.g. `64..16777216x4`).
pub fn parse_widths(items: &[String]) -> std::result::Result<Vec<usize>, String> {
    let mut widths = Vec::new();
    for item in items {
        if let Some((range, factor)) = item.split_once('x') {
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| format!("bad width range '{item}'"))?;
            let lo: usize = lo.parse().map_err(|e| format!("bad width '{lo}': {e}"))?;
            let hi: usize = hi.parse().map_err(|e| format!("bad width '{hi}': {e}"))?;
            let factor: usize = factor.parse().map_err(|e| format!("bad factor in '{item}': {e}"))?;
            if factor < 2 || lo == 0 {
                return Err(format!("bad width range '{item}'"));
            }
            let mut w = lo;
            while w <= hi {
                widths.push(w);
                match w.checked_mul(factor) {
                    Some(next) => w = next,
                    None => break,
                }
            }
        } else {
            widths.push(item.parse().map_err(|e| format!("bad width '{item}': {e}"))?);
        }
    }
    if widths.is_empty() {
        return Err("empty width sweep".into());
    }
    Ok(widths)
}
