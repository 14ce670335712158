//! Block-based sparse table structures for range minimum queries.
//!
//! Given an array `A` of unsigned 32-bit values, a range minimum query
//! `[l, r]` (0-based, inclusive) asks for a position of a minimum element
//! of `A[l..=r]`. This crate implements a family of block-decomposed
//! sparse-table indexes trading space for average query time:
//!
//! * [`SparseTable`]: the classic layered table, generalized to arity
//!   `l >= 2`; constant worst-case queries, `O(n log n)` words.
//! * [`BbstIndex`]: sparse table over `k`-element block minima with
//!   speculative covering-span reads and a bounded fallback scan.
//! * [`Bbst2Index`]: adds byte-sized per-`k2`-block minimum offsets that
//!   accelerate the fallback to `O(k1/k2 + k2)`.
//! * [`CompactIndex`]: delta-encodes the block table (full entries every
//!   9th layer, one byte or one bit elsewhere) and optionally quantizes
//!   second-level minima values to 8-bit monotone codes.
//! * [`HybridIndex`]: pairs a try-query front end with any constant-time
//!   [`RmqBackend`] so queries never touch the input array.
//! * [`offline`]: batched queries via endpoint sorting and array
//!   contraction, or the build-then-answer mode without contraction.
//!
//! Correctness is defined at the value level (ties may resolve to any
//! position holding the minimum); [`rmq_scan`] is the brute-force oracle
//! everything is validated against. All indexes are immutable after
//! construction and safe to query concurrently.

mod bbst;
mod bbst2;
mod compact;
mod error;
mod gen;
mod hybrid;
pub mod io;
mod oracle;
pub mod offline;
mod space;
mod sparse_table;
mod types;

pub use bbst::BbstIndex;
pub use bbst2::Bbst2Index;
pub use compact::{quantize, CompactIndex, DeclineReason, DeltaMode, TryOutcome, ValueMode};
pub use error::{Error, Result};
pub use gen::{generate_array, generate_queries};
pub use hybrid::{success_rate, FrontSpec, HybridFront, HybridIndex, HybridStats, RmqBackend, TryRmq};
pub use oracle::{rmq_scan, validate_answer};
pub use space::SpaceReport;
pub use sparse_table::SparseTable;
pub use types::{InputArray, Query, QueryBatch};
