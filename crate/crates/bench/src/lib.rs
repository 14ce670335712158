//! Shared fixtures for the criterion benchmarks.

use bbst_core::{generate_array, generate_queries, InputArray, QueryBatch};

pub const BENCH_N: usize = 1 << 20;
pub const BENCH_Q: usize = 10_000;
pub const BENCH_SEED: u64 = 0xb57;

pub fn bench_array() -> InputArray {
    generate_array(BENCH_N, BENCH_SEED).unwrap()
}

pub fn bench_batch(max_width: usize) -> QueryBatch {
    generate_queries(BENCH_N, BENCH_Q, max_width, BENCH_SEED + 1).unwrap()
}
