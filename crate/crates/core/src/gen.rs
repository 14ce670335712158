//! Deterministic pseudo-random array and query-batch generators.
//!
//! Both generators are pure functions of their arguments. The sampling
//! scheme is frozen so that seeded outputs stay stable across releases:
//! ChaCha8 seeded via `seed_from_u64`, one `next_u32` per array element,
//! and `next_u64` reduced by modulo for index and width draws.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{InputArray, Query, QueryBatch};

/// Array of `n` values uniform over `[0, 2^32)`, deterministic in `(n, seed)`.
pub fn generate_array(n: usize, seed: u64) -> Result<InputArray> {
    if n == 0 {
        return Err(Error::InvalidCount);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<u32> = (0..n).map(|_| rng.next_u32()).collect();
    InputArray::new(values)
}

/// Batch of `q` queries over an array of length `n`.
///
/// For each query, `l` is uniform over `[0, n-1]` and the width `w` uniform
/// over `[1, max_width]`; `r = min(l + w - 1, n - 1)`, so ranges touching the
/// right edge are clamped. Deterministic in all arguments.
pub fn generate_queries(n: usize, q: usize, max_width: usize, seed: u64) -> Result<QueryBatch> {
    if n == 0 {
        return Err(Error::InvalidCount);
    }
    if max_width == 0 || max_width > n {
        return Err(Error::InvalidWidthLimit { max_width, n });
    }
    if q == 0 {
        return Err(Error::EmptyBatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let queries = (0..q)
        .map(|_| {
            let l = (rng.next_u64() % n as u64) as usize;
            let w = 1 + (rng.next_u64() % max_width as u64) as usize;
            let r = (l + w - 1).min(n - 1);
            Query::new(l, r)
        })
        .collect();
    QueryBatch::new(queries, max_width)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_generation_is_deterministic() {
        let a = generate_array(8, 1234).unwrap();
        let b = generate_array(8, 1234).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_array(8, 1235).unwrap());
    }

    #[test]
    fn array_of_length_one() {
        assert_eq!(generate_array(1, 7).unwrap().len(), 1);
        assert_eq!(generate_array(0, 7), Err(Error::InvalidCount));
    }

    #[test]
    fn array_mean_close_to_midpoint() {
        let a = generate_array(1_000_000, 99).unwrap();
        let mean = a.iter().map(|&v| v as f64).sum::<f64>() / a.len() as f64;
        let mid = 2f64.powi(31);
        assert!((mean - mid).abs() < 0.01 * mid, "mean {} too far from {}", mean, mid);
    }

    #[test]
    fn width_one_queries_are_singletons() {
        let b = generate_queries(100, 50, 1, 5).unwrap();
        assert!(b.queries().iter().all(|q| q.l == q.r));
    }

    #[test]
    fn widths_respect_limit_and_clamp() {
        let b = generate_queries(100, 1000, 100, 5).unwrap();
        for q in b.queries() {
            assert!(q.width() >= 1 && q.width() <= 100);
            assert!(q.r <= 99);
        }
    }

    #[test]
    fn query_generation_is_deterministic() {
        let a = generate_queries(1000, 100, 64, 3).unwrap();
        let b = generate_queries(1000, 100, 64, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mean_width_matches_uniform_expectation() {
        let n = 1_000_000;
        let max_width = 1 << 15;
        let b = generate_queries(n, 10_000, max_width, 11).unwrap();
        // Skip ranges ending at the array edge: those are the clamped ones.
        let widths: Vec<f64> = b
            .queries()
            .iter()
            .filter(|q| q.r != n - 1)
            .map(|q| q.width() as f64)
            .collect();
        let mean = widths.iter().sum::<f64>() / widths.len() as f64;
        let expected = (max_width as f64 + 1.0) / 2.0;
        assert!(
            (mean - expected).abs() < 0.05 * expected,
            "mean width {} vs expected {}",
            mean,
            expected
        );
    }

    #[test]
    fn rejects_bad_width_limits() {
        assert!(generate_queries(10, 5, 0, 1).is_err());
        assert!(generate_queries(10, 5, 11, 1).is_err());
    }
}
