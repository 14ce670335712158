//! Domain types: the queried array, inclusive index ranges and query batches.
//!
//! All ranges in this crate are 0-based and inclusive on both ends:
//! `[l, r]` with `0 <= l <= r < n`.

use std::ops::Deref;

use crate::error::{Error, Result};

/// Owned sequence of unsigned 32-bit values under query.
///
/// Guaranteed non-empty and short enough that every position fits in 32 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputArray {
    values: Vec<u32>,
}

impl InputArray {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyArray);
        }
        if values.len() > u32::MAX as usize {
            return Err(Error::ArrayTooLarge { n: values.len() });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.values
    }
}

impl Deref for InputArray {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.values
    }
}

/// Inclusive index range `[l, r]`.
///
/// Validity against a concrete array length is checked by the operation
/// receiving the query, so a `Query` value itself is just a pair of indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Query {
    pub l: usize,
    pub r: usize,
}

impl Query {
    pub fn new(l: usize, r: usize) -> Self {
        Self { l, r }
    }

    /// Number of elements covered, `r - l + 1`.
    pub fn width(&self) -> usize {
        self.r - self.l + 1
    }

    pub fn check(&self, n: usize) -> Result<()> {
        check_range(self.l, self.r, n)
    }
}

pub(crate) fn check_range(l: usize, r: usize, n: usize) -> Result<()> {
    if l > r || r >= n {
        Err(Error::InvalidRange { l, r, n })
    } else {
        Ok(())
    }
}

/// A batch of queries plus the width limit used when generating it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryBatch {
    queries: Vec<Query>,
    max_width: usize,
}

impl QueryBatch {
    pub fn new(queries: Vec<Query>, max_width: usize) -> Result<Self> {
        if queries.is_empty() {
            return Err(Error::EmptyBatch);
        }
        Ok(Self { queries, max_width })
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    /// Number of queries, the batch parameter `q`.
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn max_width(&self) -> usize {
        self.max_width
    }

    /// Mean of `r - l + 1` over the batch.
    pub fn mean_width(&self) -> f64 {
        let total: u64 = self.queries.iter().map(|q| q.width() as u64).sum();
        total as f64 / self.queries.len() as f64
    }

    /// Checks every query against an array of length `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        for q in &self.queries {
            q.check(n)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_array_rejects_empty() {
        assert_eq!(InputArray::new(vec![]), Err(Error::EmptyArray));
    }

    #[test]
    fn query_width_and_check() {
        let q = Query::new(2, 5);
        assert_eq!(q.width(), 4);
        assert!(q.check(6).is_ok());
        assert_eq!(q.check(5), Err(Error::InvalidRange { l: 2, r: 5, n: 5 }));
        assert!(Query::new(3, 2).check(10).is_err());
    }

    #[test]
    fn batch_statistics() {
        let b = QueryBatch::new(vec![Query::new(0, 0), Query::new(1, 4)], 8).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.max_width(), 8);
        assert!((b.mean_width() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn empty_batch_rejected() {
        assert_eq!(QueryBatch::new(vec![], 1), Err(Error::EmptyBatch));
    }
}
