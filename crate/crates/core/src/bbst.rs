//! One-level block-based sparse table.
//!
//! The array is split into blocks of `k` elements and a sparse table (arity
//! 2) is built over the per-block minima, each entry storing an absolute
//! position in the source array together with the value there. A query is
//! answered speculatively from the smallest span of blocks fully including
//! it; only when that minimum falls outside the query does an `O(k)`
//! fallback touch the array.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oracle::scan_min;
use crate::space::{layer_count_for, SpaceReport};
use crate::sparse_table::{Entry, Layers};
use crate::types::{check_range, Query};

#[derive(Debug, Clone)]
pub struct BbstIndex {
    n: usize,
    k: usize,
    layers: Layers,
}

/// Leftmost minima of consecutive `k`-blocks as absolute-position entries.
pub(crate) fn block_minima(a: &[u32], k: usize) -> Vec<Entry> {
    let blocks = a.len().div_ceil(k);
    // Blocks are independent; chunked scan keeps the result identical to a
    // serial pass.
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * k;
            let hi = ((b + 1) * k - 1).min(a.len() - 1);
            let (pos, value) = scan_min(a, lo, hi);
            Entry { pos: pos as u32, value }
        })
        .collect()
}

impl BbstIndex {
    pub fn build(a: &[u32], k: usize) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptyArray);
        }
        if a.len() > u32::MAX as usize {
            return Err(Error::ArrayTooLarge { n: a.len() });
        }
        if k == 0 || k > a.len() {
            return Err(Error::InvalidBlockSize { k, n: a.len() });
        }
        Ok(Self::from_block_minima(a.len(), k, block_minima(a, k)))
    }

    pub(crate) fn from_block_minima(n: usize, k: usize, base: Vec<Entry>) -> Self {
        Self {
            n,
            k,
            layers: Layers::build(base, 2),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        self.layers.row_len
    }

    pub fn layer_count(&self) -> usize {
        self.layers.count
    }

    /// Stored `(position, value)` covering blocks `i ..= i + 2^j - 1`.
    pub fn entry(&self, i: usize, j: usize) -> Result<(usize, u32)> {
        if j >= self.layers.count {
            return Err(Error::InvalidLayer { layer: j, layers: self.layers.count });
        }
        if i >= self.layers.row_len {
            return Err(Error::InvalidCell { cell: i, cells: self.layers.row_len });
        }
        let e = self.layers.entry(i, j);
        Ok((e.pos as usize, e.value))
    }

    pub(crate) fn block_range_min(&self, b1: usize, b2: usize) -> Entry {
        self.layers.range_min(b1, b2)
    }

    /// Speculative step only: the minimum over the smallest block span fully
    /// including the query, without touching the array. `None` when that
    /// minimum lies outside `[l, r]`.
    pub fn try_query(&self, query: Query) -> Result<Option<usize>> {
        check_range(query.l, query.r, self.n)?;
        let m = self.block_range_min(query.l / self.k, query.r / self.k).pos as usize;
        Ok((query.l <= m && m <= query.r).then_some(m))
    }

    /// Full query: speculative step, then the bounded fallback scan.
    pub fn query(&self, a: &[u32], query: Query) -> Result<usize> {
        match self.try_query(query)? {
            Some(pos) => Ok(pos),
            None => Ok(self.fallback(a, query.l, query.r)),
        }
    }

    fn fallback(&self, a: &[u32], l: usize, r: usize) -> usize {
        let (bl, br) = (l / self.k, r / self.k);
        if br - bl < 2 {
            // Interior span is empty; scan the range directly.
            return scan_min(a, l, r).0;
        }
        // Left partial block, interior blocks, right partial block: consider
        // the candidates in position order so the leftmost wins ties.
        let (mut pos, mut best) = scan_min(a, l, (bl + 1) * self.k - 1);
        let interior = self.block_range_min(bl + 1, br - 1);
        if interior.value < best {
            pos = interior.pos as usize;
            best = interior.value;
        }
        let (rp, rv) = scan_min(a, br * self.k, r);
        if rv < best {
            pos = rp;
        }
        pos
    }

    /// Formula-level footprint; the input array is counted as backend data.
    pub fn space_bits(n: u64, k: u64) -> SpaceReport {
        let blocks = n.div_ceil(k);
        let layers = layer_count_for(blocks);
        SpaceReport {
            n,
            backend_bits: 32 * n,
            sparse_table_bits: layers * blocks * 64,
            second_level_bits: 0,
        }
    }

    /// Footprint of the built structure, counting stored entries.
    pub fn space_report(&self) -> SpaceReport {
        SpaceReport {
            n: self.n as u64,
            backend_bits: 32 * self.n as u64,
            sparse_table_bits: self.layers.stored_bits(),
            second_level_bits: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::rmq_scan;

    const FIX: [u32; 16] = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3];

    #[test]
    fn layer_zero_holds_block_minima() {
        let idx = BbstIndex::build(&FIX, 4).unwrap();
        let values: Vec<u32> = (0..4).map(|b| idx.entry(b, 0).unwrap().1).collect();
        assert_eq!(values, [1, 2, 3, 3]);
        assert_eq!(idx.entry(1, 1).unwrap(), (6, 2)); // blocks 1..2, min of A[4..11]
    }

    #[test]
    fn whole_array_block() {
        let idx = BbstIndex::build(&FIX, FIX.len()).unwrap();
        assert_eq!(idx.block_count(), 1);
        assert_eq!(idx.layer_count(), 1);
        assert_eq!(idx.entry(0, 0).unwrap(), (1, 1));
    }

    #[test]
    fn speculative_hit() {
        let idx = BbstIndex::build(&FIX, 4).unwrap();
        assert_eq!(idx.query(&FIX, Query::new(4, 11)).unwrap(), 6);
        assert_eq!(idx.try_query(Query::new(4, 11)).unwrap(), Some(6));
    }

    #[test]
    fn fallback_scan() {
        let idx = BbstIndex::build(&FIX, 4).unwrap();
        // Speculative minimum (position 6) lies outside [7, 10].
        assert_eq!(idx.try_query(Query::new(7, 10)).unwrap(), None);
        assert_eq!(idx.query(&FIX, Query::new(7, 10)).unwrap(), 9);
    }

    #[test]
    fn singleton_query() {
        let idx = BbstIndex::build(&FIX, 4).unwrap();
        for l in 0..FIX.len() {
            assert_eq!(idx.query(&FIX, Query::new(l, l)).unwrap(), l);
        }
    }

    #[test]
    fn global_range_always_succeeds() {
        for k in [1, 3, 4, 16] {
            let idx = BbstIndex::build(&FIX, k).unwrap();
            assert!(idx.try_query(Query::new(0, FIX.len() - 1)).unwrap().is_some());
        }
    }

    #[test]
    fn try_and_full_answers_agree_in_value() {
        let a = crate::gen::generate_array(10_000, 21).unwrap();
        let batch = crate::gen::generate_queries(a.len(), 2000, 500, 22).unwrap();
        let idx = BbstIndex::build(&a, 100).unwrap();
        for q in batch.queries() {
            let full = idx.query(&a, *q).unwrap();
            if let Some(spec) = idx.try_query(*q).unwrap() {
                assert_eq!(a[spec], a[full]);
            }
            let want = rmq_scan(&a, *q).unwrap();
            assert_eq!(a[full], a[want]);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BbstIndex::build(&FIX, 0).is_err());
        assert!(BbstIndex::build(&FIX, 17).is_err());
        assert!(BbstIndex::build(&[], 1).is_err());
        let idx = BbstIndex::build(&FIX, 4).unwrap();
        assert!(idx.query(&FIX, Query::new(3, 16)).is_err());
    }

    #[test]
    fn space_formula_matches_tables() {
        let r = BbstIndex::space_bits(1 << 30, 512);
        assert!((r.sparse_table_bits_per_element() - 2.625).abs() < 1e-9);
        assert!((r.bits_per_element() - 34.625).abs() < 1e-9);
        let r = BbstIndex::space_bits(1 << 30, 4096);
        assert!((r.sparse_table_bits_per_element() - 0.28125).abs() < 1e-9);
    }

    #[test]
    fn stored_entries_match_formula() {
        for (n, k) in [(16usize, 4usize), (1000, 7), (4097, 512)] {
            let a = crate::gen::generate_array(n, 5).unwrap();
            let idx = BbstIndex::build(&a, k).unwrap();
            assert_eq!(
                idx.space_report().sparse_table_bits,
                BbstIndex::space_bits(n as u64, k as u64).sparse_table_bits
            );
        }
    }
}
