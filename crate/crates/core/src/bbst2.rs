//! Two-level block-based sparse table.
//!
//! On top of the `k1`-block sparse table, one byte per `k2`-block records
//! the offset of that block's minimum (`k2` divides `k1`, `k2 <= 256`).
//! The fallback walk then jumps over fully covered `k2`-blocks via their
//! stored offsets and scans raw cells only in the at most two partial
//! blocks per boundary region, for `O(k1/k2 + k2)` worst-case work.

use rayon::prelude::*;

use crate::bbst::BbstIndex;
use crate::error::{Error, Result};
use crate::space::SpaceReport;
use crate::sparse_table::Entry;
use crate::types::{check_range, Query};

#[derive(Debug, Clone)]
pub struct Bbst2Index {
    top: BbstIndex,
    k2: usize,
    offsets: Vec<u8>,
}

pub(crate) fn check_second_level(k1: usize, k2: usize) -> Result<()> {
    if k2 == 0 || k2 > 256 || k1 % k2 != 0 {
        Err(Error::InvalidSecondLevel { k1, k2 })
    } else {
        Ok(())
    }
}

/// Per-`k2`-block leftmost minima: `(offset, absolute entry)` pairs.
pub(crate) fn second_level_minima(a: &[u32], k2: usize) -> (Vec<u8>, Vec<Entry>) {
    let blocks = a.len().div_ceil(k2);
    let entries: Vec<Entry> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * k2;
            let hi = ((b + 1) * k2 - 1).min(a.len() - 1);
            let (pos, value) = crate::oracle::scan_min(a, lo, hi);
            Entry { pos: pos as u32, value }
        })
        .collect();
    let offsets = entries
        .iter()
        .enumerate()
        .map(|(b, e)| (e.pos as usize - b * k2) as u8)
        .collect();
    (offsets, entries)
}

/// Folds `k2`-block entries into `k1`-block minima (`ratio = k1 / k2`).
pub(crate) fn fold_to_top_blocks(sub: &[Entry], ratio: usize) -> Vec<Entry> {
    sub.chunks(ratio)
        .map(|chunk| chunk.iter().copied().reduce(|l, r| l.better(r)).unwrap())
        .collect()
}

impl Bbst2Index {
    pub fn build(a: &[u32], k1: usize, k2: usize) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptyArray);
        }
        if a.len() > u32::MAX as usize {
            return Err(Error::ArrayTooLarge { n: a.len() });
        }
        if k1 == 0 || k1 > a.len() {
            return Err(Error::InvalidBlockSize { k: k1, n: a.len() });
        }
        check_second_level(k1, k2)?;
        let (offsets, entries) = second_level_minima(a, k2);
        let base = fold_to_top_blocks(&entries, k1 / k2);
        Ok(Self {
            top: BbstIndex::from_block_minima(a.len(), k1, base),
            k2,
            offsets,
        })
    }

    /// `k1 = sqrt(n log n)`, `k2 = sqrt(n / log n)`, each rounded to the
    /// nearest power of two, with `k2 <= 256` and `k2 | k1` enforced.
    pub fn auto_params(n: usize) -> (usize, usize) {
        fn nearest_pow2(x: f64) -> usize {
            if x <= 1.0 {
                return 1;
            }
            1usize << (x.log2().round() as u32).min(62)
        }
        let nf = n as f64;
        let lg = nf.log2().max(1.0);
        let mut k1 = nearest_pow2((nf * lg).sqrt());
        let mut k2 = nearest_pow2((nf / lg).sqrt()).min(256);
        let max_k1 = 1usize << (usize::BITS - 1 - n.leading_zeros());
        k1 = k1.min(max_k1);
        k2 = k2.min(k1);
        (k1, k2)
    }

    pub fn n(&self) -> usize {
        self.top.n()
    }

    pub fn k1(&self) -> usize {
        self.top.k()
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    /// One offset per `k2`-block: position of the block minimum relative to
    /// the block start.
    pub fn offsets(&self) -> &[u8] {
        &self.offsets
    }

    pub fn top(&self) -> &BbstIndex {
        &self.top
    }

    /// Speculative step over the `k1`-block table; never touches the array.
    pub fn try_query(&self, query: Query) -> Result<Option<usize>> {
        self.top.try_query(query)
    }

    pub fn query(&self, a: &[u32], query: Query) -> Result<usize> {
        self.query_counted(a, query).map(|(pos, _)| pos)
    }

    /// Like [`query`](Self::query) but also reports how many stored offsets
    /// and raw cells the fallback touched (0 on a speculative hit).
    pub fn query_counted(&self, a: &[u32], query: Query) -> Result<(usize, usize)> {
        check_range(query.l, query.r, self.top.n())?;
        if let Some(pos) = self.top.try_query(query)? {
            return Ok((pos, 0));
        }
        let k1 = self.top.k();
        let (l, r) = (query.l, query.r);
        let (bl, br) = (l / k1, r / k1);
        if br - bl < 2 {
            let (pos, _, touched) = self.scan_region(a, l, r);
            return Ok((pos, touched));
        }
        let (mut pos, mut best, mut touched) = self.scan_region(a, l, (bl + 1) * k1 - 1);
        let interior = self.top.block_range_min(bl + 1, br - 1);
        if interior.value < best {
            pos = interior.pos as usize;
            best = interior.value;
        }
        let (rp, rv, rt) = self.scan_region(a, br * k1, r);
        touched += rt;
        if rv < best {
            pos = rp;
        }
        Ok((pos, touched))
    }

    /// Minimum of `a[x..=y]` walking `k2` sub-blocks left to right: fully
    /// covered blocks contribute through their stored offset, partial ones
    /// are scanned raw. Returns `(pos, value, touches)`.
    fn scan_region(&self, a: &[u32], x: usize, y: usize) -> (usize, u32, usize) {
        let k2 = self.k2;
        let mut pos = x;
        let mut best = u32::MAX;
        let mut touched = 0usize;
        let mut cur = x;
        while cur <= y {
            let block = cur / k2;
            let start = block * k2;
            let end = ((block + 1) * k2 - 1).min(a.len() - 1);
            if cur == start && end <= y {
                let p = start + self.offsets[block] as usize;
                touched += 1;
                let v = a[p];
                if v < best {
                    best = v;
                    pos = p;
                }
            } else {
                let stop = end.min(y);
                for (i, &v) in a.iter().enumerate().take(stop + 1).skip(cur) {
                    touched += 1;
                    if v < best {
                        best = v;
                        pos = i;
                    }
                }
            }
            cur = end + 1;
        }
        (pos, best, touched)
    }

    /// Formula-level footprint: the `k1` table plus one byte per `k2`-block.
    pub fn space_bits(n: u64, k1: u64, k2: u64) -> SpaceReport {
        let top = BbstIndex::space_bits(n, k1);
        SpaceReport {
            second_level_bits: n.div_ceil(k2) * 8,
            ..top
        }
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport {
            second_level_bits: self.offsets.len() as u64 * 8,
            ..self.top.space_report()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_array, generate_queries};
    use crate::oracle::rmq_scan;

    const FIX: [u32; 16] = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3];

    #[test]
    fn second_level_offsets() {
        let idx = Bbst2Index::build(&FIX, 8, 4).unwrap();
        assert_eq!(idx.offsets(), [1, 2, 1, 3]);
    }

    #[test]
    fn equal_block_sizes_duplicate_layer_zero() {
        let idx = Bbst2Index::build(&FIX, 4, 4).unwrap();
        for b in 0..4 {
            let (pos, value) = idx.top().entry(b, 0).unwrap();
            assert_eq!(pos, b * 4 + idx.offsets()[b] as usize);
            assert_eq!(FIX[pos], value);
        }
    }

    #[test]
    fn default_parameter_pairs_accepted() {
        let a = generate_array(10_000, 1).unwrap();
        assert!(Bbst2Index::build(&a, 512, 64).is_ok());
        assert!(Bbst2Index::build(&a, 4096, 256).is_ok());
    }

    #[test]
    fn fallback_uses_second_level() {
        let idx = Bbst2Index::build(&FIX, 8, 4).unwrap();
        assert_eq!(idx.try_query(Query::new(7, 10)).unwrap(), None);
        assert_eq!(idx.query(&FIX, Query::new(7, 10)).unwrap(), 9);
    }

    #[test]
    fn speculative_path_matches_one_level() {
        let a = generate_array(50_000, 3).unwrap();
        let one = BbstIndex::build(&a, 512).unwrap();
        let two = Bbst2Index::build(&a, 512, 64).unwrap();
        let batch = generate_queries(a.len(), 5000, 20_000, 4).unwrap();
        for q in batch.queries() {
            assert_eq!(one.try_query(*q).unwrap(), two.try_query(*q).unwrap());
        }
    }

    #[test]
    fn width_one_queries() {
        let idx = Bbst2Index::build(&FIX, 8, 4).unwrap();
        for l in 0..FIX.len() {
            assert_eq!(idx.query(&FIX, Query::new(l, l)).unwrap(), l);
        }
    }

    #[test]
    fn global_range_succeeds_without_array() {
        let idx = Bbst2Index::build(&FIX, 8, 4).unwrap();
        assert!(idx.try_query(Query::new(0, 15)).unwrap().is_some());
    }

    #[test]
    fn values_match_oracle_and_one_level() {
        let a = generate_array(30_000, 17).unwrap();
        let batch = generate_queries(a.len(), 4000, 3000, 18).unwrap();
        for (k1, k2) in [(8, 4), (64, 16), (512, 64)] {
            let one = BbstIndex::build(&a, k1).unwrap();
            let two = Bbst2Index::build(&a, k1, k2).unwrap();
            for q in batch.queries() {
                let got = two.query(&a, *q).unwrap();
                let want = rmq_scan(&a, *q).unwrap();
                assert_eq!(a[got], a[want]);
                assert_eq!(a[got], a[one.query(&a, *q).unwrap()]);
            }
        }
    }

    #[test]
    fn fallback_touch_budget() {
        let a = generate_array(100_000, 9).unwrap();
        for (k1, k2) in [(64, 16), (512, 64), (4096, 256)] {
            let idx = Bbst2Index::build(&a, k1, k2).unwrap();
            let batch = generate_queries(a.len(), 3000, 3 * k1, 10).unwrap();
            let budget = 2 * (k1 / k2 + k2);
            for q in batch.queries() {
                let (_, touched) = idx.query_counted(&a, *q).unwrap();
                assert!(touched <= budget, "touched {} > budget {}", touched, budget);
            }
        }
    }

    #[test]
    fn rejects_bad_second_level() {
        assert!(Bbst2Index::build(&FIX, 8, 3).is_err()); // 3 does not divide 8
        assert!(Bbst2Index::build(&FIX, 8, 0).is_err());
        let a = generate_array(100_000, 1).unwrap();
        assert!(Bbst2Index::build(&a, 1024, 512).is_err()); // k2 > 256
        assert!(Bbst2Index::build(&FIX, 32, 4).is_err()); // k1 > n
    }

    #[test]
    fn space_formula_matches_tables() {
        let r = Bbst2Index::space_bits(1 << 30, 512, 64);
        assert!((r.sparse_table_bits_per_element() - 2.625).abs() < 1e-9);
        assert!((r.second_level_bits_per_element() - 0.125).abs() < 1e-9);
        let r = Bbst2Index::space_bits(1 << 30, 4096, 256);
        assert!((r.second_level_bits_per_element() - 0.03125).abs() < 1e-9);
    }

    #[test]
    fn stored_bits_match_formula() {
        let a = generate_array(10_001, 2).unwrap();
        let idx = Bbst2Index::build(&a, 512, 64).unwrap();
        let formula = Bbst2Index::space_bits(10_001, 512, 64);
        let actual = idx.space_report();
        assert_eq!(actual.sparse_table_bits, formula.sparse_table_bits);
        assert_eq!(actual.second_level_bits, formula.second_level_bits);
    }

    #[test]
    fn auto_params_are_sane() {
        for n in [1usize, 2, 100, 1 << 20, 10_000_000, 1 << 30] {
            let (k1, k2) = Bbst2Index::auto_params(n);
            assert!(k1 >= 1 && k1 <= n, "k1 {} for n {}", k1, n);
            assert!(k2 >= 1 && k2 <= 256);
            assert_eq!(k1 % k2, 0);
        }
        // The derived pair must actually build.
        let a = generate_array(1 << 16, 1).unwrap();
        let (k1, k2) = Bbst2Index::auto_params(a.len());
        assert!(Bbst2Index::build(&a, k1, k2).is_ok());
    }
}
