//! Classic sparse table over an arbitrary value sequence, generalized to
//! arity `l >= 2`.
//!
//! Layer `j` holds, for every start index `i`, the minimum of
//! `values[i ..= min(i + l^j - 1, n - 1)]`: rows are full length and spans
//! are clipped at the right edge. Entries pack a 32-bit position with the
//! 32-bit value stored there, so queries never touch the source array.
//! The same layered engine is reused by the block-based variants, where a
//! "cell" is a block rather than a single element.

use crate::error::{Error, Result};
use crate::space::SpaceReport;
use crate::types::check_range;

/// One precomputed minimum: absolute position plus the value found there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub pos: u32,
    pub value: u32,
}

impl Entry {
    /// Combines two candidates; `self` is the left one and wins ties.
    #[inline]
    pub(crate) fn better(self, right: Entry) -> Entry {
        if right.value < self.value {
            right
        } else {
            self
        }
    }
}

/// Largest `j` with `base^j <= x` (`x >= 1`, `base >= 2`).
pub(crate) fn floor_log(base: usize, x: usize) -> usize {
    let mut j = 0;
    let mut p = 1usize;
    while p <= x / base {
        p *= base;
        j += 1;
    }
    j
}

/// Smallest `t` with `base^t >= x`.
pub(crate) fn ceil_log(base: usize, x: usize) -> usize {
    let mut t = 0;
    let mut p = 1u128;
    while p < x as u128 {
        p *= base as u128;
        t += 1;
    }
    t
}

pub(crate) fn ceil_log_u64(base: u64, x: u64) -> u64 {
    let mut t = 0;
    let mut p = 1u128;
    while p < x as u128 {
        p *= base as u128;
        t += 1;
    }
    t
}

/// Covering-span range minimum over `[lo, hi]` cells, reading entries
/// through `get(i, j)`.
///
/// Uses `j = min(floor_log(arity, width), layers - 1)` and combines the
/// aligned candidates starting at `lo` with a final candidate ending at
/// `hi`; at most `arity` lookups. The left candidate wins ties.
pub(crate) fn range_min_with<F>(get: F, layers: usize, arity: usize, lo: usize, hi: usize) -> Entry
where
    F: Fn(usize, usize) -> Entry,
{
    let width = hi - lo + 1;
    let j = floor_log(arity, width).min(layers - 1);
    let span = arity.pow(j as u32);
    let candidates = width.div_ceil(span);
    let mut best: Option<Entry> = None;
    for m in 0..candidates.saturating_sub(1) {
        let e = get(lo + m * span, j);
        best = Some(best.map_or(e, |b| b.better(e)));
    }
    let last = get(hi + 1 - span, j);
    best.map_or(last, |b| b.better(last))
}

/// Layered minima table: `count` rows of `row_len` entries each, row `j`
/// covering spans of `arity^j` cells (right-clipped).
#[derive(Debug, Clone)]
pub(crate) struct Layers {
    pub row_len: usize,
    pub count: usize,
    pub arity: usize,
    pub entries: Vec<Entry>,
}

impl Layers {
    pub fn build(base_row: Vec<Entry>, arity: usize) -> Layers {
        let row_len = base_row.len();
        let count = ceil_log(arity, row_len).max(1);
        let mut entries = base_row;
        entries.reserve_exact((count - 1) * row_len);
        let mut prev_span = 1usize;
        for j in 1..count {
            let prev = (j - 1) * row_len;
            for i in 0..row_len {
                let mut best = entries[prev + i];
                for c in 1..arity {
                    let s = i + c * prev_span;
                    if s >= row_len {
                        break;
                    }
                    best = best.better(entries[prev + s]);
                }
                entries.push(best);
            }
            prev_span *= arity;
        }
        Layers {
            row_len,
            count,
            arity,
            entries,
        }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Entry {
        self.entries[j * self.row_len + i]
    }

    pub fn range_min(&self, lo: usize, hi: usize) -> Entry {
        range_min_with(|i, j| self.entry(i, j), self.count, self.arity, lo, hi)
    }

    pub fn stored_bits(&self) -> u64 {
        self.entries.len() as u64 * 64
    }
}

/// Sparse table answering range minimum queries in at most `arity` lookups.
#[derive(Debug, Clone)]
pub struct SparseTable {
    layers: Layers,
}

impl SparseTable {
    pub fn build(values: &[u32], arity: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyArray);
        }
        if values.len() > u32::MAX as usize {
            return Err(Error::ArrayTooLarge { n: values.len() });
        }
        if arity < 2 {
            return Err(Error::InvalidArity { arity });
        }
        let base = values
            .iter()
            .enumerate()
            .map(|(i, &v)| Entry { pos: i as u32, value: v })
            .collect();
        Ok(Self {
            layers: Layers::build(base, arity),
        })
    }

    pub fn len(&self) -> usize {
        self.layers.row_len
    }

    pub fn is_empty(&self) -> bool {
        false // at least one element by construction
    }

    pub fn arity(&self) -> usize {
        self.layers.arity
    }

    pub fn layer_count(&self) -> usize {
        self.layers.count
    }

    /// Position of a minimum of `values[l..=r]`.
    pub fn query(&self, l: usize, r: usize) -> Result<usize> {
        check_range(l, r, self.layers.row_len)?;
        Ok(self.layers.range_min(l, r).pos as usize)
    }

    /// Stored `(position, value)` for start `i` at layer `j`.
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

    /// Formula-level footprint: `L * n * entry_bits` with
    /// `L = max(1, ceil(log_arity(n)))`.
    pub fn space_bits(n: u64, arity: u64, entry_bits: u64) -> u64 {
        ceil_log_u64(arity, n).max(1) * n * entry_bits
    }

    /// Bits held by the built table (64 per entry).
    pub fn stored_bits(&self) -> u64 {
        self.layers.stored_bits()
    }

    /// Footprint of the table alone; the source array is not retained.
    pub fn space_report(&self) -> SpaceReport {
        SpaceReport {
            n: self.layers.row_len as u64,
            backend_bits: 0,
            sparse_table_bits: self.stored_bits(),
            second_level_bits: 0,
        }
    }
}
