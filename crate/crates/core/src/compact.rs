//! Compact layered representation of the block sparse table.
//!
//! Layers whose index is a multiple of 9 are stored directly (64-bit
//! position + value entries); every other layer stores one delta per entry.
//! In byte mode the delta `m` points at the aligned sub-span of the nearest
//! lower direct layer `j'` that contains the span minimum, so resolving is
//! a single indirection: the entry equals `direct[j'][i + m * 2^j']`. Since
//! `j - j' <= 8`, `m` always fits one byte. In bit mode each delta is a
//! single bit selecting the half of the span whose minimum wins, resolved
//! by walking down to the nearest direct layer.
//!
//! With a second level, one byte per `k2`-block stores the minimum offset
//! and the block minimum values may additionally be kept exactly (32 bits)
//! or quantized to 8-bit monotone codes for array-free comparisons.

use crate::bbst::{block_minima, BbstIndex};
use crate::bbst2::{check_second_level, fold_to_top_blocks, second_level_minima};
use crate::error::{Error, Result};
use crate::oracle::scan_min;
use crate::space::{layer_count_for, SpaceReport};
use crate::sparse_table::{range_min_with, Entry};
use crate::types::{check_range, Query};

/// Spacing of directly stored layers.
const DIRECT_PERIOD: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    Byte,
    Bit,
}

/// How second-level block minima values are stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueMode {
    /// Offsets only; values come from the input array.
    None,
    /// Full 32-bit values.
    Exact,
    /// 8-bit monotone codes from [`quantize`].
    Quantized,
}

/// `floor(max_q * (1 - (max_min - v)^8 / (max_min - min_min)^8))`.
///
/// Monotone non-decreasing in `v`, with `quantize(min_min) = 0` and
/// `quantize(max_min) = max_q`; codes resolve small values more densely.
/// A strict code inequality therefore implies a strict value inequality,
/// which is what makes array-free comparisons of quantized minima safe.
pub fn quantize(v: u32, min_min: u32, max_min: u32, max_q: u8) -> Result<u8> {
    if v < min_min || v > max_min {
        return Err(Error::QuantizeOutOfRange { v, min_min, max_min });
    }
    if min_min == max_min {
        return Ok(0);
    }
    let t = (max_min - v) as f64 / (max_min - min_min) as f64;
    Ok((max_q as f64 * (1.0 - t.powi(8))).floor() as u8)
}

#[derive(Debug, Clone)]
enum StoredValues {
    None,
    Exact(Vec<u32>),
    Quantized {
        codes: Vec<u8>,
        min_min: u32,
        max_min: u32,
    },
}

#[derive(Debug, Clone)]
struct SecondLevel {
    k2: usize,
    offsets: Vec<u8>,
    values: StoredValues,
}

/// Outcome of an array-free query attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TryOutcome {
    /// Answer found; `assisted` marks the second-level fallback path.
    Answer { pos: usize, assisted: bool },
    Decline(DeclineReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclineReason {
    /// The candidate minimum lies outside the query range.
    OutOfRange,
    /// Quantized codes tied, so the comparison is not decisive.
    QuantizedTie,
}

#[derive(Debug, Clone)]
pub struct CompactIndex {
    n: usize,
    k: usize,
    blocks: usize,
    layer_count: usize,
    mode: DeltaMode,
    /// Concatenated rows for layers `j % 9 == 0`, each `blocks` long.
    direct: Vec<Entry>,
    /// Byte mode: concatenated rows for the remaining layers.
    delta_bytes: Vec<u8>,
    /// Bit mode: one bit per delta-layer entry, packed little-endian.
    delta_bits: Vec<u64>,
    second: Option<SecondLevel>,
}

fn direct_row(j: usize) -> usize {
    j / DIRECT_PERIOD
}

fn delta_row(j: usize) -> usize {
    j - j / DIRECT_PERIOD - 1
}

fn direct_rows_for(layers: usize) -> usize {
    (layers - 1) / DIRECT_PERIOD + 1
}

impl CompactIndex {
    pub fn build(
        a: &[u32],
        k: usize,
        mode: DeltaMode,
        second_level: Option<(usize, ValueMode)>,
    ) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptyArray);
        }
        if a.len() > u32::MAX as usize {
            return Err(Error::ArrayTooLarge { n: a.len() });
        }
        if k == 0 || k > a.len() {
            return Err(Error::InvalidBlockSize { k, n: a.len() });
        }

        let second = match second_level {
            None => None,
            Some((k2, values)) => {
                check_second_level(k, k2)?;
                Some(Self::build_second_level(a, k2, values))
            }
        };

        // Compress the uncompressed table layer by layer.
        let plain = match &second {
            // Reuse the second-level pass when its granularity matches.
            Some(s) => {
                let (_, entries) = second_level_minima(a, s.k2);
                BbstIndex::from_block_minima(a.len(), k, fold_to_top_blocks(&entries, k / s.k2))
            }
            None => BbstIndex::from_block_minima(a.len(), k, block_minima(a, k)),
        };
        let blocks = plain.block_count();
        let layers = plain.layer_count();
        let entry = |i: usize, j: usize| -> Entry {
            let (pos, value) = plain.entry(i, j).unwrap();
            Entry { pos: pos as u32, value }
        };

        let mut direct = Vec::with_capacity(direct_rows_for(layers) * blocks);
        let mut delta_bytes = Vec::new();
        let mut delta_bits = Vec::new();
        if mode == DeltaMode::Bit {
            delta_bits = vec![0u64; ((layers - direct_rows_for(layers)) * blocks).div_ceil(64)];
        }
        for j in 0..layers {
            if j % DIRECT_PERIOD == 0 {
                for i in 0..blocks {
                    direct.push(entry(i, j));
                }
                continue;
            }
            match mode {
                DeltaMode::Byte => {
                    let base = j - j % DIRECT_PERIOD;
                    let sub_span = 1usize << base;
                    for i in 0..blocks {
                        let target = entry(i, j).value;
                        let mut m = 0u8;
                        loop {
                            let start = i + (m as usize) * sub_span;
                            debug_assert!(start < blocks && (m as usize) < (1 << (j - base)));
                            if entry(start, base).value == target {
                                break;
                            }
                            m += 1;
                        }
                        delta_bytes.push(m);
                    }
                }
                DeltaMode::Bit => {
                    let half = 1usize << (j - 1);
                    let row = delta_row(j);
                    for i in 0..blocks {
                        let right = i + half;
                        if right < blocks && entry(right, j - 1).value < entry(i, j - 1).value {
                            let bit = row * blocks + i;
                            delta_bits[bit / 64] |= 1u64 << (bit % 64);
                        }
                    }
                }
            }
        }

        Ok(Self {
            n: a.len(),
            k,
            blocks,
            layer_count: layers,
            mode,
            direct,
            delta_bytes,
            delta_bits,
            second,
        })
    }

    fn build_second_level(a: &[u32], k2: usize, values: ValueMode) -> SecondLevel {
        let (offsets, entries) = second_level_minima(a, k2);
        let values = match values {
            ValueMode::None => StoredValues::None,
            ValueMode::Exact => StoredValues::Exact(entries.iter().map(|e| e.value).collect()),
            ValueMode::Quantized => {
                let min_min = entries.iter().map(|e| e.value).min().unwrap();
                let max_min = entries.iter().map(|e| e.value).max().unwrap();
                let codes = entries
                    .iter()
                    .map(|e| quantize(e.value, min_min, max_min, u8::MAX).unwrap())
                    .collect();
                StoredValues::Quantized { codes, min_min, max_min }
            }
        };
        SecondLevel { k2, offsets, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    pub fn mode(&self) -> DeltaMode {
        self.mode
    }

    pub fn second_level_k2(&self) -> Option<usize> {
        self.second.as_ref().map(|s| s.k2)
    }

    fn delta_bit(&self, j: usize, i: usize) -> bool {
        let bit = delta_row(j) * self.blocks + i;
        self.delta_bits[bit / 64] >> (bit % 64) & 1 == 1
    }

    fn resolve_entry(&self, i: usize, j: usize) -> Entry {
        match self.mode {
            DeltaMode::Byte => {
                if j % DIRECT_PERIOD == 0 {
                    self.direct[direct_row(j) * self.blocks + i]
                } else {
                    let base = j - j % DIRECT_PERIOD;
                    let m = self.delta_bytes[delta_row(j) * self.blocks + i] as usize;
                    self.direct[direct_row(base) * self.blocks + i + (m << base)]
                }
            }
            DeltaMode::Bit => {
                let (mut i, mut j) = (i, j);
                while j % DIRECT_PERIOD != 0 {
                    if self.delta_bit(j, i) {
                        i += 1 << (j - 1);
                    }
                    j -= 1;
                }
                self.direct[direct_row(j) * self.blocks + i]
            }
        }
    }

    /// Resolves the delta chain for `(block, layer)` down to a direct-layer
    /// entry, returning `(position, value)`.
    pub fn resolve(&self, i: usize, j: usize) -> Result<(usize, u32)> {
        if j >= self.layer_count {
            return Err(Error::InvalidLayer { layer: j, layers: self.layer_count });
        }
        if i >= self.blocks {
            return Err(Error::InvalidCell { cell: i, cells: self.blocks });
        }
        let e = self.resolve_entry(i, j);
        Ok((e.pos as usize, e.value))
    }

    fn block_range_min(&self, b1: usize, b2: usize) -> Entry {
        range_min_with(|i, j| self.resolve_entry(i, j), self.layer_count, 2, b1, b2)
    }

    /// Speculative step on resolved entries; never touches the array.
    /// Resolution yields exact values, so the success/decline pattern is
    /// identical to the uncompressed table's.
    pub fn try_query(&self, query: Query) -> Result<Option<usize>> {
        check_range(query.l, query.r, self.n)?;
        let m = self.block_range_min(query.l / self.k, query.r / self.k).pos as usize;
        Ok((query.l <= m && m <= query.r).then_some(m))
    }

    /// Full query against the retained input array: speculative step, then
    /// the bounded fallback (second-level accelerated when present).
    pub fn query(&self, a: &[u32], query: Query) -> Result<usize> {
        if let Some(pos) = self.try_query(query)? {
            return Ok(pos);
        }
        let (l, r) = (query.l, query.r);
        let (bl, br) = (l / self.k, r / self.k);
        if br - bl < 2 {
            return Ok(self.scan_region(a, l, r).0);
        }
        let (mut pos, mut best) = self.scan_region(a, l, (bl + 1) * self.k - 1);
        let interior = self.block_range_min(bl + 1, br - 1);
        if interior.value < best {
            pos = interior.pos as usize;
            best = interior.value;
        }
        let (rp, rv) = self.scan_region(a, br * self.k, r);
        if rv < best {
            pos = rp;
        }
        Ok(pos)
    }

    fn scan_region(&self, a: &[u32], x: usize, y: usize) -> (usize, u32) {
        let Some(second) = &self.second else {
            return scan_min(a, x, y);
        };
        let k2 = second.k2;
        let mut pos = x;
        let mut best = u32::MAX;
        let mut cur = x;
        while cur <= y {
            let block = cur / k2;
            let start = block * k2;
            let end = ((block + 1) * k2 - 1).min(a.len() - 1);
            if cur == start && end <= y {
                let p = start + second.offsets[block] as usize;
                if a[p] < best {
                    best = a[p];
                    pos = p;
                }
            } else {
                let stop = end.min(y);
                for (i, &v) in a.iter().enumerate().take(stop + 1).skip(cur) {
                    if v < best {
                        best = v;
                        pos = i;
                    }
                }
            }
            cur = end + 1;
        }
        (pos, best)
    }

    /// Array-free attempt used as a hybrid front end: the speculative step,
    /// then — when second-level values are stored — a fallback over the
    /// interior span minimum and the `k2`-blocks covering the boundary
    /// regions. Exact stored values compare exactly; quantized codes decide
    /// only on strict inequality and a tie declines.
    pub fn try_query_assisted(&self, query: Query) -> Result<TryOutcome> {
        if let Some(pos) = self.try_query(query)? {
            return Ok(TryOutcome::Answer { pos, assisted: false });
        }
        let Some(second) = &self.second else {
            return Ok(TryOutcome::Decline(DeclineReason::OutOfRange));
        };
        if matches!(second.values, StoredValues::None) {
            return Ok(TryOutcome::Decline(DeclineReason::OutOfRange));
        }

        let (l, r) = (query.l, query.r);
        let (bl, br) = (l / self.k, r / self.k);
        // Candidates in position order: covering k2-blocks of the boundary
        // regions, plus the exact interior span minimum when it exists.
        let mut candidates: Vec<Candidate> = Vec::new();
        let push_region = |candidates: &mut Vec<Candidate>, x: usize, y: usize| {
            for block in x / second.k2..=y / second.k2 {
                let p = block * second.k2 + second.offsets[block] as usize;
                candidates.push(Candidate {
                    pos: p,
                    value: match &second.values {
                        StoredValues::Exact(values) => CandidateValue::Exact(values[block]),
                        StoredValues::Quantized { codes, .. } => CandidateValue::Code(codes[block]),
                        StoredValues::None => unreachable!(),
                    },
                });
            }
        };
        if br - bl < 2 {
            push_region(&mut candidates, l, r);
        } else {
            push_region(&mut candidates, l, (bl + 1) * self.k - 1);
            let interior = self.block_range_min(bl + 1, br - 1);
            let value = match &second.values {
                StoredValues::Exact(_) => CandidateValue::Exact(interior.value),
                StoredValues::Quantized { min_min, max_min, .. } => {
                    // The interior minimum is itself some k2-block minimum,
                    // so it lies inside the quantizer's range.
                    CandidateValue::Code(quantize(interior.value, *min_min, *max_min, u8::MAX).unwrap())
                }
                StoredValues::None => unreachable!(),
            };
            candidates.push(Candidate { pos: interior.pos as usize, value });
            push_region(&mut candidates, br * self.k, r);
        }

        match candidates[0].value {
            CandidateValue::Exact(_) => {
                // Exact values: any in-range candidate achieving the overall
                // minimum is a valid answer; prefer the leftmost.
                let best = candidates.iter().map(|c| c.value.exact()).min().unwrap();
                for c in &candidates {
                    if c.value.exact() == best && l <= c.pos && c.pos <= r {
                        return Ok(TryOutcome::Answer { pos: c.pos, assisted: true });
                    }
                }
                Ok(TryOutcome::Decline(DeclineReason::OutOfRange))
            }
            CandidateValue::Code(_) => {
                // Quantized codes: only a strictly unique minimum code is
                // decisive; equality hides the true order.
                let best = candidates.iter().map(|c| c.value.code()).min().unwrap();
                let mut winners = candidates.iter().filter(|c| c.value.code() == best);
                let first = winners.next().unwrap();
                if winners.next().is_some() {
                    return Ok(TryOutcome::Decline(DeclineReason::QuantizedTie));
                }
                if l <= first.pos && first.pos <= r {
                    Ok(TryOutcome::Answer { pos: first.pos, assisted: true })
                } else {
                    Ok(TryOutcome::Decline(DeclineReason::OutOfRange))
                }
            }
        }
    }

    /// Formula-level footprint.
    pub fn space_bits(
        n: u64,
        k: u64,
        mode: DeltaMode,
        second_level: Option<(u64, ValueMode)>,
    ) -> SpaceReport {
        let blocks = n.div_ceil(k);
        let layers = layer_count_for(blocks);
        let direct = (layers - 1) / DIRECT_PERIOD as u64 + 1;
        let delta_bits_per_entry = match mode {
            DeltaMode::Byte => 8,
            DeltaMode::Bit => 1,
        };
        let second_level_bits = match second_level {
            None => 0,
            Some((k2, values)) => {
                let value_bits = match values {
                    ValueMode::None => 0,
                    ValueMode::Exact => 32,
                    ValueMode::Quantized => 8,
                };
                n.div_ceil(k2) * (8 + value_bits)
            }
        };
        SpaceReport {
            n,
            backend_bits: 32 * n,
            sparse_table_bits: direct * blocks * 64 + (layers - direct) * blocks * delta_bits_per_entry,
            second_level_bits,
        }
    }

    /// Footprint of the built structure, counting logical bits per stored
    /// delta (bit-mode words are not rounded up).
    pub fn space_report(&self) -> SpaceReport {
        let delta_entries = (self.layer_count - direct_rows_for(self.layer_count)) * self.blocks;
        let delta_bits = match self.mode {
            DeltaMode::Byte => self.delta_bytes.len() as u64 * 8,
            DeltaMode::Bit => delta_entries as u64,
        };
        let second_level_bits = match &self.second {
            None => 0,
            Some(s) => {
                let value_bits = match &s.values {
                    StoredValues::None => 0,
                    StoredValues::Exact(v) => v.len() as u64 * 32,
                    StoredValues::Quantized { codes, .. } => codes.len() as u64 * 8,
                };
                s.offsets.len() as u64 * 8 + value_bits
            }
        };
        SpaceReport {
            n: self.n as u64,
            backend_bits: 32 * self.n as u64,
            sparse_table_bits: self.direct.len() as u64 * 64 + delta_bits,
            second_level_bits,
        }
    }
}

struct Candidate {
    pos: usize,
    value: CandidateValue,
}

#[derive(Clone, Copy)]
enum CandidateValue {
    Exact(u32),
    Code(u8),
}

impl CandidateValue {
    fn exact(self) -> u32 {
        match self {
            CandidateValue::Exact(v) => v,
            CandidateValue::Code(_) => unreachable!("mixed candidate domains"),
        }
    }

    fn code(self) -> u8 {
        match self {
            CandidateValue::Code(c) => c,
            CandidateValue::Exact(_) => unreachable!("mixed candidate domains"),
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
    fn quantize_endpoints() {
        assert_eq!(quantize(10, 10, 500, 255).unwrap(), 0);
        assert_eq!(quantize(500, 10, 500, 255).unwrap(), 255);
    }

    #[test]
    fn quantize_midpoint_formula() {
        // floor(255 * (1 - (1/2)^8)) = 254
        assert_eq!(quantize(128, 0, 256, 255).unwrap(), 254);
    }

    #[test]
    fn quantize_degenerate_and_errors() {
        assert_eq!(quantize(7, 7, 7, 255).unwrap(), 0);
        assert!(quantize(6, 7, 9, 255).is_err());
        assert!(quantize(10, 7, 9, 255).is_err());
    }

    #[test]
    fn quantize_monotone_and_strict() {
        let (min_min, max_min) = (1000u32, 4_000_000_000u32);
        let mut prev = 0u8;
        let mut prev_v = min_min;
        for step in 0..10_000u64 {
            let v = min_min + ((max_min - min_min) as u64 * step / 9_999) as u32;
            let code = quantize(v, min_min, max_min, 255).unwrap();
            assert!(code >= prev, "not monotone at {}", v);
            if code > prev {
                assert!(v > prev_v);
            }
            prev = code;
            prev_v = v;
        }
        assert_eq!(quantize(max_min, min_min, max_min, 255).unwrap(), 255);
    }

    #[test]
    fn resolve_direct_layer_is_identity() {
        for mode in [DeltaMode::Byte, DeltaMode::Bit] {
            let idx = CompactIndex::build(&FIX, 4, mode, None).unwrap();
            let plain = BbstIndex::build(&FIX, 4).unwrap();
            for i in 0..idx.block_count() {
                assert_eq!(idx.resolve(i, 0).unwrap(), plain.entry(i, 0).unwrap());
            }
        }
    }

    #[test]
    fn resolve_delta_layer() {
        let idx = CompactIndex::build(&FIX, 4, DeltaMode::Byte, None).unwrap();
        // Layer-1 entry 1 resolves to the layer-0 entry of block 1.
        assert_eq!(idx.resolve(1, 1).unwrap(), (6, 2));
    }

    #[test]
    fn resolution_matches_uncompressed_table() {
        let a = generate_array(20_000, 31).unwrap();
        for mode in [DeltaMode::Byte, DeltaMode::Bit] {
            for k in [4usize, 16, 100] {
                let idx = CompactIndex::build(&a, k, mode, None).unwrap();
                let plain = BbstIndex::build(&a, k).unwrap();
                for j in 0..idx.layer_count() {
                    for i in 0..idx.block_count() {
                        let (pos, value) = idx.resolve(i, j).unwrap();
                        let (ppos, pvalue) = plain.entry(i, j).unwrap();
                        assert_eq!(value, pvalue, "mode {:?} k {} ({}, {})", mode, k, i, j);
                        assert_eq!(a[pos], value);
                        let _ = ppos;
                    }
                }
            }
        }
    }

    #[test]
    fn small_tables_have_single_direct_layer() {
        // B <= 2^9 blocks means 9 layers at most: only layer 0 is direct.
        let a = generate_array(512 * 16, 8).unwrap();
        let idx = CompactIndex::build(&a, 16, DeltaMode::Byte, None).unwrap();
        assert!(idx.layer_count() <= 9);
        assert_eq!(idx.direct.len(), idx.block_count());
    }

    #[test]
    fn try_pattern_identical_to_plain(){
        let a = generate_array(100_000, 5).unwrap();
        let plain = BbstIndex::build(&a, 512).unwrap();
        let batch = generate_queries(a.len(), 20_000, 30_000, 6).unwrap();
        for mode in [DeltaMode::Byte, DeltaMode::Bit] {
            let idx = CompactIndex::build(&a, 512, mode, None).unwrap();
            for q in batch.queries() {
                assert_eq!(idx.try_query(*q).unwrap(), plain.try_query(*q).unwrap());
            }
        }
    }

    #[test]
    fn full_queries_match_oracle() {
        let a = generate_array(50_000, 77).unwrap();
        let batch = generate_queries(a.len(), 5000, 4000, 78).unwrap();
        for mode in [DeltaMode::Byte, DeltaMode::Bit] {
            for second in [None, Some((64, ValueMode::None)), Some((64, ValueMode::Quantized))] {
                let idx = CompactIndex::build(&a, 512, mode, second).unwrap();
                for q in batch.queries() {
                    let got = idx.query(&a, *q).unwrap();
                    let want = rmq_scan(&a, *q).unwrap();
                    assert_eq!(a[got], a[want]);
                }
            }
        }
    }

    #[test]
    fn assisted_answers_are_value_correct() {
        let a = generate_array(60_000, 41).unwrap();
        let batch = generate_queries(a.len(), 20_000, 2000, 42).unwrap();
        for values in [ValueMode::Exact, ValueMode::Quantized] {
            let idx = CompactIndex::build(&a, 512, DeltaMode::Byte, Some((64, values))).unwrap();
            let mut assisted = 0;
            for q in batch.queries() {
                match idx.try_query_assisted(*q).unwrap() {
                    TryOutcome::Answer { pos, assisted: was } => {
                        assisted += usize::from(was);
                        let want = rmq_scan(&a, *q).unwrap();
                        assert_eq!(a[pos], a[want], "query {:?}", q);
                    }
                    TryOutcome::Decline(_) => {}
                }
            }
            assert!(assisted > 0, "fallback path never exercised for {:?}", values);
        }
    }

    #[test]
    fn assisted_without_values_declines_out_of_range() {
        let idx = CompactIndex::build(&FIX, 4, DeltaMode::Byte, Some((4, ValueMode::None))).unwrap();
        assert_eq!(
            idx.try_query_assisted(Query::new(7, 10)).unwrap(),
            TryOutcome::Decline(DeclineReason::OutOfRange)
        );
    }

    #[test]
    fn global_range_try_succeeds() {
        let idx = CompactIndex::build(&FIX, 4, DeltaMode::Bit, None).unwrap();
        assert_eq!(idx.try_query(Query::new(0, 15)).unwrap(), Some(1));
    }

    #[test]
    fn space_formula_matches_tables() {
        let r = CompactIndex::space_bits(1 << 30, 512, DeltaMode::Byte, None);
        assert!((r.sparse_table_bits_per_element() - 0.65625).abs() < 1e-9);
        let r = CompactIndex::space_bits(
            1 << 30,
            16384,
            DeltaMode::Byte,
            Some((256, ValueMode::Quantized)),
        );
        assert!((r.sparse_table_bits_per_element() - 240.0 / 16384.0).abs() < 1e-9);
        assert!((r.second_level_bits_per_element() - 0.0625).abs() < 1e-9);
        let r = CompactIndex::space_bits(1 << 30, 512, DeltaMode::Byte, Some((64, ValueMode::Quantized)));
        assert!((r.second_level_bits_per_element() - 0.25).abs() < 1e-9);
        let r = CompactIndex::space_bits(1 << 30, 512, DeltaMode::Byte, Some((64, ValueMode::Exact)));
        assert!((r.second_level_bits_per_element() - 0.625).abs() < 1e-9);
    }

    #[test]
    fn stored_bits_match_formula() {
        let a = generate_array(12_345, 3).unwrap();
        for mode in [DeltaMode::Byte, DeltaMode::Bit] {
            for second in [None, Some((16, ValueMode::Quantized)), Some((16, ValueMode::Exact))] {
                let idx = CompactIndex::build(&a, 16, mode, second).unwrap();
                let formula = CompactIndex::space_bits(
                    a.len() as u64,
                    16,
                    mode,
                    second.map(|(k2, v)| (k2 as u64, v)),
                );
                let actual = idx.space_report();
                assert_eq!(actual.sparse_table_bits, formula.sparse_table_bits);
                assert_eq!(actual.second_level_bits, formula.second_level_bits);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CompactIndex::build(&FIX, 0, DeltaMode::Byte, None).is_err());
        assert!(CompactIndex::build(&FIX, 8, DeltaMode::Byte, Some((3, ValueMode::None))).is_err());
        let idx = CompactIndex::build(&FIX, 4, DeltaMode::Byte, None).unwrap();
        assert!(idx.resolve(0, 5).is_err());
        assert!(idx.resolve(9, 0).is_err());
    }
}
