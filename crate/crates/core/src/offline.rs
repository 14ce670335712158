//! Batched offline range minimum queries.
//!
//! When all `q` queries are known up front and `q` is small against `n`,
//! building a full index is wasted work. The contracted pipeline runs four
//! stages: sort the `2q` query endpoints, contract the array to the at most
//! `2q - 1` minima of the regions between consecutive distinct endpoints,
//! build a block sparse table over the contracted array, and answer every
//! query through it. The plain mode skips sorting and contraction entirely
//! and just builds the block table over the original array with
//! `k ~ sqrt(n)`.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bbst::BbstIndex;
use crate::error::{Error, Result};
use crate::oracle::scan_min;
use crate::types::{Query, QueryBatch};

/// Which endpoint of its query a record represents. `Left` sorts first so
/// the endpoint order is total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// One query endpoint: position in the array plus its query's index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Endpoint {
    pub x: usize,
    pub y: u32,
    pub side: Side,
}

/// The `2q` endpoints sorted by `(x, y, side)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointList {
    entries: Vec<Endpoint>,
}

impl EndpointList {
    pub fn entries(&self) -> &[Endpoint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Endpoint sorting strategy; both produce the same total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortBackend {
    /// LSD radix sort on packed 64-bit keys, serial.
    #[default]
    Radix,
    /// Unstable comparison sort (parallel when a pool is available).
    Comparison,
}

// (x, y, side) packed so that u64 order equals the lexicographic order.
fn pack(x: usize, y: u32, side: Side) -> u64 {
    debug_assert!(x <= u32::MAX as usize && y < (1 << 31));
    (x as u64) << 32 | (y as u64) << 1 | side as u64
}

fn unpack(key: u64) -> Endpoint {
    Endpoint {
        x: (key >> 32) as usize,
        y: (key >> 1) as u32 & 0x7fff_ffff,
        side: if key & 1 == 0 { Side::Left } else { Side::Right },
    }
}

fn radix_sort_u64(keys: &mut Vec<u64>) {
    let mut scratch = vec![0u64; keys.len()];
    for byte in 0..8 {
        let shift = byte * 8;
        let mut counts = [0usize; 256];
        for &k in keys.iter() {
            counts[(k >> shift) as usize & 0xff] += 1;
        }
        if counts.iter().any(|&c| c == keys.len()) {
            continue; // all keys share this byte
        }
        let mut offsets = [0usize; 256];
        let mut acc = 0;
        for (o, &c) in offsets.iter_mut().zip(&counts) {
            *o = acc;
            acc += c;
        }
        for &k in keys.iter() {
            let digit = (k >> shift) as usize & 0xff;
            scratch[offsets[digit]] = k;
            offsets[digit] += 1;
        }
        std::mem::swap(keys, &mut scratch);
    }
}

/// Stage 1: the batch's `2q` endpoints, fully sorted.
pub fn sort_endpoints(batch: &QueryBatch) -> Result<EndpointList> {
    sort_endpoints_with(batch, SortBackend::default())
}

pub fn sort_endpoints_with(batch: &QueryBatch, backend: SortBackend) -> Result<EndpointList> {
    let mut keys = Vec::with_capacity(2 * batch.len());
    for (y, q) in batch.queries().iter().enumerate() {
        keys.push(pack(q.l, y as u32, Side::Left));
        keys.push(pack(q.r, y as u32, Side::Right));
    }
    match backend {
        SortBackend::Radix => radix_sort_u64(&mut keys),
        SortBackend::Comparison => keys.par_sort_unstable(),
    }
    Ok(EndpointList {
        entries: keys.into_iter().map(unpack).collect(),
    })
}

/// Contracted array: minima of the regions between consecutive distinct
/// endpoints, with the mapping back to original positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedArray {
    aq: Vec<u32>,
    map: Vec<usize>,
    endpoints: Vec<usize>,
}

impl ContractedArray {
    /// Cell values: `aq[i] = min(a[e_i ..= e_{i+1}])`.
    pub fn aq(&self) -> &[u32] {
        &self.aq
    }

    /// Original position of each cell's minimum.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Distinct endpoint positions, ascending.
    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    /// Number of cells, at most `2q - 1`.
    pub fn len(&self) -> usize {
        self.aq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aq.is_empty()
    }

    /// Cell-coordinate rank of a distinct endpoint position.
    pub fn rank(&self, pos: usize) -> Option<usize> {
        self.endpoints.binary_search(&pos).ok()
    }
}

/// Stage 2: region minima between consecutive distinct endpoints.
pub fn contract(a: &[u32], endpoints: &EndpointList) -> ContractedArray {
    let mut distinct = Vec::with_capacity(endpoints.len());
    for e in endpoints.entries() {
        if distinct.last() != Some(&e.x) {
            distinct.push(e.x);
        }
    }
    let cells: Vec<(u32, usize)> = distinct
        .par_windows(2)
        .map(|w| {
            let (pos, value) = scan_min(a, w[0], w[1]);
            (value, pos)
        })
        .collect();
    let (aq, map) = cells.into_iter().unzip();
    ContractedArray {
        aq,
        map,
        endpoints: distinct,
    }
}

/// Wall-clock duration of each pipeline stage.
#[derive(Debug, Clone, Copy, Default)]
pub struct StageTimings {
    pub sort: Duration,
    pub contract: Duration,
    pub build: Duration,
    pub answer: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.sort + self.contract + self.build + self.answer
    }
}

/// Result of one contracted-pipeline run.
#[derive(Debug, Clone)]
pub struct ConRun {
    pub answers: Vec<usize>,
    pub timings: StageTimings,
    /// `|A_Q|`, the contracted cell count.
    pub contracted_cells: usize,
}

/// Four-stage pipeline with input contraction; block size `k` applies to
/// the contracted array (clamped to its length).
pub fn answer_batch_con(a: &[u32], batch: &QueryBatch, k: usize) -> Result<Vec<usize>> {
    answer_batch_con_detailed(a, batch, k, SortBackend::default()).map(|run| run.answers)
}

pub fn answer_batch_con_detailed(
    a: &[u32],
    batch: &QueryBatch,
    k: usize,
    backend: SortBackend,
) -> Result<ConRun> {
    if k == 0 {
        return Err(Error::InvalidBlockSize { k, n: a.len() });
    }
    batch.check(a.len())?;
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let endpoints = sort_endpoints_with(batch, backend)?;
    let ranks = assign_ranks(&endpoints, batch.len());
    timings.sort = t.elapsed();

    let t = Instant::now();
    let contracted = contract(a, &endpoints);
    timings.contract = t.elapsed();

    let t = Instant::now();
    let index = if contracted.is_empty() {
        None
    } else {
        Some(BbstIndex::build(contracted.aq(), k.min(contracted.len()))?)
    };
    timings.build = t.elapsed();

    let t = Instant::now();
    let answers = batch
        .queries()
        .par_iter()
        .zip(&ranks)
        .map(|(q, &(ra, rb))| {
            if ra == rb {
                // l == r: the endpoint itself, no cell lookup.
                q.l
            } else {
                let idx = index.as_ref().expect("non-degenerate query implies cells");
                let cell = idx
                    .query(contracted.aq(), Query::new(ra as usize, rb as usize - 1))
                    .expect("cell range is valid by construction");
                contracted.map()[cell]
            }
        })
        .collect();
    timings.answer = t.elapsed();

    Ok(ConRun {
        answers,
        timings,
        contracted_cells: contracted.len(),
    })
}

fn assign_ranks(endpoints: &EndpointList, q: usize) -> Vec<(u32, u32)> {
    let mut ranks = vec![(0u32, 0u32); q];
    let mut rank = 0u32;
    let mut prev_x: Option<usize> = None;
    for e in endpoints.entries() {
        if let Some(px) = prev_x {
            if e.x != px {
                rank += 1;
                prev_x = Some(e.x);
            }
        } else {
            prev_x = Some(e.x);
        }
        match e.side {
            Side::Left => ranks[e.y as usize].0 = rank,
            Side::Right => ranks[e.y as usize].1 = rank,
        }
    }
    ranks
}

/// Power of two nearest to `sqrt(n)`, the default block size for the
/// no-contraction mode.
pub fn default_plain_block_size(n: usize) -> usize {
    let s = (n as f64).sqrt();
    if s <= 1.0 {
        return 1;
    }
    (1usize << (s.log2().round() as u32)).min(n)
}

/// No-contraction mode: build the block table over the original array and
/// answer every query through it.
pub fn answer_batch_plain(a: &[u32], batch: &QueryBatch, k: Option<usize>) -> Result<Vec<usize>> {
    batch.check(a.len())?;
    let k = k.unwrap_or_else(|| default_plain_block_size(a.len()));
    let index = BbstIndex::build(a, k)?;
    batch
        .queries()
        .par_iter()
        .map(|q| index.query(a, *q))
        .collect()
}
