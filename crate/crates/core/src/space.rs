//! Space accounting in bits per component.
//!
//! Every structure reports its footprint through the same three buckets:
//! backend data (the input array for variants that keep it, or the fallback
//! RMQ structure for hybrids), the layered sparse table, and the optional
//! second level (per-block offsets plus stored minima values).

/// Component-wise bit counts for one structure over `n` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceReport {
    pub n: u64,
    pub backend_bits: u64,
    pub sparse_table_bits: u64,
    pub second_level_bits: u64,
}

impl SpaceReport {
    pub fn total_bits(&self) -> u64 {
        self.backend_bits + self.sparse_table_bits + self.second_level_bits
    }

    pub fn bits_per_element(&self) -> f64 {
        self.total_bits() as f64 / self.n as f64
    }

    pub fn backend_bits_per_element(&self) -> f64 {
        self.backend_bits as f64 / self.n as f64
    }

    pub fn sparse_table_bits_per_element(&self) -> f64 {
        self.sparse_table_bits as f64 / self.n as f64
    }

    pub fn second_level_bits_per_element(&self) -> f64 {
        self.second_level_bits as f64 / self.n as f64
    }
}

/// Smallest `t` with `2^t >= x`; 0 for `x <= 1`.
pub(crate) fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

/// Layer count used throughout: `max(1, ceil(log2(blocks)))`.
pub(crate) fn layer_count_for(blocks: u64) -> u64 {
    ceil_log2(blocks).max(1)
}
