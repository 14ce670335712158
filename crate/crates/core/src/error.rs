use std::fmt;

/// Errors shared by all structures in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Every structure requires at least one element.
    EmptyArray,
    /// Positions are stored in 32 bits; longer arrays are not addressable.
    ArrayTooLarge { n: usize },
    /// Inverted range, or a range reaching past the end of the array.
    InvalidRange { l: usize, r: usize, n: usize },
    /// Block size must be in `1..=n`.
    InvalidBlockSize { k: usize, n: usize },
    /// Sparse table arity must be at least 2.
    InvalidArity { arity: usize },
    /// `k2` must divide `k1` and fit a one-byte offset (`k2 <= 256`).
    InvalidSecondLevel { k1: usize, k2: usize },
    /// Query width limit must be in `1..=n`.
    InvalidWidthLimit { max_width: usize, n: usize },
    /// A query batch must contain at least one query.
    EmptyBatch,
    /// Requested element count must be at least 1.
    InvalidCount,
    /// Value lies outside the quantizer's `[min_min, max_min]` interval.
    QuantizeOutOfRange { v: u32, min_min: u32, max_min: u32 },
    /// Layer index out of range for a layered table.
    InvalidLayer { layer: usize, layers: usize },
    /// Cell index out of range for a layered table row.
    InvalidCell { cell: usize, cells: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::EmptyArray => write!(f, "input array is empty"),
            Error::ArrayTooLarge { n } => {
                write!(f, "array of {} elements exceeds 32-bit addressing", n)
            }
            Error::InvalidRange { l, r, n } => {
                write!(f, "invalid range [{}, {}] for array of length {}", l, r, n)
            }
            Error::InvalidBlockSize { k, n } => {
                write!(f, "block size {} invalid for array of length {}", k, n)
            }
            Error::InvalidArity { arity } => write!(f, "arity {} is below 2", arity),
            Error::InvalidSecondLevel { k1, k2 } => {
                write!(f, "second-level block size {} invalid for k1 = {}", k2, k1)
            }
            Error::InvalidWidthLimit { max_width, n } => {
                write!(f, "width limit {} invalid for array of length {}", max_width, n)
            }
            Error::EmptyBatch => write!(f, "query batch is empty"),
            Error::InvalidCount => write!(f, "element count must be at least 1"),
            Error::QuantizeOutOfRange { v, min_min, max_min } => {
                write!(f, "value {} outside quantizer range [{}, {}]", v, min_min, max_min)
            }
            Error::InvalidLayer { layer, layers } => {
                write!(f, "layer {} out of range (table has {} layers)", layer, layers)
            }
            Error::InvalidCell { cell, cells } => {
                write!(f, "cell {} out of range (rows have {} cells)", cell, cells)
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
