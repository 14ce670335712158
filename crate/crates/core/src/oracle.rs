//! Brute-force scan oracle and answer validation.
//!
//! `rmq_scan` is the reference every other structure is tested against.
//! Correctness is defined at the value level: an answer is accepted when the
//! value at the returned position equals the range minimum, regardless of
//! which tying position was picked.

use crate::error::Result;
use crate::types::{check_range, Query};

/// Leftmost position and value of the minimum of `a[l..=r]`.
///
/// No bounds checking; callers validate the range first.
pub(crate) fn scan_min(a: &[u32], l: usize, r: usize) -> (usize, u32) {
    let mut pos = l;
    let mut best = a[l];
    for (i, &v) in a.iter().enumerate().take(r + 1).skip(l + 1) {
        if v < best {
            best = v;
            pos = i;
        }
    }
    (pos, best)
}

/// Linear-scan range minimum: returns the leftmost minimum position of
/// `a[l..=r]` (strict less-than while scanning left to right).
pub fn rmq_scan(a: &[u32], query: Query) -> Result<usize> {
    check_range(query.l, query.r, a.len())?;
    Ok(scan_min(a, query.l, query.r).0)
}

/// True iff `pos` lies inside the query and holds the range-minimum value.
/// Ties are accepted at any tying position.
pub fn validate_answer(a: &[u32], query: Query, pos: usize) -> bool {
    if pos < query.l || pos > query.r || pos >= a.len() {
        return false;
    }
    let (_, min) = scan_min(a, query.l, query.r);
    a[pos] == min
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: [u32; 8] = [3, 1, 4, 1, 5, 9, 2, 6];

    #[test]
    fn scan_returns_leftmost_minimum() {
        assert_eq!(rmq_scan(&A, Query::new(0, 7)).unwrap(), 1);
    }

    #[test]
    fn scan_single_element() {
        assert_eq!(rmq_scan(&A, Query::new(4, 4)).unwrap(), 4);
    }

    #[test]
    fn scan_suffix_range() {
        assert_eq!(rmq_scan(&A, Query::new(4, 7)).unwrap(), 6);
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        assert!(rmq_scan(&A, Query::new(5, 4)).is_err());
        assert!(rmq_scan(&A, Query::new(0, 8)).is_err());
    }

    #[test]
    fn validate_accepts_any_tying_position() {
        let a = [3, 1, 4, 1];
        assert!(validate_answer(&a, Query::new(0, 3), 3));
        assert!(validate_answer(&a, Query::new(0, 3), 1));
        assert!(!validate_answer(&a, Query::new(0, 3), 0));
        assert!(!validate_answer(&a, Query::new(2, 3), 1)); // out of range
    }
}
