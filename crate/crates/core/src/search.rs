//! Canonical enumeration of profiles: base-|X| numbers with row 1 as the
//! most significant digit, digits being canonical feasible indices.

use crate::error::{Error, Result};

/// Default cap on aggregator evaluations for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

pub(crate) fn profile_count(size: usize, voters: usize) -> u128 {
    (0..voters).fold(1u128, |acc, _| acc.saturating_mul(size as u128))
}

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Writes the digits of profile `index` into `digits`.
pub(crate) fn decode_digits(mut index: u64, size: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = (index % size as u64) as usize;
        index /= size as u64;
    }
}

/// Advances `digits` to the next profile; false after the last one.
pub(crate) fn next_digits(digits: &mut [usize], size: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < size {
            return true;
        }
        *d = 0;
    }
    false
}

pub(crate) fn fill_rows(xs: &[u64], digits: &[usize], rows: &mut [u64]) {
    for (r, &d) in rows.iter_mut().zip(digits) {
        *r = xs[d];
    }
}
