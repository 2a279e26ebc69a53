//! Dense value tables on integer intervals.
//!
//! `ValueTable` is the exchange format between every module of this crate:
//! it holds the values of an arithmetic function on an inclusive interval
//! [lo, hi]. Tables carry an *integer-valued* flag; when set, every stored
//! f64 equals its nearest integer exactly and downstream accumulations may
//! run on an exact 128-bit integer path.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Hard cap (in f64 entries) below which any stored integer is exact.
const EXACT_INT_LIMIT: f64 = 9007199254740992.0; // 2^53

/// Default table budget: 2^27 entries (1 GiB of f64 values).
const DEFAULT_MAX_LEN: u64 = 1 << 27;

/// Maximum permitted table length, in entries.
///
/// Read once from the `SIEVE_BANDS_MAX_TABLE` environment variable;
/// unset or unparsable values fall back to the 2^27 default. Exceeding
/// the budget is an error, never a silent truncation.
pub fn max_table_len() -> u64 {
    static BUDGET: OnceLock<u64> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("SIEVE_BANDS_MAX_TABLE")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_MAX_LEN)
    })
}

fn checked_len(lo: u64, hi: u64) -> Result<u64> {
    if lo == 0 || hi < lo {
        return Err(Error::BadRange { lo, hi });
    }
    let len = hi - lo + 1;
    let max = max_table_len();
    if len > max {
        return Err(Error::TableBudget { len, max });
    }
    Ok(len)
}

fn is_exact_int(v: f64) -> bool {
    v.is_finite() && v == v.trunc() && v.abs() <= EXACT_INT_LIMIT
}

/// Values of an arithmetic function on the integer interval [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    lo: u64,
    hi: u64,
    values: Vec<f64>,
    integer_valued: bool,
}

impl ValueTable {
    /// Build a table from raw f64 values starting at `lo`.
    ///
    /// The integer-valued flag is derived by scanning the entries.
    /// Non-finite entries are rejected.
    pub fn new(lo: u64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::BadRange { lo, hi: lo });
        }
        let hi = lo + values.len() as u64 - 1;
        checked_len(lo, hi)?;
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite table entry {bad} in [{lo}, {hi}]"
            )));
        }
        let integer_valued = values.iter().all(|&v| is_exact_int(v));
        Ok(Self {
            lo,
            hi,
            values,
            integer_valued,
        })
    }

    /// Build an integer-valued table from i64 entries.
    ///
    /// Entries must stay within ±2^53 so the f64 image is exact.
    pub fn from_ints(lo: u64, ints: Vec<i64>) -> Result<Self> {
        if ints.is_empty() {
            return Err(Error::BadRange { lo, hi: lo });
        }
        let hi = lo + ints.len() as u64 - 1;
        checked_len(lo, hi)?;
        let mut values = Vec::with_capacity(ints.len());
        for v in ints {
            let f = v as f64;
            if f.abs() > EXACT_INT_LIMIT {
                return Err(Error::Domain(format!(
                    "integer entry {v} exceeds the exact f64 range"
                )));
            }
            values.push(f);
        }
        Ok(Self {
            lo,
            hi,
            values,
            integer_valued: true,
        })
    }

    /// All-zero integer table on [lo, hi].
    pub fn zeros(lo: u64, hi: u64) -> Result<Self> {
        let len = checked_len(lo, hi)?;
        Ok(Self {
            lo,
            hi,
            values: vec![0.0; len as usize],
            integer_valued: true,
        })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: lo <= hi
    }

    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at n, or 0 outside [lo, hi].
    pub fn get(&self, n: u64) -> f64 {
        if n < self.lo || n > self.hi {
            0.0
        } else {
            self.values[(n - self.lo) as usize]
        }
    }

    /// Value at n inside the range; panics outside.
    pub fn at(&self, n: u64) -> f64 {
        self.values[(n - self.lo) as usize]
    }

    /// Integer value at n (0 outside the range).
    ///
    /// Meaningful only when the table is integer-valued.
    pub fn get_int(&self, n: u64) -> i64 {
        let v = self.get(n);
        debug_assert!(v == (v as i64) as f64, "non-integer entry read as int");
        v as i64
    }

    /// Iterate (n, value) pairs in ascending n.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.lo + i as u64, v))
    }

    /// Sum of all entries: exact i128 on the integer path, f64 otherwise.
    pub fn total(&self) -> f64 {
        match self.total_int() {
            Some(t) => t as f64,
            None => self.values.iter().sum(),
        }
    }

    /// Exact total when integer-valued.
    pub fn total_int(&self) -> Option<i128> {
        if !self.integer_valued {
            return None;
        }
        Some(self.values.iter().map(|&v| v as i64 as i128).sum())
    }

    /// Sum of absolute values of all entries.
    pub fn abs_total(&self) -> f64 {
        if self.integer_valued {
            self.values.iter().map(|&v| (v as i64 as i128).abs()).sum::<i128>() as f64
        } else {
            self.values.iter().map(|v| v.abs()).sum()
        }
    }

    /// Largest absolute entry.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Force the integer flag off (used after lossy conversions).
    pub(crate) fn clear_integer_flag(&mut self) {
        self.integer_valued = false;
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// Convert an i128 accumulator array into a table, dropping the integer
/// flag if any entry left the exact f64 range.
pub(crate) fn table_from_i128(lo: u64, acc: Vec<i128>) -> Result<ValueTable> {
    let exact = acc
        .iter()
        .all(|&v| v.abs() <= EXACT_INT_LIMIT as i128);
    let values: Vec<f64> = acc.into_iter().map(|v| v as f64).collect();
    let mut t = ValueTable::new(lo, values)?;
    if !exact {
        t.clear_integer_flag();
    }
    Ok(t)
}
