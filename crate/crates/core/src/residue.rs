//! Per-residue-class sums of a value table.
//!
//! One pass over a window table yields S_c = Σ_{n≡c (m)} f(n) for every
//! class c. Band totals and exponential sums at rationals of denominator m
//! are then O(H) and O(m) combinations of the S_c, keeping the N-length
//! accumulation exact on the integer path and confining f64 rounding to a
//! single combination stage.

use crate::complex::ComplexValue;
use crate::table::ValueTable;

pub(crate) struct ResidueSums {
    pub modulus: u64,
    /// Exact class sums when the source table is integer-valued.
    pub int: Option<Vec<i128>>,
    /// f64 class sums (converted from the exact path when available).
    pub float: Vec<f64>,
}

impl ResidueSums {
    pub fn compute(table: &ValueTable, modulus: u64) -> Self {
        assert!(modulus >= 1, "residue sums need a positive modulus");
        let m = modulus as usize;
        if table.is_integer_valued() {
            let mut acc = vec![0i128; m];
            for (n, v) in table.iter() {
                acc[(n % modulus) as usize] += v as i64 as i128;
            }
            let float = acc.iter().map(|&v| v as f64).collect();
            Self {
                modulus,
                int: Some(acc),
                float,
            }
        } else {
            let mut acc = vec![0.0f64; m];
            for (n, v) in table.iter() {
                acc[(n % modulus) as usize] += v;
            }
            Self {
                modulus,
                int: None,
                float: acc,
            }
        }
    }

    /// Σ over all classes (the plain window total).
    pub fn total_int(&self) -> Option<i128> {
        self.int.as_ref().map(|v| v.iter().sum())
    }

    pub fn total_f64(&self) -> f64 {
        match self.total_int() {
            Some(t) => t as f64,
            None => self.float.iter().sum(),
        }
    }

    /// Band total Σ_{a=1..h} S_{(a·r + b) mod m} with multiplicity.
    ///
    /// r and b must already be reduced into [0, m). Returns the f64 value
    /// and, on the integer path, the exact i128 total.
    pub fn band_total(&self, r: u64, b: u64, h: u64) -> (f64, Option<i128>) {
        let m = self.modulus;
        let class = |a: u64| -> usize {
            let t = (a % m) as u128 * r as u128 + b as u128;
            (t % m as u128) as usize
        };
        match &self.int {
            Some(acc) => {
                let mut s: i128 = 0;
                for a in 1..=h {
                    s += acc[class(a)];
                }
                (s as f64, Some(s))
            }
            None => {
                let mut s = 0.0f64;
                for a in 1..=h {
                    s += self.float[class(a)];
                }
                (s, None)
            }
        }
    }

    /// Σ_c S_c · e(c·j/m): the window exponential sum at j/m.
    ///
    /// The only f64 rounding beyond the class sums happens here.
    pub fn exp_combine(&self, j: u64) -> ComplexValue {
        let m = self.modulus;
        let mut acc = ComplexValue::ZERO;
        for (c, &s) in self.float.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            let t = (c as u128 * j as u128 % m as u128) as u64;
            acc += ComplexValue::root_of_unity(t, m).scale(s);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sums_partition_the_window() {
        let t = ValueTable::from_ints(5, vec![1, 2, 3, 4, 5, 6]).unwrap(); // n = 5..10
        let rs = ResidueSums::compute(&t, 3);
        // n mod 3 over 5..10: 2,0,1,2,0,1
        assert_eq!(rs.int.as_ref().unwrap().as_slice(), &[2 + 5, 3 + 6, 1 + 4]);
        assert_eq!(rs.total_int(), Some(21));
    }

    #[test]
    fn band_total_with_multiplicity() {
        let t = ValueTable::from_ints(1, vec![10, 20, 30]).unwrap();
        let rs = ResidueSums::compute(&t, 3);
        // classes: S_0 = 30, S_1 = 10, S_2 = 20; residues of a*1+0 for a=1..4: 1,2,0,1
        let (s, exact) = rs.band_total(1, 0, 4);
        assert_eq!(s, 10.0 + 20.0 + 30.0 + 10.0);
        assert_eq!(exact, Some(70));
    }

    #[test]
    fn exp_combine_at_zero_is_total() {
        let t = ValueTable::from_ints(4, vec![3, -1, 2, 7]).unwrap();
        let rs = ResidueSums::compute(&t, 5);
        let z = rs.exp_combine(0);
        assert_eq!(z.re, 11.0);
        assert_eq!(z.im, 0.0);
    }
}
