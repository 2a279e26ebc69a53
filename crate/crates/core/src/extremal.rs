//! The sign-packed extremal construction on (Q, 2Q].
//!
//! For a fixed modulus q ∈ (Q, 2Q] define, per d ∈ (Q, 2Q],
//!
//! ```text
//! inner(d) = Σ_{a≤H} ( #{m : N < md ≤ 2N, md ≡ a (q)} − (1/q)·#{m : N < md ≤ 2N} )
//! ```
//!
//! and take g(d) = sgn(inner(d)). The sieve function f = g∗1 of range 2Q
//! then satisfies |T_f(q, N, H)| = Σ_{d∼Q} |inner(d)| exactly, which makes
//! the band discrepancy as large as the hit/miss pattern allows. The d
//! with at least one hit form 𝒮; the rest (ℰ) contribute their full main
//! term. All counts are exact integers: the m-window bounds compare m·d
//! against N directly and sgn is decided on q·inner ∈ ℤ.

use crate::arith::{gcd, mod_inverse};
use crate::bands::{band_sum_direct_in, BandParams};
use crate::residue::ResidueSums;
use crate::sieve::SieveSpec;
use crate::table::ValueTable;
use crate::{Error, Result};

/// Number of x in [lo, hi] with x ≡ r (mod m).
fn count_in_ap(lo: u64, hi: u64, r: u64, m: u64) -> u64 {
    if lo > hi {
        return 0;
    }
    let fd = |a: i128, b: i128| a.div_euclid(b);
    let m = m as i128;
    let r = r as i128;
    (fd(hi as i128 - r, m) - fd(lo as i128 - 1 - r, m)) as u64
}

/// Σ_{a≤h} #{m ∈ [m_lo, m_hi] : m·d ≡ a (mod q)}, with multiplicity.
fn band_hits(d: u64, q: u64, h: u64, m_lo: u64, m_hi: u64) -> u64 {
    if m_lo > m_hi {
        return 0;
    }
    let g = gcd(d, q);
    let q_red = q / g;
    let mut hits = 0u64;
    for a in 1..=h {
        if a % g != 0 {
            continue;
        }
        if q_red == 1 {
            // q | d and g | a: every m in the window solves the congruence
            hits += m_hi - m_lo + 1;
            continue;
        }
        let d_inv = mod_inverse((d / g) as i64, q_red)
            .expect("d/g is invertible mod q/g by construction");
        let m0 = ((a / g) as u128 * d_inv as u128 % q_red as u128) as u64;
        hits += count_in_ap(m_lo, m_hi, m0, q_red);
    }
    hits
}

/// One extremal instance: the signed per-d discrepancies on (Q, 2Q],
/// the sign transform g, and the 𝒮/ℰ classification.
#[derive(Debug, Clone)]
pub struct ExtremalInstance {
    q: u64,
    range: u64,
    n: u64,
    h: u64,
    /// q·inner(d) as exact integers, ascending d.
    scaled_inner: Vec<i64>,
    hits: Vec<u64>,
    m_counts: Vec<u64>,
    in_s: Vec<bool>,
    inner: ValueTable,
    g: ValueTable,
    s_size: u64,
}

/// Build the extremal instance for Q < q ≤ 2Q.
///
/// Per d the m-window is the integers with N < m·d ≤ 2N (exact integer
/// comparisons, no floating boundaries); hit counts solve m·d ≡ a (q)
/// arithmetically per a. 𝒮 membership is decided on the raw hit count
/// (≥ 1), independently of the sign of inner(d).
pub fn build_extremal(q: u64, range: u64, n: u64, h: u64) -> Result<ExtremalInstance> {
    if range == 0 || n == 0 || h == 0 {
        return Err(Error::Domain(format!(
            "extremal parameters must be positive (Q={range}, N={n}, H={h})"
        )));
    }
    if !(q > range && q <= 2 * range) {
        return Err(Error::Domain(format!(
            "modulus q = {q} must lie in ({range}, {}]",
            2 * range
        )));
    }
    let len = range as usize;
    let mut scaled_inner = Vec::with_capacity(len);
    let mut hits_v = Vec::with_capacity(len);
    let mut m_counts = Vec::with_capacity(len);
    let mut in_s = Vec::with_capacity(len);
    let mut inner_vals = Vec::with_capacity(len);
    let mut sign_vals = Vec::with_capacity(len);
    let mut s_size = 0u64;
    for d in range + 1..=2 * range {
        // integers m with N < m·d ≤ 2N
        let m_lo = n / d + 1;
        let m_hi = (2 * n) / d;
        let cnt = if m_lo > m_hi { 0 } else { m_hi - m_lo + 1 };
        let hits = band_hits(d, q, h, m_lo, m_hi);
        let s = q as i128 * hits as i128 - h as i128 * cnt as i128;
        let s = i64::try_from(s).map_err(|_| {
            Error::Domain("extremal inner value exceeds i64".into())
        })?;
        scaled_inner.push(s);
        hits_v.push(hits);
        m_counts.push(cnt);
        let member = hits >= 1;
        in_s.push(member);
        s_size += u64::from(member);
        inner_vals.push(s as f64 / q as f64);
        sign_vals.push(s.signum());
    }
    let inner = ValueTable::new(range + 1, inner_vals)?;
    let g = ValueTable::from_ints(range + 1, sign_vals)?;
    Ok(ExtremalInstance {
        q,
        range,
        n,
        h,
        scaled_inner,
        hits: hits_v,
        m_counts,
        in_s,
        inner,
        g,
        s_size,
    })
}

impl ExtremalInstance {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The Q of the construction; d ranges over (Q, 2Q].
    pub fn range(&self) -> u64 {
        self.range
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    /// inner(d) on (Q, 2Q] (single rounding: exact integer / q).
    pub fn inner(&self) -> &ValueTable {
        &self.inner
    }

    /// g(d) = sgn(inner(d)) ∈ {−1, 0, +1} on (Q, 2Q].
    pub fn signs(&self) -> &ValueTable {
        &self.g
    }

    /// q·inner(d) as exact integers, ascending d.
    pub fn scaled_inner(&self) -> &[i64] {
        &self.scaled_inner
    }

    pub fn hit_counts(&self) -> &[u64] {
        &self.hits
    }

    pub fn m_counts(&self) -> &[u64] {
        &self.m_counts
    }

    pub fn s_size(&self) -> u64 {
        self.s_size
    }

    pub fn e_size(&self) -> u64 {
        self.range - self.s_size
    }

    /// Iterate (d, inner, g, in_S) rows in ascending d (the dump format).
    pub fn rows(&self) -> impl Iterator<Item = (u64, f64, i64, bool)> + '_ {
        (0..self.range as usize).map(move |i| {
            let d = self.range + 1 + i as u64;
            (
                d,
                self.inner.at(d),
                self.g.get_int(d),
                self.in_s[i],
            )
        })
    }

    /// The sieve function of range 2Q whose transform is the sign table
    /// (zero below Q+1).
    pub fn to_sieve_spec(&self) -> Result<SieveSpec> {
        let mut vals = vec![0i64; 2 * self.range as usize];
        for (i, &s) in self.g.values().iter().enumerate() {
            vals[self.range as usize + i] = s as i64;
        }
        SieveSpec::new(
            ValueTable::from_ints(1, vals)?,
            format!("extremal(q={}, Q={})", self.q, self.range),
        )
    }

    /// Both sides of the absolute-value identity:
    /// lhs = |T_f(q, N, H)| by direct band counting,
    /// rhs = Σ_{d∼Q} |inner(d)| in fixed ascending-d order.
    pub fn identity_sides(&self) -> Result<(f64, f64)> {
        let spec = self.to_sieve_spec()?;
        let p = BandParams::new(self.q, 1, 0, self.n, self.h)?;
        let table = spec.eval_window(self.n)?;
        let lhs = band_sum_direct_in(&table, &p).t.abs();
        let rhs = self.inner.values().iter().map(|v| v.abs()).sum();
        Ok((lhs, rhs))
    }

    /// Lower-bound trend metrics of the instance.
    pub fn lower_bound_report(&self) -> Result<LowerBoundReport> {
        // |T_f|·q = Σ_d |q·inner(d)| exactly
        let scaled_abs: i128 = self.scaled_inner.iter().map(|&s| (s as i128).abs()).sum();
        let ratio = scaled_abs as f64 / (self.n as f64 * self.h as f64);
        let s_fraction = self.s_size as f64 / self.range as f64;
        // |S| <= Σ_{a≤H} Σ_{n∼N, n≡a (q)} d(n), computed exactly
        let d2 = divisor_count_window(self.n)?;
        let rs = ResidueSums::compute(&d2, self.q);
        let (_, exact) = rs.band_total(1, 0, self.h);
        let majorant = exact.expect("divisor counts are integers") as u64;
        Ok(LowerBoundReport {
            ratio,
            s_fraction,
            s_size: self.s_size,
            s_majorant: majorant,
        })
    }
}

/// Trend metrics of one extremal instance.
#[derive(Debug, Clone, Copy)]
pub struct LowerBoundReport {
    /// |T_f|·q / (N·H).
    pub ratio: f64,
    /// |𝒮| / Q.
    pub s_fraction: f64,
    pub s_size: u64,
    /// Σ_{a≤H} Σ_{n∼N, n≡a (q)} d(n), the exact divisor-count majorant
    /// of |𝒮|.
    pub s_majorant: u64,
}

/// Divisor-count table d(n) on the window (N, 2N], by sieving multiples.
fn divisor_count_window(n: u64) -> Result<ValueTable> {
    let mut acc = vec![0i64; n as usize];
    let lo = n + 1;
    let hi = 2 * n;
    for d in 1..=hi {
        let mut m = lo.div_ceil(d) * d;
        while m <= hi {
            acc[(m - lo) as usize] += 1;
            m += d;
        }
    }
    ValueTable::from_ints(lo, acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force hit count: loop m and compare every a.
    fn hits_brute(d: u64, q: u64, h: u64, n: u64) -> u64 {
        let mut hits = 0;
        for m in 1..=2 * n {
            if m * d > n && m * d <= 2 * n {
                let c = (m * d) % q;
                for a in 1..=h {
                    if a % q == c {
                        hits += 1;
                    }
                }
            }
        }
        hits
    }

    #[test]
    fn ap_counter_small_cases() {
        assert_eq!(count_in_ap(1, 10, 0, 3), 3); // 3, 6, 9
        assert_eq!(count_in_ap(1, 10, 1, 3), 4); // 1, 4, 7, 10
        assert_eq!(count_in_ap(5, 4, 1, 3), 0); // empty interval
        assert_eq!(count_in_ap(7, 7, 0, 7), 1);
    }

    #[test]
    fn hit_counts_match_brute_force() {
        for (q, range, n, h) in [(5u64, 3u64, 12u64, 1u64), (7, 5, 40, 3), (9, 6, 33, 9), (11, 8, 60, 4)] {
            for d in range + 1..=2 * range {
                let m_lo = n / d + 1;
                let m_hi = (2 * n) / d;
                assert_eq!(
                    band_hits(d, q, h, m_lo, m_hi),
                    hits_brute(d, q, h, n),
                    "d={d} q={q} n={n} h={h}"
                );
            }
        }
    }

    #[test]
    fn worked_instance_signs() {
        // q=5, Q=3, N=12, H=1: d=4 has one hit (16 ≡ 1), d=5 and d=6 none
        let inst = build_extremal(5, 3, 12, 1).unwrap();
        assert_eq!(inst.signs().get_int(4), 1);
        assert_eq!(inst.signs().get_int(5), -1);
        assert_eq!(inst.signs().get_int(6), -1);
        assert_eq!(inst.hit_counts(), &[1, 0, 0]);
        assert_eq!(inst.m_counts(), &[3, 2, 2]);
        assert_eq!(inst.s_size(), 1);
        assert_eq!(inst.e_size(), 2);
        // inner values: 1 - 3/5, -2/5, -2/5
        assert!((inst.inner().at(4) - 0.4).abs() < 1e-15);
        assert!((inst.inner().at(5) + 0.4).abs() < 1e-15);
    }

    #[test]
    fn worked_instance_identity() {
        let inst = build_extremal(5, 3, 12, 1).unwrap();
        let (lhs, rhs) = inst.identity_sides().unwrap();
        assert!((rhs - 1.2).abs() < 1e-12);
        assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs));
    }

    #[test]
    fn param_constraints() {
        assert!(build_extremal(3, 3, 12, 1).is_err()); // q <= Q
        assert!(build_extremal(7, 3, 12, 1).is_err()); // q > 2Q
        assert!(build_extremal(5, 3, 0, 1).is_err());
    }

    #[test]
    fn window_beyond_2n_is_empty() {
        // d > 2N: no admissible m, inner = 0, sign = 0
        let inst = build_extremal(150, 100, 30, 2).unwrap();
        for d in 101..=200u64 {
            if d > 60 {
                assert_eq!(inst.inner().at(d), 0.0);
                assert_eq!(inst.signs().get_int(d), 0);
            }
        }
        assert_eq!(inst.s_size(), 0);
        let (lhs, rhs) = inst.identity_sides().unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn sign_times_inner_is_abs() {
        let inst = build_extremal(9, 6, 50, 2).unwrap();
        for (d, v) in inst.inner().iter() {
            let s = inst.signs().at(d);
            assert_eq!(s * v, v.abs(), "d = {d}");
        }
    }

    #[test]
    fn miss_class_inner_is_exact_main_term() {
        let inst = build_extremal(9, 6, 50, 2).unwrap();
        for (i, (d, v)) in inst.inner().iter().enumerate() {
            if !inst.in_s[i] {
                let expect = -((inst.h() * inst.m_counts()[i]) as f64) / inst.q() as f64;
                assert_eq!(v, expect, "d = {d}");
            }
        }
    }

    #[test]
    fn hit_counts_monotone_in_h() {
        let a = build_extremal(11, 8, 80, 3).unwrap();
        let b = build_extremal(11, 8, 80, 4).unwrap();
        for i in 0..a.hit_counts().len() {
            assert!(b.hit_counts()[i] >= a.hit_counts()[i]);
        }
    }

    #[test]
    fn divisor_window_matches_divisor_enumeration() {
        let t = divisor_count_window(40).unwrap();
        for (n, v) in t.iter() {
            let expect = crate::arith::divisors(n).unwrap().len() as f64;
            assert_eq!(v, expect, "n = {n}");
        }
    }

    #[test]
    fn majorant_dominates_s_size() {
        for q in [1801u64, 1850, 1999] {
            let inst = build_extremal(q, 1800, 20_000, 5).unwrap();
            let rep = inst.lower_bound_report().unwrap();
            assert!(rep.s_size <= rep.s_majorant, "q = {q}");
            assert!(rep.s_fraction >= 0.0 && rep.s_fraction <= 1.0);
        }
    }
}
