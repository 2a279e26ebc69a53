//! Exact elementary number-theoretic kernels.
//!
//! Everything here is deterministic integer arithmetic: a linear Möbius
//! sieve, divisor enumeration by trial division, the extended-gcd modular
//! inverse, truncated Dirichlet convolution by hyperbola enumeration, and
//! the distance-to-nearest-integer ‖α‖.

use crate::table::{table_from_i128, ValueTable};
use crate::{Error, Result};

/// Greatest common divisor (gcd(0, n) = n).
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// gcd after reducing a possibly negative residue into [0, modulus).
pub fn gcd_with_modulus(r: i64, modulus: u64) -> u64 {
    let r_red = r.rem_euclid(modulus as i64) as u64;
    gcd(r_red, modulus)
}

/// Möbius function on [1, X] by a linear sieve.
///
/// Each n is touched once via its smallest prime factor; no per-n
/// factorization. Errors on X = 0 or a table exceeding the budget.
pub fn mobius_table(x: u64) -> Result<ValueTable> {
    if x == 0 {
        return Err(Error::BadRange { lo: 1, hi: 0 });
    }
    if x > u32::MAX as u64 {
        return Err(Error::Domain(format!("mobius_table range {x} exceeds u32 sieve limit")));
    }
    let mut mu = ValueTable::zeros(1, x)?;
    let n = x as usize;
    let vals = mu.values_mut();
    vals[0] = 1.0; // mu(1)
    // min_prime_factor[i] = 0 while i is prime
    let mut mpf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if mpf[i] == 0 {
            primes.push(i as u32);
            vals[i - 1] = -1.0;
        }
        for &p in &primes {
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            mpf[ip] = p;
            if i % p as usize == 0 {
                vals[ip - 1] = 0.0; // p^2 | ip
                break;
            }
            vals[ip - 1] = -vals[i - 1];
        }
    }
    Ok(mu)
}

/// Divisors of n in ascending order, by trial division up to √n.
pub fn divisors(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Domain("divisors of 0 are undefined".into()));
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Ok(small)
}

/// Modular inverse of r modulo `modulus` (≥ 2) via extended gcd.
///
/// Returns r̄ ∈ [1, modulus−1] with r·r̄ ≡ 1, or None when
/// gcd(r, modulus) ≠ 1. Callers must handle None explicitly.
pub fn mod_inverse(r: i64, modulus: u64) -> Option<u64> {
    assert!(modulus >= 2, "mod_inverse requires modulus >= 2");
    let m = modulus as i128;
    let mut old_r = (r as i128).rem_euclid(m);
    let mut rr = m;
    let mut old_s: i128 = 1;
    let mut s: i128 = 0;
    while rr != 0 {
        let q = old_r / rr;
        (old_r, rr) = (rr, old_r - q * rr);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m) as u64)
}

/// Truncated Dirichlet convolution (a∗b)(n) = Σ_{dt=n} a(d)·b(t) on [1, X].
///
/// Hyperbola enumeration over (d, t) pairs, O(Σ_{d≤min(A,X)} X/d) work.
/// Entries outside either table's range count as 0. When both inputs are
/// integer-valued the accumulation runs in i128 and the result is
/// bit-exact.
pub fn dirichlet_convolve(a: &ValueTable, b: &ValueTable, x: u64) -> Result<ValueTable> {
    if x == 0 {
        return Err(Error::BadRange { lo: 1, hi: 0 });
    }
    let d_hi = a.hi().min(x);
    if a.is_integer_valued() && b.is_integer_valued() {
        let mut acc = vec![0i128; x as usize];
        for d in a.lo()..=d_hi {
            let ad = a.get_int(d) as i128;
            if ad == 0 {
                continue;
            }
            let t_hi = b.hi().min(x / d);
            for t in b.lo()..=t_hi {
                acc[(d * t - 1) as usize] += ad * b.get_int(t) as i128;
            }
        }
        table_from_i128(1, acc)
    } else {
        let mut acc = vec![0.0f64; x as usize];
        for d in a.lo()..=d_hi {
            let ad = a.at(d);
            if ad == 0.0 {
                continue;
            }
            let t_hi = b.hi().min(x / d);
            for t in b.lo()..=t_hi {
                acc[(d * t - 1) as usize] += ad * b.at(t);
            }
        }
        ValueTable::new(1, acc)
    }
}

/// Distance from α to the nearest integer, in [0, 1/2].
pub fn nearest_int_distance(alpha: f64) -> f64 {
    (alpha - alpha.round()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-factorization Möbius, the independent oracle.
    fn mobius_naive(mut n: u64) -> i64 {
        let mut mu = 1i64;
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if n > 1 {
            mu = -mu;
        }
        mu
    }

    #[test]
    fn mobius_small_values() {
        let t = mobius_table(1).unwrap();
        assert_eq!(t.values(), &[1.0]);
        let t = mobius_table(30).unwrap();
        assert_eq!(t.get_int(12), 0); // 12 = 2^2 * 3
        assert_eq!(t.get_int(30), -1); // 2 * 3 * 5
        assert_eq!(t.get_int(6), 1);
        assert_eq!(t.get_int(7), -1);
    }

    #[test]
    fn mobius_matches_trial_factorization() {
        let t = mobius_table(2000).unwrap();
        for n in 1..=2000u64 {
            assert_eq!(t.get_int(n), mobius_naive(n), "mu({n})");
        }
    }

    #[test]
    fn mobius_rejects_zero() {
        assert!(mobius_table(0).is_err());
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(6).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(divisors(28).unwrap(), vec![1, 2, 4, 7, 14, 28]);
        assert_eq!(divisors(49).unwrap(), vec![1, 7, 49]);
        assert!(divisors(0).is_err());
    }

    #[test]
    fn mobius_divisor_identity() {
        // sum_{d|n} mu(d) = [n = 1]
        let mu = mobius_table(10_000).unwrap();
        for n in 1..=10_000u64 {
            let s: i64 = divisors(n).unwrap().iter().map(|&d| mu.get_int(d)).sum();
            assert_eq!(s, i64::from(n == 1), "n = {n}");
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(1, 5), Some(1));
        assert_eq!(mod_inverse(3, 7), Some(5)); // brute force: 3*5 = 15 = 2*7+1
        assert_eq!(mod_inverse(2, 4), None); // gcd = 2
        assert_eq!(mod_inverse(-1, 7), Some(6));
    }

    #[test]
    fn mod_inverse_exhaustive_small_moduli() {
        for m in 2..=200u64 {
            for r in 1..=m {
                match mod_inverse(r as i64, m) {
                    Some(inv) => {
                        assert_eq!(gcd(r, m), 1);
                        assert!(inv >= 1 && inv < m);
                        assert_eq!(r % m * inv % m, 1 % m, "r={r} m={m}");
                    }
                    None => assert_ne!(gcd(r, m), 1, "r={r} m={m}"),
                }
            }
        }
    }

    #[test]
    fn convolution_examples() {
        // a = indicator of [1,2], b = 1 on [1,6]: entry 6 is tau_2(6) = 2
        let a = ValueTable::from_ints(1, vec![1, 1]).unwrap();
        let b = ValueTable::from_ints(1, vec![1; 6]).unwrap();
        let c = dirichlet_convolve(&a, &b, 6).unwrap();
        assert_eq!(c.get_int(6), 2);

        // delta at 1 is the convolution identity
        let delta = ValueTable::from_ints(1, vec![1]).unwrap();
        let any = ValueTable::from_ints(1, vec![4, -3, 0, 7, 1]).unwrap();
        let c = dirichlet_convolve(&delta, &any, 5).unwrap();
        assert_eq!(c.values(), any.values());

        // indicator[1,2] * indicator[1,3]: only (2,3) lands on 6
        let a = ValueTable::from_ints(1, vec![1, 1]).unwrap();
        let b = ValueTable::from_ints(1, vec![1, 1, 1]).unwrap();
        let c = dirichlet_convolve(&a, &b, 6).unwrap();
        assert_eq!(c.get_int(6), 1);
    }

    #[test]
    fn convolution_ignores_entries_beyond_x() {
        let a = ValueTable::from_ints(1, vec![1, 1, 1, 1]).unwrap();
        let b = ValueTable::from_ints(1, vec![1, 1, 1, 1]).unwrap();
        let c = dirichlet_convolve(&a, &b, 3).unwrap();
        assert_eq!(c.values(), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn nearest_int_distance_examples() {
        assert_eq!(nearest_int_distance(3.0), 0.0);
        assert_eq!(nearest_int_distance(0.5), 0.5);
        assert_eq!(nearest_int_distance(1.25), 0.25);
        assert_eq!(nearest_int_distance(-0.75), 0.25);
    }
}
