//! Restricted divisor models: τ_Q, τ_{Q,R}, d_k and friends.
//!
//! `τ_{Q,R}(n) = Σ_{dt=n} 1_{[1,Q]}(d)·1_{[1,R]}(t)` counts the divisor
//! pairs of n constrained to boxes, d_k(n) counts ordered k-factorizations.
//! All tables are integer-exact. The band discrepancy of τ_{Q,R} against
//! its expected mass HQR/q and the normalized d_k exponential sum are the
//! reporting quantities.

use crate::arith::{dirichlet_convolve, gcd_with_modulus, mobius_table};
use crate::residue::ResidueSums;
use crate::table::{table_from_i128, ValueTable};
use crate::{Error, Result};

/// τ_{Q,R} on [1, X] by hyperbola enumeration of the pairs (d, t).
pub fn tau_qr_table(q_cap: u64, r_cap: u64, x: u64) -> Result<ValueTable> {
    if q_cap == 0 || r_cap == 0 {
        return Err(Error::Domain("tau_QR caps must be positive".into()));
    }
    if x == 0 {
        return Err(Error::BadRange { lo: 1, hi: 0 });
    }
    let mut acc = vec![0i128; x as usize];
    for d in 1..=q_cap.min(x) {
        let t_hi = r_cap.min(x / d);
        for t in 1..=t_hi {
            acc[(d * t - 1) as usize] += 1;
        }
    }
    table_from_i128(1, acc)
}

/// τ_{Q,R} restricted to the window (N, 2N].
pub fn tau_qr_window(q_cap: u64, r_cap: u64, n: u64) -> Result<ValueTable> {
    if q_cap == 0 || r_cap == 0 {
        return Err(Error::Domain("tau_QR caps must be positive".into()));
    }
    if n == 0 {
        return Err(Error::BadRange { lo: 1, hi: 0 });
    }
    let lo = n + 1;
    let hi = 2 * n;
    let mut acc = vec![0i64; n as usize];
    for d in 1..=q_cap.min(hi) {
        // t with N < d·t ≤ 2N and t ≤ R
        let t_lo = n / d + 1;
        let t_hi = r_cap.min(hi / d);
        for t in t_lo..=t_hi {
            acc[(d * t - lo) as usize] += 1;
        }
    }
    ValueTable::from_ints(lo, acc)
}

/// d_k on [1, X]: the k-fold convolution of the constant 1 (k ≥ 2).
pub fn d_k_table(k: u32, x: u64) -> Result<ValueTable> {
    if k < 2 {
        return Err(Error::Domain(format!("d_k needs k >= 2, got {k}")));
    }
    if x == 0 {
        return Err(Error::BadRange { lo: 1, hi: 0 });
    }
    let ones = ValueTable::from_ints(1, vec![1; x as usize])?;
    let mut cur = ones.clone();
    for _ in 1..k {
        cur = dirichlet_convolve(&cur, &ones, x)?;
    }
    Ok(cur)
}

/// τ_{Q,R}∗μ on [1, X] (integer-exact).
///
/// Sometimes labeled the "inverse" transform of τ_{Q,R} although it is a
/// forward Möbius convolution like any other transform; this function
/// takes no position on the name and simply convolves with μ. Whether the
/// result is a sieve transform of bounded range is not settled, so band
/// sums of it should go through the generic table route
/// (`bands::band_sum_table`) rather than a `SieveSpec`.
pub fn tau_qr_mu_table(q_cap: u64, r_cap: u64, x: u64) -> Result<ValueTable> {
    let tau = tau_qr_table(q_cap, r_cap, x)?;
    let mu = mobius_table(x)?;
    dirichlet_convolve(&tau, &mu, x)
}

/// Band discrepancy of τ_{Q,R} against its expected mass:
///
/// ```text
/// Σ_{a≤H} Σ_{n∼N, n≡ar (q)} τ_{Q,R}(n) − H·Q·R/q,   gcd(r, q) = 1
/// ```
///
/// The n-summation runs over the window (N, 2N] (the standing window
/// convention; N is an explicit parameter).
pub fn tau_qr_band_discrepancy(
    q_cap: u64,
    r_cap: u64,
    q: u64,
    r: i64,
    n: u64,
    h: u64,
) -> Result<f64> {
    if q == 0 {
        return Err(Error::Domain("band modulus must be positive".into()));
    }
    if gcd_with_modulus(r, q) != 1 {
        return Err(Error::NotCoprime { r, modulus: q });
    }
    let table = tau_qr_window(q_cap, r_cap, n)?;
    let rs = ResidueSums::compute(&table, q);
    let r_red = r.rem_euclid(q as i64) as u64;
    let (band_total, _) = rs.band_total(r_red, 0, h);
    let expected = (h as u128 * q_cap as u128 * r_cap as u128) as f64 / q as f64;
    Ok(band_total - expected)
}

/// |Σ_{n∼N} d_k(n) e(na/q)| normalized by (Nq)^ε(N/q + q + N^{1−1/k})
/// for each ε of the grid. Requires gcd(a, q) = 1 and q > 1.
pub fn dk_expsum_ratios(
    k: u32,
    n: u64,
    q: u64,
    a: i64,
    eps_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if q <= 1 {
        return Err(Error::Domain("d_k exponential sum needs q > 1".into()));
    }
    if gcd_with_modulus(a, q) != 1 {
        return Err(Error::NotCoprime { r: a, modulus: q });
    }
    let full = d_k_table(k, 2 * n)?;
    let window = ValueTable::new(
        n + 1,
        full.values()[n as usize..].to_vec(),
    )?;
    let rs = ResidueSums::compute(&window, q);
    let a_red = a.rem_euclid(q as i64) as u64;
    let magnitude = rs.exp_combine(a_red).abs();
    let nf = n as f64;
    let qf = q as f64;
    let shape = nf / qf + qf + nf.powf(1.0 - 1.0 / k as f64);
    Ok(eps_grid
        .iter()
        .map(|&eps| (eps, magnitude / ((nf * qf).powf(eps) * shape)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisors;

    #[test]
    fn tau_qr_small_values() {
        let t = tau_qr_table(2, 3, 6).unwrap();
        assert_eq!(t.get_int(6), 1); // only (2, 3)
        assert_eq!(t.get_int(1), 1); // (1, 1)
        assert_eq!(t.get_int(2), 2); // (1, 2), (2, 1)? t <= 3, d <= 2: both
        let t = tau_qr_table(7, 11, 1).unwrap();
        assert_eq!(t.get_int(1), 1);
    }

    #[test]
    fn tau_qr_symmetric_in_caps() {
        let a = tau_qr_table(3, 5, 24).unwrap();
        let b = tau_qr_table(5, 3, 24).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn tau_qr_equals_tau_q_for_large_r() {
        // R >= 2N removes the t-constraint inside [1, 2N]
        let n = 30u64;
        let q_cap = 4u64;
        let a = tau_qr_table(q_cap, 2 * n, 2 * n).unwrap();
        let spec = crate::sieve::SieveSpec::tau_q(q_cap).unwrap();
        for m in 1..=2 * n {
            assert_eq!(a.at(m), spec.eval(m).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn tau_qr_window_matches_full_table() {
        let full = tau_qr_table(5, 7, 80).unwrap();
        let win = tau_qr_window(5, 7, 40).unwrap();
        for (m, v) in win.iter() {
            assert_eq!(v, full.at(m), "m = {m}");
        }
    }

    #[test]
    fn d_k_small_values() {
        let d2 = d_k_table(2, 10).unwrap();
        assert_eq!(d2.get_int(6), 4);
        assert_eq!(d2.get_int(1), 1);
        let d3 = d_k_table(3, 10).unwrap();
        // ordered triples with product 4: (1,1,4)x3 + (1,2,2)x3
        assert_eq!(d3.get_int(4), 6);
        assert_eq!(d3.get_int(1), 1);
        assert!(d_k_table(1, 10).is_err());
    }

    #[test]
    fn d2_summatory_matches_hyperbola_count() {
        let x = 500u64;
        let d2 = d_k_table(2, x).unwrap();
        let total = d2.total_int().unwrap();
        let hyperbola: i128 = (1..=x).map(|d| (x / d) as i128).sum();
        assert_eq!(total, hyperbola);
    }

    #[test]
    fn dk_at_least_one_and_tau_dominated_by_d2() {
        let x = 200u64;
        let d2 = d_k_table(2, x).unwrap();
        let d3 = d_k_table(3, x).unwrap();
        let tau = tau_qr_table(9, 13, x).unwrap();
        for m in 1..=x {
            assert!(d2.get_int(m) >= 1);
            assert!(d3.get_int(m) >= d2.get_int(m));
            assert!(tau.get_int(m) <= d2.get_int(m));
        }
    }

    #[test]
    fn mu_inverse_roundtrip() {
        // (tau_QR * mu) * 1 recovers tau_QR bit-exactly
        let x = 400u64;
        let g = tau_qr_mu_table(6, 9, x).unwrap();
        let back = crate::sieve::sieve_table(&g, x).unwrap();
        let tau = tau_qr_table(6, 9, x).unwrap();
        assert_eq!(back.values(), tau.values());
        assert_eq!(g.get_int(1), 1);
    }

    #[test]
    fn mu_inverse_of_full_square_is_one() {
        // Q = R = X: tau_{X,X} = d_2 on [1, X], whose transform is 1
        let x = 64u64;
        let g = tau_qr_mu_table(x, x, x).unwrap();
        assert_eq!(g.values(), &vec![1.0; x as usize][..]);
    }

    #[test]
    fn band_discrepancy_mass_and_delta_cases() {
        // tau_{1,1} = delta at 1, which never lies in (N, 2N]
        let v = tau_qr_band_discrepancy(1, 1, 7, 2, 50, 3).unwrap();
        assert_eq!(v, -(3.0 / 7.0));
        assert!(tau_qr_band_discrepancy(2, 2, 6, 2, 50, 3).is_err()); // gcd(2,6) > 1

        // H = q covers all residues: total window mass minus HQR/q
        let (q_cap, r_cap, q, n) = (3u64, 4u64, 5u64, 60u64);
        let table = tau_qr_window(q_cap, r_cap, n).unwrap();
        let v = tau_qr_band_discrepancy(q_cap, r_cap, q, 1, n, q).unwrap();
        let expect = table.total() - (q_cap * r_cap) as f64;
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn band_discrepancy_direct_count_oracle() {
        let (q_cap, r_cap, q, r, n, h) = (4u64, 6u64, 7u64, 3i64, 30u64, 2u64);
        let v = tau_qr_band_discrepancy(q_cap, r_cap, q, r, n, h).unwrap();
        // brute force: per n in window, tau by divisor filter
        let mut band = 0.0;
        for m in n + 1..=2 * n {
            let tau: f64 = divisors(m)
                .unwrap()
                .iter()
                .filter(|&&d| d <= q_cap && m / d <= r_cap)
                .count() as f64;
            for a in 1..=h {
                if m % q == ((a as i64 * r).rem_euclid(q as i64)) as u64 {
                    band += tau;
                }
            }
        }
        let expect = band - (h * q_cap * r_cap) as f64 / q as f64;
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn dk_ratio_shapes() {
        let ratios = dk_expsum_ratios(2, 512, 31, 1, &[0.05, 0.1, 0.2]).unwrap();
        assert_eq!(ratios.len(), 3);
        for &(_, v) in &ratios {
            assert!(v >= 0.0);
        }
        // larger eps enlarges the denominator when Nq > 1
        assert!(ratios[2].1 <= ratios[0].1);
        assert!(dk_expsum_ratios(2, 64, 1, 1, &[0.1]).is_err());
        assert!(dk_expsum_ratios(2, 64, 6, 3, &[0.1]).is_err());
    }
}
