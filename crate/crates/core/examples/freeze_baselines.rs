//! One-shot computation of the regression baselines that the test suite
//! freezes. Each value is computed by two independent routes and printed
//! only when they agree.

use sieve_bands::bands::{band_sum_decomposition_in, band_sum_direct_in, bound_ratios, BandParams};
use sieve_bands::divisor_models::dk_expsum_ratios;
use sieve_bands::spectra::{exp_sum_real_in, main_term_residual, RationalPoint};
use sieve_bands::SieveSpec;

fn main() {
    // residual baseline: f = tau_Q, N = 2^12, Q = 16, point 1/3
    let spec = SieveSpec::tau_q(16).unwrap();
    let n = 1u64 << 12;
    let pt = RationalPoint::new(1, 3).unwrap();
    let rep = main_term_residual(&spec, n, pt, &[0.1]).unwrap();
    let table = spec.eval_window(n).unwrap();
    let brute = exp_sum_real_in(&table, pt.value());
    let diff = (rep.fhat - brute).abs();
    assert!(diff <= 1e-9 * table.abs_total(), "exp-sum routes disagree: {diff}");
    println!("residual_tauq_n4096_q16_pt_1_3 = {:.17e}", rep.residual);

    // bound-ratio baseline: f = tau_Q with Q = floor(N^(1/3)), N = 2^14,
    // q = floor(sqrt(N)), H = floor(N^0.2), eps = 0.1
    let n = 1u64 << 14;
    let big_q = (n as f64).powf(1.0 / 3.0).floor() as u64;
    let q = (n as f64).sqrt().floor() as u64;
    let h = (n as f64).powf(0.2).floor() as u64;
    println!("derived: Q = {big_q}, q = {q}, H = {h}");
    let spec = SieveSpec::tau_q(big_q).unwrap();
    let p = BandParams::new(q, 1, 0, n, h).unwrap();
    let table = spec.eval_window(n).unwrap();
    let direct = band_sum_direct_in(&table, &p);
    let decomp = band_sum_decomposition_in(&table, &p).unwrap();
    let tol = 1e-8 * (1.0 + table.abs_total());
    assert!((direct.t - decomp.t).abs() <= tol, "band routes disagree");
    let rep = bound_ratios(&direct, &spec, &p, &[0.1]);
    println!("t_tauq_n16384 = {:.17e}", direct.t);
    println!("bound_ratio_eps01 = {:.17e}", rep.rows[0].bound_ratio);

    // d_k constant baseline: k = 2, N = 2^12, q = 101, a = 1, eps = 0.1
    let ratios = dk_expsum_ratios(2, 1 << 12, 101, 1, &[0.1]).unwrap();
    println!("dk2_ratio_eps01 = {:.17e}", ratios[0].1);

    // residual stability: f = tau_Q, Q = floor(N^(1/3)), all j/l with
    // l <= 50, per-N max of the eps = 0.1 normalized residual
    let mut per_n = Vec::new();
    for e in 10..=16u32 {
        let n = 1u64 << e;
        let big_q = (n as f64).powf(1.0 / 3.0).floor() as u64;
        let spec = SieveSpec::tau_q(big_q).unwrap();
        let table = spec.eval_window(n).unwrap();
        let mut worst = 0.0f64;
        for ell in 2..=50u64 {
            for j in 1..ell {
                if sieve_bands::arith::gcd(j, ell) != 1 {
                    continue;
                }
                let pt = RationalPoint::new(j, ell).unwrap();
                let rep = sieve_bands::spectra::main_term_residual_in(&table, &spec, n, pt, &[0.1]);
                worst = worst.max(rep.normalized[0].1);
            }
        }
        per_n.push(worst);
        println!("stability N=2^{e}: Q={big_q} max_norm_residual={worst:.6}");
    }
    let mut sorted = per_n.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    println!(
        "stability: last/median = {:.4} (criterion <= 2)",
        per_n.last().unwrap() / median
    );

    // extremal calibration: N = 1e5, H = 10, Q = 1800, 10 sampled q
    let (n, h, big_q) = (100_000u64, 10u64, 1800u64);
    let mut min_ratio = f64::INFINITY;
    let mut max_sfrac = 0.0f64;
    for i in 0..10u64 {
        let q = 1801 + i * (2000 - 1801) / 9;
        let inst = sieve_bands::extremal::build_extremal(q, big_q, n, h).unwrap();
        let rep = inst.lower_bound_report().unwrap();
        let (lhs, rhs) = inst.identity_sides().unwrap();
        assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + rhs));
        println!(
            "extremal q={q}: ratio={:.6} s_fraction={:.6} |S|={} majorant={}",
            rep.ratio, rep.s_fraction, rep.s_size, rep.s_majorant
        );
        min_ratio = min_ratio.min(rep.ratio);
        max_sfrac = max_sfrac.max(rep.s_fraction);
    }
    println!("extremal calibration: min_ratio={min_ratio:.6} max_s_fraction={max_sfrac:.6}");
}
