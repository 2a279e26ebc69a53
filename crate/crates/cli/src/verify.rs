//! Seeded verification suites behind `sieve-bands verify <suite>`.
//!
//! Each check re-derives one of the toolkit's identities on random
//! instances drawn from a printed 64-bit seed; any failure reports the
//! full instance parameters so it can be replayed.

use std::time::Instant;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sieve_bands::arith::gcd;
use sieve_bands::bands::{
    band_sum_decomposition_in, band_sum_direct_in, length_inertia_split, BandParams,
};
use sieve_bands::divisor_models::{dk_expsum_ratios, tau_qr_mu_table, tau_qr_table};
use sieve_bands::extremal::build_extremal;
use sieve_bands::sieve::{eratosthenes_transform, sieve_table};
use sieve_bands::spectra::{
    exp_sum_rational_in, exp_sum_real_in, main_term_residual, main_term_residual_in,
    ramanujan_coefficient, RationalPoint,
};
use sieve_bands::{SieveSpec, ValueTable};

pub const SUITES: &[&str] = &[
    "identities",
    "spectra",
    "roundtrips",
    "extremal",
    "constants",
    "all",
];

type Check = (&'static str, Box<dyn Fn(u64) -> Result<(), String>>);

fn random_spec(rng: &mut ChaCha8Rng, max_q: u64) -> SieveSpec {
    let q = rng.random_range(1..=max_q);
    let vals: Vec<i64> = (0..q).map(|_| rng.random_range(-3..=3)).collect();
    SieveSpec::new(ValueTable::from_ints(1, vals).unwrap(), "random").unwrap()
}

fn random_coprime(rng: &mut ChaCha8Rng, q: u64) -> i64 {
    loop {
        let r = rng.random_range(-(q as i64)..=(q as i64));
        if gcd(r.rem_euclid(q as i64) as u64, q) == 1 {
            return r;
        }
    }
}

fn check_worked_band_example(_seed: u64) -> Result<(), String> {
    let spec = SieveSpec::tau_q(2).unwrap();
    let p = BandParams::new(3, 1, 0, 4, 1).map_err(|e| e.to_string())?;
    let table = spec.eval_window(4).map_err(|e| e.to_string())?;
    let direct = band_sum_direct_in(&table, &p);
    let decomp = band_sum_decomposition_in(&table, &p).map_err(|e| e.to_string())?;
    if direct.t != -1.0 {
        return Err(format!("direct T = {}, expected -1", direct.t));
    }
    if (decomp.t + 1.0).abs() > 1e-10 {
        return Err(format!("decomposition T = {}, expected -1", decomp.t));
    }
    Ok(())
}

fn check_direct_vs_decomposition(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..25 {
        let spec = random_spec(&mut rng, 128);
        let n = rng.random_range(100..=8_000u64);
        let q = rng.random_range(2..=300u64);
        let h = rng.random_range(1..=q);
        let r = random_coprime(&mut rng, q);
        let b = rng.random_range(-(q as i64)..=(q as i64));
        let p = BandParams::new(q, r, b, n, h).map_err(|e| e.to_string())?;
        let table = spec.eval_window(n).map_err(|e| e.to_string())?;
        let direct = band_sum_direct_in(&table, &p);
        let decomp = band_sum_decomposition_in(&table, &p).map_err(|e| e.to_string())?;
        let tol = 1e-8 * (1.0 + table.abs_total());
        if (direct.t - decomp.t).abs() > tol {
            return Err(format!(
                "case {case} (seed {seed}): q={q} r={r} b={b} N={n} H={h} Q={}: direct {} vs decomposition {} (tol {tol})",
                spec.range(), direct.t, decomp.t
            ));
        }
    }
    Ok(())
}

fn check_length_inertia(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    for case in 0..10 {
        let spec = random_spec(&mut rng, 64);
        let n = rng.random_range(50..=4_000u64);
        let q = rng.random_range(2..=200u64);
        let h_total = rng.random_range(1..=q);
        let h = rng.random_range(1..=h_total);
        let split = length_inertia_split(&spec, q, n, h_total, h).map_err(|e| e.to_string())?;
        let long = split.long.exact.expect("integer path").scaled_t(q, split.truncated_len);
        let parts: i128 = split
            .parts
            .iter()
            .map(|p| p.exact.expect("integer path").scaled_t(q, h))
            .sum();
        if long != parts {
            return Err(format!(
                "case {case} (seed {seed}): q={q} N={n} H={h_total} h={h}: q*T {long} != sum {parts}"
            ));
        }
    }
    Ok(())
}

fn check_complete_band(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
    for _ in 0..10 {
        let spec = random_spec(&mut rng, 64);
        let q = rng.random_range(2..=200u64);
        let n = rng.random_range(q..=4_000u64);
        let p = BandParams::new(q, 1, 0, n, q).map_err(|e| e.to_string())?;
        let table = spec.eval_window(n).map_err(|e| e.to_string())?;
        let t = band_sum_direct_in(&table, &p).t;
        if t != 0.0 {
            return Err(format!("seed {seed}: q={q} N={n}: complete band T = {t}, expected 0"));
        }
    }
    Ok(())
}

fn check_coefficient_paths(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x33);
    for _ in 0..5 {
        let spec = random_spec(&mut rng, 512);
        let q = spec.range();
        for ell in 1..=q {
            // the two evaluation paths assert agreement internally
            let r = ramanujan_coefficient(&spec, ell);
            let bound =
                spec.sup_norm() * (1.0 + (q as f64 / ell as f64).max(1.0).ln()) / ell as f64;
            if r.abs() > bound * (1.0 + 1e-12) {
                return Err(format!(
                    "seed {seed}: Q={q} ell={ell}: |R| = {} above bound {bound}",
                    r.abs()
                ));
            }
        }
    }
    Ok(())
}

fn check_exp_sum_oracle(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44);
    for case in 0..50 {
        let spec = random_spec(&mut rng, 64);
        let n = rng.random_range(1..=10_000u64);
        let ell = rng.random_range(2..=100u64);
        let j = loop {
            let j = rng.random_range(1..ell);
            if gcd(j, ell) == 1 {
                break j;
            }
        };
        let pt = RationalPoint::new(j, ell).unwrap();
        let table = spec.eval_window(n).map_err(|e| e.to_string())?;
        let fast = exp_sum_rational_in(&table, pt);
        let brute = exp_sum_real_in(&table, pt.value());
        let tol = 1e-9 * table.abs_total();
        if (fast - brute).abs() > tol {
            return Err(format!(
                "case {case} (seed {seed}): N={n} point {pt}: residue-aggregated vs direct differ by {}",
                (fast - brute).abs()
            ));
        }
    }
    Ok(())
}

fn check_hermitian_symmetry(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
    let spec = random_spec(&mut rng, 32);
    let n = 2_000u64;
    let table = spec.eval_window(n).map_err(|e| e.to_string())?;
    for ell in [5u64, 8, 13] {
        for j in 1..ell {
            if gcd(j, ell) != 1 {
                continue;
            }
            let a = exp_sum_rational_in(&table, RationalPoint::new(j, ell).unwrap());
            let b = exp_sum_rational_in(&table, RationalPoint::new(ell - j, ell).unwrap());
            if (a - b.conj()).abs() > 1e-9 * (1.0 + table.abs_total()) {
                return Err(format!("seed {seed}: {j}/{ell}: conjugate symmetry broken"));
            }
        }
    }
    Ok(())
}

fn check_const_one_residual(_seed: u64) -> Result<(), String> {
    let spec = SieveSpec::const_one();
    for (j, ell) in [(1u64, 3u64), (1, 2), (3, 7), (7, 50)] {
        let pt = RationalPoint::new(j, ell).unwrap();
        let rep = main_term_residual(&spec, 1_000, pt, &[0.1]).map_err(|e| e.to_string())?;
        if rep.r_ell != 0.0 {
            return Err(format!("{pt}: R should vanish for f = 1, got {}", rep.r_ell));
        }
        let cap = 1.0 / (2.0 * sieve_bands::arith::nearest_int_distance(pt.value()));
        if rep.residual > cap + 1e-9 {
            return Err(format!("{pt}: geometric residual {} above 1/(2||a||) = {cap}", rep.residual));
        }
    }
    Ok(())
}

fn check_transform_roundtrip(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x66);
    for case in 0..10 {
        let q = rng.random_range(1..=256u64);
        let vals: Vec<i64> = (0..q).map(|_| rng.random_range(-3..=3)).collect();
        let g = ValueTable::from_ints(1, vals).unwrap();
        let x = rng.random_range(q..=q + 200);
        let f = sieve_table(&g, x).map_err(|e| e.to_string())?;
        let back = eratosthenes_transform(&f).map_err(|e| e.to_string())?;
        for d in 1..=x {
            if back.get_int(d) != g.get_int(d) {
                return Err(format!(
                    "case {case} (seed {seed}): Q={q} X={x}: transform mismatch at d={d}"
                ));
            }
        }
    }
    Ok(())
}

fn check_tau_qr_mu_roundtrip(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    for case in 0..10 {
        let q_cap = rng.random_range(1..=40u64);
        let r_cap = rng.random_range(1..=40u64);
        let x = rng.random_range(10..=600u64);
        let g = tau_qr_mu_table(q_cap, r_cap, x).map_err(|e| e.to_string())?;
        let back = sieve_table(&g, x).map_err(|e| e.to_string())?;
        let tau = tau_qr_table(q_cap, r_cap, x).map_err(|e| e.to_string())?;
        if back.values() != tau.values() {
            return Err(format!(
                "case {case} (seed {seed}): Q={q_cap} R={r_cap} X={x}: inverse-transform roundtrip broke"
            ));
        }
    }
    Ok(())
}

fn check_extremal_worked_instance(_seed: u64) -> Result<(), String> {
    let inst = build_extremal(5, 3, 12, 1).map_err(|e| e.to_string())?;
    let signs: Vec<i64> = (4..=6).map(|d| inst.signs().get_int(d)).collect();
    if signs != vec![1, -1, -1] {
        return Err(format!("signs {signs:?}, expected [1, -1, -1]"));
    }
    if inst.s_size() != 1 || inst.e_size() != 2 {
        return Err(format!("|S| = {}, |E| = {}", inst.s_size(), inst.e_size()));
    }
    let (lhs, rhs) = inst.identity_sides().map_err(|e| e.to_string())?;
    if (rhs - 1.2).abs() > 1e-12 || (lhs - rhs).abs() > 1e-8 * (1.0 + rhs) {
        return Err(format!("identity sides {lhs} vs {rhs}, expected 1.2"));
    }
    Ok(())
}

fn check_extremal_identity_random(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x88);
    for case in 0..10 {
        let range = rng.random_range(2..=60u64);
        let q = rng.random_range(range + 1..=2 * range);
        let n = rng.random_range(10..=20_000u64);
        let h = rng.random_range(1..=q.min(20));
        let inst = build_extremal(q, range, n, h).map_err(|e| e.to_string())?;
        let (lhs, rhs) = inst.identity_sides().map_err(|e| e.to_string())?;
        if (lhs - rhs).abs() > 1e-8 * (1.0 + rhs) {
            return Err(format!(
                "case {case} (seed {seed}): q={q} Q={range} N={n} H={h}: |T| = {lhs} vs sum |inner| = {rhs}"
            ));
        }
        // sign structure
        for (i, (d, v)) in inst.inner().iter().enumerate() {
            if inst.signs().at(d) * v != v.abs() {
                return Err(format!("case {case}: sgn*inner != |inner| at d={d}"));
            }
            if inst.hit_counts()[i] == 0 {
                let expect = -((h * inst.m_counts()[i]) as f64) / q as f64;
                if v != expect {
                    return Err(format!("case {case}: miss-class inner at d={d} not exact"));
                }
            }
        }
    }
    Ok(())
}

fn check_frozen_baselines(_seed: u64) -> Result<(), String> {
    let spec = SieveSpec::tau_q(16).unwrap();
    let rep = main_term_residual(&spec, 1 << 12, RationalPoint::new(1, 3).unwrap(), &[0.1])
        .map_err(|e| e.to_string())?;
    if (rep.residual - 4.330_141_274_459_586).abs() > 1e-9 * 4.33 {
        return Err(format!("residual baseline drifted: {}", rep.residual));
    }
    let ratios = dk_expsum_ratios(2, 1 << 12, 101, 1, &[0.05, 0.1, 0.2]).map_err(|e| e.to_string())?;
    if (ratios[1].1 - 0.403_188_972_052_787).abs() > 1e-9 {
        return Err(format!("d_2 ratio baseline drifted: {}", ratios[1].1));
    }
    if !(ratios[2].1 <= ratios[1].1 && ratios[1].1 <= ratios[0].1) {
        return Err("normalized ratio not monotone in eps".into());
    }
    Ok(())
}

fn check_residual_stability_mini(_seed: u64) -> Result<(), String> {
    // small version of the constant-stability scan: N = 2^10..2^13
    let mut per_n = Vec::new();
    for e in 10..=13u32 {
        let n = 1u64 << e;
        let big_q = (n as f64).powf(1.0 / 3.0).floor() as u64;
        let spec = SieveSpec::tau_q(big_q).map_err(|e| e.to_string())?;
        let table = spec.eval_window(n).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for ell in 2..=20u64 {
            for j in 1..ell {
                if gcd(j, ell) != 1 {
                    continue;
                }
                let pt = RationalPoint::new(j, ell).unwrap();
                let rep = main_term_residual_in(&table, &spec, n, pt, &[0.1]);
                worst = worst.max(rep.normalized[0].1);
            }
        }
        per_n.push(worst);
    }
    let mut sorted = per_n.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let last = *per_n.last().unwrap();
    if last > 2.0 * median {
        return Err(format!(
            "normalized residual grows: last {last} vs median {median} (ratio {})",
            last / median
        ));
    }
    Ok(())
}

fn suite_checks(suite: &str) -> Result<Vec<Check>> {
    let mut checks: Vec<Check> = Vec::new();
    let mut add = |name: &'static str, f: fn(u64) -> Result<(), String>| {
        checks.push((name, Box::new(f)));
    };
    match suite {
        "identities" => {
            add("worked band example", check_worked_band_example);
            add("direct vs decomposition x25", check_direct_vs_decomposition);
            add("length inertia exact split x10", check_length_inertia);
            add("complete band cancellation x10", check_complete_band);
        }
        "spectra" => {
            add("coefficient paths + magnitude bound", check_coefficient_paths);
            add("exp-sum residue aggregation vs direct x50", check_exp_sum_oracle);
            add("conjugate symmetry", check_hermitian_symmetry);
            add("constant-function geometric residual", check_const_one_residual);
        }
        "roundtrips" => {
            add("transform roundtrip x10", check_transform_roundtrip);
            add("tau_QR inverse-transform roundtrip x10", check_tau_qr_mu_roundtrip);
        }
        "extremal" => {
            add("worked extremal instance (5,3,12,1)", check_extremal_worked_instance);
            add("absolute-value identity x10", check_extremal_identity_random);
        }
        "constants" => {
            add("frozen regression baselines", check_frozen_baselines);
            add("normalized residual stability (mini)", check_residual_stability_mini);
        }
        "all" => {
            for s in SUITES.iter().filter(|&&s| s != "all") {
                checks.extend(suite_checks(s)?);
            }
        }
        other => bail!(
            "unknown suite {other:?}; available: {}",
            SUITES.join(", ")
        ),
    }
    Ok(checks)
}

/// Run one suite; returns Ok(true) when every check passed.
pub fn run_suite(suite: &str, seed: u64) -> Result<bool> {
    let checks = suite_checks(suite)?;
    println!("suite {suite} (seed {seed})");
    let mut all_ok = true;
    for (name, check) in checks {
        let start = Instant::now();
        match check(seed) {
            Ok(()) => {
                println!("[ ok ] {name} ({:.1} ms)", start.elapsed().as_secs_f64() * 1e3);
            }
            Err(msg) => {
                all_ok = false;
                println!(
                    "[FAIL] {name} ({:.1} ms): {msg}",
                    start.elapsed().as_secs_f64() * 1e3
                );
            }
        }
    }
    Ok(all_ok)
}
