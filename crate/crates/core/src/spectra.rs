//! Ramanujan coefficients, exponential sums at rationals, and residual
//! reports against the main term.
//!
//! For a sieve function f of range Q the coefficient
//! R_ℓ(f) = Σ_{d≤Q, ℓ|d} g(d)/d admits the equivalent short form
//! (1/ℓ)·Σ_{m≤Q/ℓ} g(ℓm)/m; both are evaluated on every call and must
//! agree, which turns the identity into a standing self-check. Exponential
//! sums f̂_N(j/ℓ) = Σ_{n∼N} f(n) e(nj/ℓ) are computed by residue
//! aggregation: exact class sums S_c first, a single complex combination
//! last.

use crate::arith::{gcd, nearest_int_distance};
use crate::complex::ComplexValue;
use crate::residue::ResidueSums;
use crate::sieve::SieveSpec;
use crate::table::ValueTable;
use crate::{Error, Result};

/// Relative tolerance for the two R_ℓ evaluation paths (with an absolute
/// floor of the same size, so cancellation near zero cannot false-alarm).
const R_ELL_PATH_TOL: f64 = 1e-12;

/// Denominator guard for the closed-form geometric character sum.
const GEOM_SUM_GUARD: f64 = 1e-12;

/// A reduced rational point j/ℓ in [0, 1); (0, 1) is the point 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    j: u64,
    ell: u64,
}

impl RationalPoint {
    /// Validate an already-reduced pair: 0 ≤ j < ℓ, gcd(j, ℓ) = 1 for
    /// j > 0, and j = 0 only with ℓ = 1.
    pub fn new(j: u64, ell: u64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Domain("rational point with denominator 0".into()));
        }
        if j >= ell {
            return Err(Error::Domain(format!("point {j}/{ell} is not reduced into [0, 1)")));
        }
        if j == 0 && ell != 1 {
            return Err(Error::Domain(format!("zero point must be 0/1, got 0/{ell}")));
        }
        if j > 0 && gcd(j, ell) != 1 {
            return Err(Error::Domain(format!("point {j}/{ell} is not in lowest terms")));
        }
        Ok(Self { j, ell })
    }

    /// Reduce an arbitrary integer numerator t mod ℓ into canonical form.
    pub fn reduce(t: i64, ell: u64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Domain("rational point with denominator 0".into()));
        }
        let j0 = t.rem_euclid(ell as i64) as u64;
        let g = gcd(j0, ell);
        if j0 == 0 {
            return Ok(Self { j: 0, ell: 1 });
        }
        Ok(Self {
            j: j0 / g,
            ell: ell / g,
        })
    }

    pub fn zero() -> Self {
        Self { j: 0, ell: 1 }
    }

    pub fn numerator(&self) -> u64 {
        self.j
    }

    pub fn denominator(&self) -> u64 {
        self.ell
    }

    pub fn value(&self) -> f64 {
        self.j as f64 / self.ell as f64
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.j, self.ell)
    }
}

/// ℓth Ramanujan coefficient R_ℓ(f) = Σ_{d≡0 (ℓ), d≤Q} g(d)/d.
///
/// Both the divisor-indexed sum and the rescaled form
/// (1/ℓ)·Σ_{m≤Q/ℓ} g(ℓm)/m are evaluated; they must agree to 1e-12
/// (relative, floored at 1). A mismatch is an arithmetic bug, so it
/// panics rather than returning an error. The rescaled value (fewer
/// operations) is returned.
pub fn ramanujan_coefficient(spec: &SieveSpec, ell: u64) -> f64 {
    assert!(ell >= 1, "Ramanujan coefficient needs ell >= 1");
    let g = spec.transform();
    let q = spec.range();

    let mut by_divisors = 0.0f64;
    let mut d = ell;
    while d <= q {
        by_divisors += g.at(d) / d as f64;
        d += ell;
    }

    let mut rescaled = 0.0f64;
    let m_hi = q / ell;
    for m in 1..=m_hi {
        rescaled += g.at(ell * m) / m as f64;
    }
    rescaled /= ell as f64;

    let scale = by_divisors.abs().max(rescaled.abs()).max(1.0);
    assert!(
        (by_divisors - rescaled).abs() <= R_ELL_PATH_TOL * scale,
        "Ramanujan coefficient paths disagree at ell = {ell}: {by_divisors} vs {rescaled}"
    );
    rescaled
}

/// f̂_N(j/ℓ) from a precomputed window table.
///
/// Residue aggregation: exact class sums S_c = Σ_{n≡c (ℓ)} f(n), then one
/// complex combination Σ_c S_c·e(cj/ℓ) with every phase reduced mod ℓ.
pub fn exp_sum_rational_in(table: &ValueTable, pt: RationalPoint) -> ComplexValue {
    ResidueSums::compute(table, pt.denominator()).exp_combine(pt.numerator())
}

/// f̂_N(j/ℓ) = Σ_{n∼N} f(n) e(nj/ℓ), sieving the window internally.
pub fn exp_sum_rational(spec: &SieveSpec, n: u64, pt: RationalPoint) -> Result<ComplexValue> {
    Ok(exp_sum_rational_in(&spec.eval_window(n)?, pt))
}

/// Direct Σ f(n)·e(nα) over a window table: the brute-force oracle for
/// `exp_sum_rational` and the evaluator for irrational α.
pub fn exp_sum_real_in(table: &ValueTable, alpha: f64) -> ComplexValue {
    let mut acc = ComplexValue::ZERO;
    for (n, v) in table.iter() {
        if v == 0.0 {
            continue;
        }
        acc += ComplexValue::unit_phase(n as f64 * alpha).scale(v);
    }
    acc
}

/// f̂_N(α) by direct summation.
pub fn exp_sum_real(spec: &SieveSpec, n: u64, alpha: f64) -> Result<ComplexValue> {
    Ok(exp_sum_real_in(&spec.eval_window(n)?, alpha))
}

/// Geometric character sum Σ_{a=1..h} e(a·j/ℓ).
///
/// Closed form z·(z^h − 1)/(z − 1) with z = e(j/ℓ) and both powers
/// reduced mod ℓ; falls back to direct summation when ‖j/ℓ‖ < 1e-12
/// (that near-wraparound regime would make the denominator unreliable).
pub fn char_interval_sum(j: u64, ell: u64, h: u64) -> ComplexValue {
    assert!(ell >= 1);
    let jr = j % ell;
    if jr == 0 {
        return ComplexValue::new(h as f64, 0.0);
    }
    if nearest_int_distance(jr as f64 / ell as f64) < GEOM_SUM_GUARD {
        let mut acc = ComplexValue::ZERO;
        for a in 1..=h {
            acc += ComplexValue::root_of_unity(a % ell * jr % ell, ell);
        }
        return acc;
    }
    let z = ComplexValue::root_of_unity(jr, ell);
    let zh = ComplexValue::root_of_unity((jr as u128 * (h as u128 % ell as u128) % ell as u128) as u64, ell);
    z * (zh - ComplexValue::ONE) / (z - ComplexValue::ONE)
}

/// One residual measurement of f̂_N(j/ℓ) against its main term R_ℓ(f)·N.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub point: RationalPoint,
    pub fhat: ComplexValue,
    pub r_ell: f64,
    /// |f̂_N(j/ℓ) − R_ℓ(f)·N|.
    pub residual: f64,
    /// Per-ε normalized residuals: residual / ((ℓQ)^ε · (Q + ℓ)).
    pub normalized: Vec<(f64, f64)>,
}

/// Measure the residual of f̂_N at a rational point against R_ℓ(f)·N and
/// normalize by (ℓQ)^ε(Q+ℓ) for each ε of the grid.
///
/// Points with ℓ = 1 are reported too (the main-term relation is only
/// claimed for ℓ > 1, so nothing is asserted about them anywhere).
pub fn main_term_residual(
    spec: &SieveSpec,
    n: u64,
    pt: RationalPoint,
    eps_grid: &[f64],
) -> Result<ResidualReport> {
    let table = spec.eval_window(n)?;
    Ok(main_term_residual_in(&table, spec, n, pt, eps_grid))
}

/// Residual report from a precomputed window table (shared across points).
pub fn main_term_residual_in(
    table: &ValueTable,
    spec: &SieveSpec,
    n: u64,
    pt: RationalPoint,
    eps_grid: &[f64],
) -> ResidualReport {
    let fhat = exp_sum_rational_in(table, pt);
    let r_ell = ramanujan_coefficient(spec, pt.denominator());
    let main = r_ell * n as f64;
    let residual = (fhat - ComplexValue::new(main, 0.0)).abs();
    let q = spec.range();
    let ell = pt.denominator();
    let normalized = eps_grid
        .iter()
        .map(|&eps| {
            let denom = ((ell * q) as f64).powf(eps) * (q + ell) as f64;
            (eps, residual / denom)
        })
        .collect();
    ResidualReport {
        point: pt,
        fhat,
        r_ell,
        residual,
        normalized,
    }
}
