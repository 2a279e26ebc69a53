//! Grid descriptors for sweep parameters.
//!
//! Three forms:
//!   `3,5,7`        explicit values
//!   `1024:65536:7` geometric progression, 7 points from 1024 to 65536
//!   `pow:0.5`      derived per N as ⌊N^e⌋ (for q, Q, H grids)

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone)]
pub enum Grid {
    Values(Vec<u64>),
    Geometric { from: u64, to: u64, steps: u32 },
    PowOfN(f64),
}

impl Grid {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(exp) = s.strip_prefix("pow:") {
            let e: f64 = exp.parse().context("invalid exponent in pow: grid")?;
            if !e.is_finite() || e < 0.0 {
                bail!("pow: exponent must be finite and nonnegative, got {exp}");
            }
            return Ok(Grid::PowOfN(e));
        }
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                bail!("geometric grid must be from:to:steps, got {s:?}");
            }
            let from: u64 = parts[0].parse().context("invalid grid start")?;
            let to: u64 = parts[1].parse().context("invalid grid end")?;
            let steps: u32 = parts[2].parse().context("invalid grid step count")?;
            if from == 0 || to < from || steps == 0 {
                bail!("geometric grid needs 0 < from <= to and steps >= 1, got {s:?}");
            }
            return Ok(Grid::Geometric { from, to, steps });
        }
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<u64>().context("invalid grid value"))
            .collect::<Result<Vec<u64>>>()?;
        if values.is_empty() || values.contains(&0) {
            bail!("grid values must be positive, got {s:?}");
        }
        Ok(Grid::Values(values))
    }

    /// Expand into concrete points; `n` feeds the pow: form.
    pub fn expand(&self, n: Option<u64>) -> Result<Vec<u64>> {
        match self {
            Grid::Values(v) => Ok(v.clone()),
            Grid::Geometric { from, to, steps } => {
                if *steps == 1 {
                    return Ok(vec![*from]);
                }
                let ratio = *to as f64 / *from as f64;
                let mut pts = Vec::with_capacity(*steps as usize);
                for i in 0..*steps {
                    let x = *from as f64 * ratio.powf(i as f64 / (*steps - 1) as f64);
                    let v = x.round().max(1.0) as u64;
                    if pts.last() != Some(&v) {
                        pts.push(v);
                    }
                }
                Ok(pts)
            }
            Grid::PowOfN(e) => {
                let n = n.ok_or_else(|| {
                    anyhow::anyhow!("pow: grid needs an enclosing N value")
                })?;
                Ok(vec![floor_pow(n, *e)])
            }
        }
    }
}

/// ⌊n^e⌋, exact at perfect powers.
///
/// powf(1/m) can land one ulp below an integer m-th root, so exponents
/// that are reciprocals of integers (square, cube, fifth roots, ...)
/// are computed by exact integer root extraction.
pub fn floor_pow(n: u64, e: f64) -> u64 {
    if e == 0.0 {
        return 1;
    }
    let inv = 1.0 / e;
    let m = inv.round();
    if (inv - m).abs() < 1e-9 && (1.0..=63.0).contains(&m) {
        return floor_root(n, m as u32);
    }
    ((n as f64).powf(e).floor() as u64).max(1)
}

/// Largest k with k^m ≤ n (exact u128 arithmetic).
fn floor_root(n: u64, m: u32) -> u64 {
    if m == 1 || n <= 1 {
        return n.max(1);
    }
    let mut k = (n as f64).powf(1.0 / m as f64).floor() as u64;
    k = k.max(1);
    let pow = |k: u64| -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..m {
            acc = acc.checked_mul(k as u128)?;
            if acc > u64::MAX as u128 {
                return Some(acc);
            }
        }
        Some(acc)
    };
    while pow(k + 1).is_some_and(|p| p <= n as u128) {
        k += 1;
    }
    while k > 1 && pow(k).is_none_or(|p| p > n as u128) {
        k -= 1;
    }
    k
}

/// Signed value list for the r and b grids.
pub fn parse_signed_list(s: &str) -> Result<Vec<i64>> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<i64>().context("invalid list value"))
        .collect::<Result<Vec<i64>>>()?;
    if values.is_empty() {
        bail!("empty value list");
    }
    Ok(values)
}

/// ε grid: positive reals.
pub fn parse_eps_list(s: &str) -> Result<Vec<f64>> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().context("invalid epsilon"))
        .collect::<Result<Vec<f64>>>()?;
    if values.is_empty() || values.iter().any(|&e| !e.is_finite() || e <= 0.0) {
        bail!("epsilon grid must be positive reals, got {s:?}");
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        let g = Grid::parse("3,5, 7").unwrap();
        assert_eq!(g.expand(None).unwrap(), vec![3, 5, 7]);
        assert!(Grid::parse("3,0,7").is_err());
        assert!(Grid::parse("a,b").is_err());
    }

    #[test]
    fn geometric_powers_of_two() {
        let g = Grid::parse("1024:65536:7").unwrap();
        assert_eq!(
            g.expand(None).unwrap(),
            vec![1024, 2048, 4096, 8192, 16384, 32768, 65536]
        );
        let g = Grid::parse("10:10:1").unwrap();
        assert_eq!(g.expand(None).unwrap(), vec![10]);
        assert!(Grid::parse("10:5:3").is_err());
    }

    #[test]
    fn pow_of_n_grids() {
        let g = Grid::parse("pow:0.5").unwrap();
        assert_eq!(g.expand(Some(16384)).unwrap(), vec![128]);
        let g = Grid::parse("pow:0.3333333333333333").unwrap();
        assert_eq!(g.expand(Some(16384)).unwrap(), vec![25]);
        assert!(g.expand(None).is_err());
        assert!(Grid::parse("pow:-1").is_err());
    }

    #[test]
    fn floor_pow_exact_at_perfect_powers() {
        // naive powf+floor would report 3, 15 and 31 here
        assert_eq!(floor_pow(64, 1.0 / 3.0), 4);
        assert_eq!(floor_pow(4096, 1.0 / 3.0), 16);
        assert_eq!(floor_pow(1 << 15, 1.0 / 3.0), 32);
        assert_eq!(floor_pow(1 << 10, 1.0 / 3.0), 10);
        assert_eq!(floor_pow(16384, 0.2), 6);
        assert_eq!(floor_pow(10_000, 0.5), 100);
        assert_eq!(floor_pow(99, 0.5), 9);
        assert_eq!(floor_pow(7, 0.0), 1);
        assert_eq!(floor_pow(1, 0.25), 1);
    }

    #[test]
    fn signed_and_eps_lists() {
        assert_eq!(parse_signed_list("1,-3,0").unwrap(), vec![1, -3, 0]);
        assert!(parse_signed_list("").is_err());
        assert_eq!(parse_eps_list("0.05,0.1").unwrap(), vec![0.05, 0.1]);
        assert!(parse_eps_list("0,-0.1").is_err());
    }
}
