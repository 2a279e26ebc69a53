//! Sieve functions and their Eratosthenes transforms.
//!
//! A sieve function of range Q is f(n) = Σ_{d|n, d≤Q} g(d); the table g on
//! [1, Q] is the Eratosthenes transform f∗μ. `SieveSpec` owns g densely,
//! evaluates f pointwise (divisor enumeration) or on a window (N, 2N]
//! (one sieving pass over the multiples of each d), and inverts f-tables
//! back to g by convolution with μ.

use rayon::prelude::*;

use crate::arith::{dirichlet_convolve, divisors, mobius_table};
use crate::table::{table_from_i128, ValueTable};
use crate::{Error, Result};

/// Window length above which `eval_window` partitions the output across
/// rayon workers. Chunks accumulate divisors in the same ascending-d order
/// as the serial loop, so the result is bit-identical either way.
const PAR_WINDOW_THRESHOLD: u64 = 1 << 17;
const PAR_CHUNK_LEN: usize = 1 << 15;

/// A sieve function, represented by its Eratosthenes transform g on [1, Q].
#[derive(Debug, Clone)]
pub struct SieveSpec {
    g: ValueTable,
    label: String,
    sup_norm: f64,
}

impl SieveSpec {
    /// Wrap a transform table; g must start at 1. Records sup|g|.
    pub fn new(g: ValueTable, label: impl Into<String>) -> Result<Self> {
        if g.lo() != 1 {
            return Err(Error::Domain(format!(
                "transform table must start at 1, got lo = {}",
                g.lo()
            )));
        }
        let sup_norm = g.sup_norm();
        Ok(Self {
            g,
            label: label.into(),
            sup_norm,
        })
    }

    /// The restricted divisor function τ_Q: g = indicator of [1, Q].
    pub fn tau_q(q: u64) -> Result<Self> {
        let g = ValueTable::from_ints(1, vec![1; q as usize])?;
        Self::new(g, format!("tau_Q(Q={q})"))
    }

    /// The constant function f ≡ 1: g = δ at 1.
    pub fn const_one() -> Self {
        let g = ValueTable::from_ints(1, vec![1]).expect("static table");
        Self::new(g, "const1").expect("lo = 1")
    }

    /// Range Q of the sieve function.
    pub fn range(&self) -> u64 {
        self.g.hi()
    }

    pub fn transform(&self) -> &ValueTable {
        &self.g
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// max_{d≤Q} |g(d)|, recorded at construction.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// max_{d≤Q} |g(d)| / d^ε, the reported stand-in for "essentially
    /// bounded" (which is not decidable for a finite table).
    pub fn eps_norm(&self, eps: f64) -> f64 {
        self.g
            .iter()
            .map(|(d, v)| v.abs() / (d as f64).powf(eps))
            .fold(0.0f64, f64::max)
    }

    /// f(n) = Σ_{d|n, d≤Q} g(d) by divisor enumeration.
    pub fn eval(&self, n: u64) -> Result<f64> {
        let ds = divisors(n)?;
        if self.g.is_integer_valued() {
            let mut s: i128 = 0;
            for d in ds {
                if d > self.range() {
                    break;
                }
                s += self.g.get_int(d) as i128;
            }
            Ok(s as f64)
        } else {
            let mut s = 0.0f64;
            for d in ds {
                if d > self.range() {
                    break;
                }
                s += self.g.at(d);
            }
            Ok(s)
        }
    }

    /// f on the window (N, 2N], by sieving the multiples of each d ≤ Q.
    ///
    /// O(Σ_{d≤Q} (N/d + 1)) additions; never enumerates divisors per n.
    /// Large windows are partitioned across threads with disjoint output
    /// slices; the result is identical to the serial evaluation.
    pub fn eval_window(&self, n: u64) -> Result<ValueTable> {
        if n == 0 {
            return Err(Error::BadRange { lo: 1, hi: 0 });
        }
        let lo = n + 1;
        let hi = 2 * n;
        if self.g.is_integer_valued() {
            let mut acc = vec![0i64; n as usize];
            self.sieve_into(lo, hi, &mut acc, |slot, v| *slot += v as i64);
            table_from_i128(lo, acc.into_iter().map(i128::from).collect())
        } else {
            let mut acc = vec![0.0f64; n as usize];
            self.sieve_into(lo, hi, &mut acc, |slot, v| *slot += v);
            ValueTable::new(lo, acc)
        }
    }

    fn sieve_into<T: Send>(&self, lo: u64, hi: u64, out: &mut [T], add: impl Fn(&mut T, f64) + Sync) {
        let fill = |chunk_lo: u64, chunk_hi: u64, buf: &mut [T]| {
            for (d, v) in self.g.iter() {
                if v == 0.0 {
                    continue;
                }
                let mut m = chunk_lo.div_ceil(d) * d;
                while m <= chunk_hi {
                    add(&mut buf[(m - chunk_lo) as usize], v);
                    m += d;
                }
            }
        };
        if hi - lo + 1 >= PAR_WINDOW_THRESHOLD {
            out.par_chunks_mut(PAR_CHUNK_LEN)
                .enumerate()
                .for_each(|(i, buf)| {
                    let c_lo = lo + (i * PAR_CHUNK_LEN) as u64;
                    let c_hi = c_lo + buf.len() as u64 - 1;
                    fill(c_lo, c_hi, buf);
                });
        } else {
            fill(lo, hi, out);
        }
    }
}

/// Eratosthenes transform g = f∗μ of an f-table on [1, X].
pub fn eratosthenes_transform(f_table: &ValueTable) -> Result<ValueTable> {
    if f_table.lo() != 1 {
        return Err(Error::Domain(format!(
            "transform input must start at 1, got lo = {}",
            f_table.lo()
        )));
    }
    let x = f_table.hi();
    let mu = mobius_table(x)?;
    dirichlet_convolve(f_table, &mu, x)
}

/// f on [1, X] from a transform table (g∗1 restricted to [1, X]).
pub fn sieve_table(g: &ValueTable, x: u64) -> Result<ValueTable> {
    let ones = ValueTable::from_ints(1, vec![1; x as usize])?;
    dirichlet_convolve(g, &ones, x)
}

// ---- plain-text spec format -------------------------------------------
//
//   Q <Q>
//   <d> <g(d)>     (one line per nonzero entry; omitted d's are 0)

/// Parse the plain-text transform format. Blank lines and lines starting
/// with '#' are skipped; errors carry 1-based line numbers.
pub fn parse_spec(text: &str, label: impl Into<String>) -> Result<SieveSpec> {
    let mut q: Option<u64> = None;
    let mut entries: Vec<(u64, f64, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (first, second, extra) = (parts.next(), parts.next(), parts.next());
        if extra.is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two fields, got: {line:?}"),
            });
        }
        match (first, second, &q) {
            (Some("Q"), Some(v), None) => {
                let qv = v.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid range {v:?}"),
                })?;
                if qv == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "range Q must be positive".into(),
                    });
                }
                q = Some(qv);
            }
            (Some("Q"), _, Some(_)) => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "duplicate Q line".into(),
                });
            }
            (Some(d_str), Some(v_str), Some(qv)) => {
                let d = d_str.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid index {d_str:?}"),
                })?;
                let v = v_str.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid value {v_str:?}"),
                })?;
                if d == 0 || d > *qv {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("index {d} outside [1, {qv}]"),
                    });
                }
                if !v.is_finite() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("non-finite value {v_str:?}"),
                    });
                }
                entries.push((d, v, line_no));
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected \"Q <range>\" before entries, got: {line:?}"),
                });
            }
        }
    }
    let q = q.ok_or(Error::Parse {
        line: 1,
        msg: "missing \"Q <range>\" line".into(),
    })?;
    let mut vals = vec![0.0f64; q as usize];
    let mut seen = vec![false; q as usize];
    for (d, v, line_no) in entries {
        let i = (d - 1) as usize;
        if seen[i] {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate entry for d = {d}"),
            });
        }
        seen[i] = true;
        vals[i] = v;
    }
    SieveSpec::new(ValueTable::new(1, vals)?, label)
}

/// Render a spec back to the plain-text format (zero entries omitted).
pub fn write_spec(spec: &SieveSpec) -> String {
    let mut out = format!("Q {}\n", spec.range());
    for (d, v) in spec.transform().iter() {
        if v == 0.0 {
            continue;
        }
        if spec.transform().is_integer_valued() {
            out.push_str(&format!("{} {}\n", d, v as i64));
        } else {
            out.push_str(&format!("{} {}\n", d, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_values() {
        // g = indicator of [1,2]: f = tau_2
        let spec = SieveSpec::tau_q(2).unwrap();
        assert_eq!(spec.eval(6).unwrap(), 2.0);
        // g = delta at 1: f constant 1
        let spec = SieveSpec::const_one();
        assert_eq!(spec.eval(123_456).unwrap(), 1.0);
        // g = indicator of [1,4]: divisors of 7 at most 4 are {1}
        let spec = SieveSpec::tau_q(4).unwrap();
        assert_eq!(spec.eval(7).unwrap(), 1.0);
    }

    #[test]
    fn tau_q_builder_values() {
        assert_eq!(SieveSpec::tau_q(1).unwrap().eval(97).unwrap(), 1.0);
        assert_eq!(SieveSpec::tau_q(2).unwrap().eval(6).unwrap(), 2.0);
        // divisors(12) = {1,2,3,4,6,12}; those <= 4 are {1,2,3,4}
        assert_eq!(SieveSpec::tau_q(4).unwrap().eval(12).unwrap(), 4.0);
    }

    #[test]
    fn window_examples() {
        let spec = SieveSpec::tau_q(2).unwrap();
        let w = spec.eval_window(4).unwrap();
        assert_eq!(w.lo(), 5);
        assert_eq!(w.hi(), 8);
        assert_eq!(w.values(), &[1.0, 2.0, 1.0, 2.0]);

        let spec = SieveSpec::const_one();
        let w = spec.eval_window(10).unwrap();
        assert_eq!(w.values(), &[1.0; 10]);
    }

    #[test]
    fn window_agrees_with_pointwise() {
        let g = ValueTable::from_ints(1, vec![2, -1, 0, 3, 1, -2]).unwrap();
        let spec = SieveSpec::new(g, "mix").unwrap();
        for n in [1u64, 2, 7, 53, 1000] {
            let w = spec.eval_window(n).unwrap();
            for (m, v) in w.iter() {
                assert_eq!(v, spec.eval(m).unwrap(), "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn window_parallel_matches_serial_bits() {
        // Above the parallel threshold; integer and float paths.
        let g = ValueTable::from_ints(1, vec![1, -2, 3, 0, 5]).unwrap();
        let spec = SieveSpec::new(g, "int").unwrap();
        let n = PAR_WINDOW_THRESHOLD + 11;
        let w = spec.eval_window(n).unwrap();
        for &m in &[n + 1, n + 17, 2 * n - 1, 2 * n] {
            assert_eq!(w.at(m), spec.eval(m).unwrap());
        }

        let g = ValueTable::new(1, vec![0.5, -1.25, 2.0]).unwrap();
        let spec = SieveSpec::new(g, "float").unwrap();
        let w = spec.eval_window(n).unwrap();
        for &m in &[n + 1, n + 2, n + 3, 2 * n] {
            // same ascending-d accumulation order as the pointwise loop
            let mut expect = 0.0;
            for d in 1..=3u64 {
                if m % d == 0 {
                    expect += spec.transform().at(d);
                }
            }
            assert_eq!(w.at(m), expect, "m = {m}");
        }
    }

    #[test]
    fn transform_roundtrips() {
        // f = tau_2 on [1,8] -> g = indicator of [1,2]
        let spec = SieveSpec::tau_q(2).unwrap();
        let f: Vec<i64> = (1..=8).map(|n| spec.eval(n).unwrap() as i64).collect();
        let f_table = ValueTable::from_ints(1, f).unwrap();
        let g = eratosthenes_transform(&f_table).unwrap();
        assert_eq!(g.values(), &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

        // f identically 1 -> g = delta at 1
        let ones = ValueTable::from_ints(1, vec![1; 12]).unwrap();
        let g = eratosthenes_transform(&ones).unwrap();
        assert_eq!(g.get_int(1), 1);
        assert!((2..=12).all(|d| g.get_int(d) == 0));

        // f = d_2 -> g identically 1
        let d2: Vec<i64> = (1..=8u64)
            .map(|n| divisors(n).unwrap().len() as i64)
            .collect();
        let g = eratosthenes_transform(&ValueTable::from_ints(1, d2).unwrap()).unwrap();
        assert_eq!(g.values(), &[1.0; 8]);
    }

    #[test]
    fn linearity_on_integer_path() {
        let g1 = ValueTable::from_ints(1, vec![1, 0, 2, -1]).unwrap();
        let g2 = ValueTable::from_ints(1, vec![0, 3, -2, 1]).unwrap();
        let sum = ValueTable::from_ints(1, vec![1, 3, 0, 0]).unwrap();
        let s1 = SieveSpec::new(g1, "a").unwrap();
        let s2 = SieveSpec::new(g2, "b").unwrap();
        let s12 = SieveSpec::new(sum, "a+b").unwrap();
        for n in 1..=200u64 {
            assert_eq!(
                s12.eval(n).unwrap(),
                s1.eval(n).unwrap() + s2.eval(n).unwrap()
            );
        }
    }

    #[test]
    fn spec_text_roundtrip() {
        let text = "Q 6\n1 1\n2 -1.5\n6 3\n";
        let spec = parse_spec(text, "file").unwrap();
        assert_eq!(spec.range(), 6);
        assert_eq!(spec.transform().at(2), -1.5);
        assert_eq!(spec.transform().at(3), 0.0);
        let rendered = write_spec(&spec);
        let back = parse_spec(&rendered, "file").unwrap();
        assert_eq!(back.transform().values(), spec.transform().values());
    }

    #[test]
    fn spec_parse_errors_carry_line_numbers() {
        let err = parse_spec("Q 4\n2 1\nbogus\n", "x").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        let err = parse_spec("Q 4\n9 1\n", "x").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_spec("", "x").is_err());
    }

    #[test]
    fn sup_and_eps_norms() {
        let g = ValueTable::from_ints(1, vec![1, -4, 2]).unwrap();
        let spec = SieveSpec::new(g, "norms").unwrap();
        assert_eq!(spec.sup_norm(), 4.0);
        // eps = 0: plain sup norm
        assert_eq!(spec.eps_norm(0.0), 4.0);
        assert!(spec.eps_norm(0.5) < 4.0);
    }
}
