//! Numerical toolkit for sieve functions over short arithmetic bands.
//!
//! A *sieve function* of range Q is an arithmetic function f = g∗1 whose
//! Möbius-inverse g (its Eratosthenes transform) vanishes outside [1, Q].
//! This crate builds such functions, evaluates their exponential sums and
//! Ramanujan coefficients, and measures the band discrepancy
//!
//! ```text
//! T_f(q, r, b, N, H) = Σ_{a≤H} Σ_{n∼N, n≡ar+b (q)} f(n) − (H/q)·f̂_N(0)
//! ```
//!
//! by two independent routes (direct counting and additive-character
//! decomposition), together with the exact length-inertia split, the
//! sign-packed extremal construction on (Q, 2Q], and restricted divisor
//! models. Everything integer-valued is accumulated in 128-bit integers so
//! that algebraic identities can be checked bit-exactly; the single f64
//! rounding stage of each quantity is documented at its definition.
//!
//! Throughout, `n ∼ N` means n ∈ (N, 2N].

pub mod arith;
pub mod bands;
pub mod complex;
pub mod divisor_models;
pub mod extremal;
mod residue;
pub mod sieve;
pub mod spectra;
pub mod table;

pub use bands::{BandParams, BandResult, BoundReport, InertiaSplit, Method};
pub use complex::ComplexValue;
pub use extremal::{ExtremalInstance, LowerBoundReport};
pub use sieve::SieveSpec;
pub use spectra::{RationalPoint, ResidualReport};
pub use table::ValueTable;

/// Errors surfaced by table construction, parsing and band evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty or inverted range [{lo}, {hi}]")]
    BadRange { lo: u64, hi: u64 },

    #[error("table of {len} entries exceeds the configured budget of {max}")]
    TableBudget { len: u64, max: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("r = {r} is not coprime to the modulus {modulus}")]
    NotCoprime { r: i64, modulus: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
