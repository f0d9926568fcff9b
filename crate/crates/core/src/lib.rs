//! Desk-scale toolkit for representation counting with shifted-power (PS,
//! for "power-shifted") primes: sums of nine cubes of primes drawn from the
//! floor sequence `m = floor(n^(1/gamma))`, `1/2 < gamma <= 1`.
//!
//! The crate is organized so that every *decision* (membership, thresholds,
//! admissibility, spacing counts) is made in exact integer or rational
//! arithmetic, while *analytic probes* (exponential sums, singular series,
//! sawtooth partial sums, derivative tests) run in deterministic `f64` with
//! fixed summation order. All randomness is drawn from a single seeded
//! ChaCha stream, so identical inputs produce byte-identical reports.
//!
//! Module map:
//! - [`exponent`]: exact rational exponents `a/b` and parsing helpers.
//! - [`sieve`]: segmented prime sieve and linear-sieve function tables.
//! - [`ps`]: PS sequences, PS primes, and exact membership tests.
//! - [`expsum`]: cubic exponential sums, their even moments, and
//!   direct-summation probes for bilinear and von Mangoldt-weighted sums.
//! - [`circle`]: exact representation counts, weighted counts, the
//!   truncated singular series, and main-term comparison windows.
//! - [`identities`]: combinatorial identity checks (von Mangoldt
//!   decomposition, sawtooth Fourier truncation, spacing counts, monomial
//!   minimization, derivative tests).
//! - [`exponents`]: exact rational bookkeeping for nine-exponent vectors,
//!   admissibility thresholds, and case partitions. No floating point.

pub mod circle;
pub mod error;
pub mod exponent;
pub mod exponents;
pub mod expsum;
pub mod identities;
pub mod ps;
pub mod sieve;

pub use error::Error;
pub use exponent::Exponent;

/// Exact rational scalar used on every decision path.
pub type Rational = num_rational::BigRational;

/// Complex scalar used by the analytic probes.
pub type Complex = num_complex::Complex64;

/// Resource ceilings shared by the long-running operations.
///
/// `max_terms` caps direct-summation work (term evaluations or
/// multiply-adds), `max_bits` caps the size of any big integer produced on
/// an exact decision path, and `max_mem_mb` caps dense array allocations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub max_terms: u64,
    pub max_bits: u64,
    pub max_mem_mb: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_terms: 1_000_000_000,
            max_bits: 1_000_000,
            max_mem_mb: 4096,
        }
    }
}

impl Budgets {
    /// Errors out unless `n` term evaluations fit under `max_terms`.
    pub fn check_terms(&self, n: u128, what: &str) -> Result<(), Error> {
        if n > self.max_terms as u128 {
            return Err(Error::Budget(format!(
                "{what} needs {n} term evaluations, over the cap of {}",
                self.max_terms
            )));
        }
        Ok(())
    }

    /// Errors out unless `bytes` of dense storage fit under `max_mem_mb`.
    pub fn check_mem(&self, bytes: u128, what: &str) -> Result<(), Error> {
        let cap = self.max_mem_mb as u128 * 1024 * 1024;
        if bytes > cap {
            return Err(Error::Budget(format!(
                "{what} needs {bytes} bytes, over the cap of {cap} (set a larger memory budget)"
            )));
        }
        Ok(())
    }
}
