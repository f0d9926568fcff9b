//! Combinatorial identity checks and analytic-lemma probes.
//!
//! Everything here either verifies an identity to rounding error (the
//! von Mangoldt decomposition residual), or measures a quantity next to
//! the bound a lemma asserts for it (sawtooth truncation error, spacing
//! counts, monomial minima, derivative-test exponential sums). Counting
//! is exact; only the final measured/bound ratios live in `f64`.

mod spacing;
mod srinivasan;
mod vdc;

pub use spacing::{count_spacings, SpacingParams, SpacingReport};
pub use srinivasan::{srinivasan_min, MonomialObjective, SrinivasanResult};
pub use vdc::{vdc_probe, DerivOrder, VdcParams, VdcReport};

use std::collections::HashMap;

use num_integer::binomial;

use crate::sieve::FactorTables;
use crate::{Budgets, Error};

/// Von Mangoldt and Moebius values on `[0, limit]`, built by one linear
/// sieve, plus the factor tables needed for divisor enumeration.
pub struct ArithmeticTables {
    pub limit: u64,
    pub mangoldt: Vec<f64>,
    pub moebius: Vec<i8>,
    factors: FactorTables,
}

impl ArithmeticTables {
    pub fn new(limit: u64) -> Result<Self, Error> {
        Self::with_budgets(limit, &Budgets::default())
    }

    pub fn with_budgets(limit: u64, budgets: &Budgets) -> Result<Self, Error> {
        if limit < 1 {
            return Err(Error::domain("tables need limit >= 1"));
        }
        // f64 + i8 + u32 per entry.
        budgets.check_mem((limit as u128 + 1) * 13, "arithmetic tables")?;
        let factors = FactorTables::new(limit as usize);
        Ok(ArithmeticTables {
            limit,
            mangoldt: factors.mangoldt_table(),
            moebius: factors.moebius_table(),
            factors,
        })
    }

    pub fn divisors(&self, n: u64) -> Vec<u64> {
        self.factors.divisors(n as usize)
    }
}

/// Residual of the degree-`k` von Mangoldt decomposition at `n`:
///
/// `| Lambda(n) - sum_{j=1..k} (-1)^(j-1) C(k,j)
///    sum_{n_1..n_{2j} = n, n_{j+1}..n_{2j} <= z} log(n_1) mu(n_{j+1}) .. mu(n_{2j}) |`
///
/// Valid for `n <= 2 z^k`. The inner sums run over ordered factorizations,
/// enumerated by recursive divisor decomposition with memoized tails; the
/// Moebius-weighted tail counts are exact integers, so the residual is
/// pure rounding noise (`~1e-12`) when the identity holds.
pub fn mangoldt_residual(n: u64, z: u64, k: u32, tables: &ArithmeticTables) -> Result<f64, Error> {
    if n < 1 || z < 1 || k < 1 {
        return Err(Error::domain("decomposition needs n, z >= 1 and k >= 1"));
    }
    if n > tables.limit {
        return Err(Error::Domain(format!(
            "n = {n} exceeds the table limit {}",
            tables.limit
        )));
    }
    // Range of validity: n <= 2 z^k, checked exactly.
    let in_range = num_bigint::BigUint::from(n)
        <= num_bigint::BigUint::from(2u32) * num_bigint::BigUint::from(z).pow(k);
    if !in_range {
        return Err(Error::Domain(format!(
            "n = {n} outside the validity range n <= 2 z^k = 2*{z}^{k}"
        )));
    }

    // tail(m, free, mu) = sum over ordered tuples of `free` unrestricted
    // factors followed by `mu` Moebius-weighted factors <= z multiplying
    // to m. Exact integer value.
    struct Tail<'a> {
        z: u64,
        tables: &'a ArithmeticTables,
        memo: HashMap<(u64, u32, u32), i64>,
    }
    impl Tail<'_> {
        fn eval(&mut self, m: u64, free: u32, mu: u32) -> i64 {
            if free == 0 && mu == 0 {
                return (m == 1) as i64;
            }
            if let Some(&v) = self.memo.get(&(m, free, mu)) {
                return v;
            }
            let mut total = 0i64;
            for &d in &self.tables.divisors(m) {
                if free > 0 {
                    total += self.eval(m / d, free - 1, mu);
                } else {
                    if d > self.z {
                        break; // divisors ascend
                    }
                    let w = self.tables.moebius[d as usize] as i64;
                    if w != 0 {
                        total += w * self.eval(m / d, 0, mu - 1);
                    }
                }
            }
            self.memo.insert((m, free, mu), total);
            total
        }
    }
    let mut tail = Tail {
        z,
        tables,
        memo: HashMap::new(),
    };

    let mut decomposition = 0.0f64;
    for j in 1..=k {
        // inner_j = sum_{d | n} log(d) * tail(n/d, j-1, j)
        let mut inner = 0.0f64;
        for &d in &tables.divisors(n) {
            if d == 1 {
                continue; // log 1 = 0
            }
            let t = tail.eval(n / d, j - 1, j);
            if t != 0 {
                inner += (d as f64).ln() * t as f64;
            }
        }
        let coeff = binomial(k as u64, j as u64) as f64;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        decomposition += sign * coeff * inner;
    }
    Ok((tables.mangoldt[n as usize] - decomposition).abs())
}

/// Sawtooth `psi(theta) = theta - floor(theta) - 1/2`.
pub fn psi_value(theta: f64) -> f64 {
    theta - theta.floor() - 0.5
}

/// Truncation data for the partial Fourier expansion of `psi` at depth `H`.
#[derive(Debug, Clone, Copy)]
pub struct PsiTruncation {
    /// `-(1/pi) sum_{h<=H} sin(2 pi h theta)/h`, the symmetric partial sum
    /// of `-sum_{0<|h|<=H} e(h theta)/(2 pi i h)`.
    pub partial_sum: f64,
    /// `|psi(theta) - partial_sum|`.
    pub error: f64,
    /// `min(1, 1/(H ||theta||))`, the smoothing envelope scale.
    pub envelope: f64,
    /// `error / envelope`.
    pub ratio: f64,
}

/// Measures the sawtooth truncation error against the envelope.
pub fn psi_truncation(theta: f64, h_depth: u64) -> Result<PsiTruncation, Error> {
    if h_depth == 0 {
        return Err(Error::domain("truncation depth H must be positive"));
    }
    let mut partial = 0.0f64;
    // Fixed ascending-h order keeps the value reproducible.
    for h in 1..=h_depth {
        let hf = h as f64;
        partial -= (std::f64::consts::TAU * hf * theta).sin() / (std::f64::consts::PI * hf);
    }
    let frac = theta - theta.floor();
    let distance = frac.min(1.0 - frac);
    let envelope = (1.0 / (h_depth as f64 * distance)).min(1.0);
    let error = (psi_value(theta) - partial).abs();
    Ok(PsiTruncation {
        partial_sum: partial,
        error,
        envelope,
        ratio: error / envelope,
    })
}
