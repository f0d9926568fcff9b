//! Direct-summation probes for the bilinear sums and the von
//! Mangoldt-weighted sum that drive the minor-arc analysis.
//!
//! These are empirical instruments, not theorems: they evaluate the sums
//! term by term at desk scale and report the measured size next to the
//! trivial bound and the analytic target. Every range `n ~ Y` means the
//! full half-open dyadic window `(Y, 2Y]`, and all coefficient randomness
//! comes from one seeded ChaCha stream drawn in a documented order
//! (`a_m` ascending, then `b_k` ascending).

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use super::{e_of, KahanComplex, RationalPhase};
use crate::identities::ArithmeticTables;
use crate::sieve::FactorTables;
use crate::{Budgets, Error, Exponent, Rational};

/// Which bilinear shape to probe: coefficients on one side (Type I) or
/// both sides (Type II).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinearKind {
    TypeI,
    TypeII,
}

/// Built-in coefficient families, all bounded by 1 in modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffSpec {
    One,
    Moebius,
    Liouville,
    RandomUnimodular,
}

impl CoeffSpec {
    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "one" => Ok(CoeffSpec::One),
            "moebius" => Ok(CoeffSpec::Moebius),
            "liouville" => Ok(CoeffSpec::Liouville),
            "random" => Ok(CoeffSpec::RandomUnimodular),
            _ => Err(Error::Domain(format!(
                "unknown coefficient family {s:?} (one, moebius, liouville, random)"
            ))),
        }
    }
}

/// Parameters of a bilinear probe over `m ~ M`, `k ~ K`, `h ~ H`.
#[derive(Debug, Clone, Copy)]
pub struct BilinearParams {
    pub kind: BilinearKind,
    pub m_scale: u64,
    pub k_scale: u64,
    pub h_scale: u64,
    pub alpha: RationalPhase,
    pub gamma: Exponent,
    /// Shift inside the perturbation `(mk + u)^gamma`; must lie in `[0, 1)`.
    pub u: f64,
    pub coeffs: CoeffSpec,
    /// `H1 = X^h1_exponent` with `X = M K`; the damping is `min(1, H1/H)`.
    pub h1_exponent: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct BilinearReport {
    /// `X = M K`.
    pub x_scale: u64,
    /// Number of evaluated terms `H * M * K`.
    pub term_count: u64,
    /// `sum_h |inner double sum|` before damping.
    pub raw_sum: f64,
    /// `min(1, H1/H)`.
    pub prefactor: f64,
    /// `prefactor * raw_sum`.
    pub value: f64,
    /// `prefactor * H * M * K`, the trivial bound on `value`.
    pub trivial_bound: f64,
    /// `value / trivial_bound`.
    pub ratio: f64,
}

/// Coefficient vector for indices in `(scale, 2*scale]`, drawn per spec.
fn coefficients(
    spec: CoeffSpec,
    scale: u64,
    tables: Option<&FactorTables>,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<crate::Complex> {
    let len = scale as usize;
    match spec {
        CoeffSpec::One => vec![crate::Complex::new(1.0, 0.0); len],
        CoeffSpec::Moebius => {
            let mu = tables.expect("tables required").moebius_table();
            (scale + 1..=2 * scale)
                .map(|i| crate::Complex::new(mu[i as usize] as f64, 0.0))
                .collect()
        }
        CoeffSpec::Liouville => {
            let lam = tables.expect("tables required").liouville_table();
            (scale + 1..=2 * scale)
                .map(|i| crate::Complex::new(lam[i as usize] as f64, 0.0))
                .collect()
        }
        CoeffSpec::RandomUnimodular => (0..len).map(|_| e_of(rng.gen_range(0.0..1.0))).collect(),
    }
}

/// Evaluates the probe by direct summation.
///
/// Type I:  `min(1,H1/H) sum_{h~H} | sum_{m~M} sum_{k~K} a_m e(m^3 k^3 alpha + h (mk+u)^gamma) |`
/// Type II: the same with coefficients `a_m b_k` on both sides.
pub fn bilinear_probe(params: &BilinearParams, budgets: &Budgets) -> Result<BilinearReport, Error> {
    let BilinearParams {
        kind,
        m_scale,
        k_scale,
        h_scale,
        alpha,
        gamma,
        u,
        coeffs,
        h1_exponent,
        seed,
    } = *params;
    if m_scale == 0 || k_scale == 0 || h_scale == 0 {
        return Err(Error::domain("probe scales must be positive"));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::domain("shift u must lie in [0, 1)"));
    }
    let terms = m_scale as u128 * k_scale as u128 * h_scale as u128;
    budgets.check_terms(terms, "bilinear probe")?;
    let x_scale = m_scale
        .checked_mul(k_scale)
        .ok_or_else(|| Error::budget("X = M*K overflows 64 bits"))?;

    let table_limit = 2 * m_scale.max(k_scale) as usize;
    let tables = match coeffs {
        CoeffSpec::Moebius | CoeffSpec::Liouville => Some(FactorTables::new(table_limit)),
        _ => None,
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let a_coeffs = coefficients(coeffs, m_scale, tables.as_ref(), &mut rng);
    let b_coeffs = match kind {
        BilinearKind::TypeI => vec![crate::Complex::new(1.0, 0.0); k_scale as usize],
        BilinearKind::TypeII => coefficients(coeffs, k_scale, tables.as_ref(), &mut rng),
    };

    let (a_num, q) = (alpha.numer() as u128, alpha.denom() as u128);
    let g = gamma.as_f64();
    let mut raw_sum = 0.0f64;
    for h in h_scale + 1..=2 * h_scale {
        let mut inner = KahanComplex::default();
        for (mi, m) in (m_scale + 1..=2 * m_scale).enumerate() {
            for (ki, k) in (k_scale + 1..=2 * k_scale).enumerate() {
                let mk = m as u128 * k as u128;
                let r = mk % q;
                let cubic = (r * r % q) * r % q; // (mk)^3 mod q
                let theta_rat = (cubic * a_num % q) as f64 / q as f64;
                let theta_ps = h as f64 * ((mk as f64) + u).powf(g);
                inner.add(a_coeffs[mi] * b_coeffs[ki] * e_of(theta_rat + theta_ps.fract()));
            }
        }
        raw_sum += inner.value().norm();
    }

    let h1 = (x_scale as f64).powf(h1_exponent);
    let prefactor = (h1 / h_scale as f64).min(1.0);
    let value = prefactor * raw_sum;
    let trivial_bound = prefactor * terms as f64;
    Ok(BilinearReport {
        x_scale,
        term_count: terms as u64,
        raw_sum,
        prefactor,
        value,
        trivial_bound,
        ratio: value / trivial_bound,
    })
}

/// Parameters of the von Mangoldt-weighted probe over `n ~ X`, `h ~ H`.
#[derive(Debug, Clone)]
pub struct ScriptSParams {
    pub x_scale: u64,
    pub alpha: RationalPhase,
    pub h_scale: u64,
    pub gamma: Exponent,
    pub u: f64,
    /// Saving exponent: the admissible window is `H <= X^(1-gamma+delta)`
    /// and the analytic target is `X^(1-delta)`.
    pub delta: Rational,
}

#[derive(Debug, Clone, Copy)]
pub struct ScriptSReport {
    /// `min(1, H1/H) * sum_{h~H} |sum_{n~X} Lambda(n) e(n^3 alpha + h (n+u)^gamma)|`.
    pub value: f64,
    /// `X^(1-delta)`.
    pub target: f64,
    /// `X^(1-gamma+delta)`, the ceiling that `h_scale` was checked against.
    pub h_zero: f64,
    /// `X^(1-gamma)`.
    pub h_one: f64,
    pub prefactor: f64,
}

/// Raw weighted double sum over explicit von Mangoldt values
/// (`mangoldt[i]` is `Lambda(i)`, indexed up to `2 * x_scale`).
fn script_s_raw(
    mangoldt: &[f64],
    x_scale: u64,
    alpha: RationalPhase,
    h_scale: u64,
    gamma_value: f64,
    u: f64,
) -> f64 {
    let (a_num, q) = (alpha.numer() as u128, alpha.denom() as u128);
    let mut raw = 0.0f64;
    for h in h_scale + 1..=2 * h_scale {
        let mut inner = KahanComplex::default();
        for n in x_scale + 1..=2 * x_scale {
            let w = mangoldt[n as usize];
            if w == 0.0 {
                continue;
            }
            let r = n as u128 % q;
            let cubic = (r * r % q) * r % q;
            let theta_rat = (cubic * a_num % q) as f64 / q as f64;
            let theta_ps = h as f64 * (n as f64 + u).powf(gamma_value);
            inner.add(w * e_of(theta_rat + theta_ps.fract()));
        }
        raw += inner.value().norm();
    }
    raw
}

/// Exact check `h <= x^(e)` for a nonnegative rational exponent `e = p/q`:
/// `h^q <= x^p` over big integers.
fn scale_within_power(h: u64, x: u64, e: &Rational) -> bool {
    if e.is_negative() {
        return false; // x >= 2 and h >= 1 make h > x^e whenever e < 0
    }
    if e.is_zero() {
        return h <= 1;
    }
    let p = e.numer().magnitude().clone();
    let q = e.denom().magnitude().clone();
    let p32 = u32::try_from(&p).expect("exponent numerator fits u32");
    let q32 = u32::try_from(&q).expect("exponent denominator fits u32");
    BigUint::from(h).pow(q32) <= BigUint::from(x).pow(p32)
}

pub fn script_s_probe(params: &ScriptSParams, budgets: &Budgets) -> Result<ScriptSReport, Error> {
    let ScriptSParams {
        x_scale,
        alpha,
        h_scale,
        gamma,
        u,
        ref delta,
    } = *params;
    if x_scale < 2 || h_scale == 0 {
        return Err(Error::domain("probe needs X >= 2 and H >= 1"));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::domain("shift u must lie in [0, 1)"));
    }
    if delta.is_negative() {
        return Err(Error::domain("delta must be nonnegative"));
    }
    let h_cap_exp = Rational::one() - gamma.as_rational() + delta.clone();
    let xf = x_scale as f64;
    let h_zero = xf.powf(crate::exponent::rational_f64(&h_cap_exp));
    if !scale_within_power(h_scale, x_scale, &h_cap_exp) {
        return Err(Error::Domain(format!(
            "H = {h_scale} exceeds the admissible ceiling H0 = X^(1-gamma+delta) ~ {h_zero:.6}"
        )));
    }
    budgets.check_terms(x_scale as u128 * h_scale as u128, "weighted probe")?;

    let tables = ArithmeticTables::new(2 * x_scale)?;
    let raw = script_s_raw(&tables.mangoldt, x_scale, alpha, h_scale, gamma.as_f64(), u);
    let h_one = xf.powf(crate::exponent::rational_f64(&gamma.one_minus()));
    let prefactor = (h_one / h_scale as f64).min(1.0);
    let one_minus_delta = Rational::one() - delta.clone();
    Ok(ScriptSReport {
        value: prefactor * raw,
        target: xf.powf(crate::exponent::rational_f64(&one_minus_delta)),
        h_zero,
        h_one,
        prefactor,
    })
}
