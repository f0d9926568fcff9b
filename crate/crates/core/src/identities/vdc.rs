//! Derivative-test probes for the phase `f(x) = alpha x^3 + h (x+u)^gamma`.
//!
//! Evaluates `|sum_{a < n <= b} e(f(n))|` directly and compares it against
//! the second-derivative envelope or the `2^q`-smoothing envelope for the
//! `(q+2)`-nd derivative. The derivative is sampled at the endpoints plus
//! 64 interior points; a sign change or an exact zero among the samples
//! means the test's hypothesis fails and the probe refuses to report a
//! bound. The cubic coefficient is a rational `a/q` taken modulo 1, so
//! its contribution to each phase is reduced exactly before any floating
//! arithmetic.

use crate::expsum::{e_of, KahanComplex, RationalPhase};
use crate::{Budgets, Error, Exponent};

/// Which derivative the envelope controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    /// Second-derivative test: bound `A L lambda^(1/2) + lambda^(-1/2)`.
    Second,
    /// `(q+2)`-nd derivative test with `Q = 2^q`, `q >= 1`: bound
    /// `L (A^2 lambda)^(1/(4Q-2)) + L^(1-1/(2Q)) A^(1/(2Q))
    ///  + L^(1-2/Q+1/Q^2) lambda^(-1/(2Q))`.
    Higher { q: u32 },
}

#[derive(Debug, Clone)]
pub struct VdcParams {
    pub order: DerivOrder,
    /// Cubic coefficient, reduced modulo 1.
    pub alpha: RationalPhase,
    /// Coefficient of the fractional-power term.
    pub h: f64,
    /// Fractional-power exponent.
    pub gamma: Exponent,
    /// Shift inside the fractional power; must be nonnegative.
    pub u: f64,
    /// Sum over integers in `(range_start, range_end]`.
    pub range_start: u64,
    pub range_end: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct VdcReport {
    /// Derivative order `r` actually tested (2 or `q + 2`).
    pub derivative_order: u32,
    /// Minimum of `|f^(r)|` over the 66 sample points.
    pub lambda: f64,
    /// Max/min ratio of the sampled `|f^(r)|` (the `A` in the envelope).
    pub ratio_coeff: f64,
    /// `|sum e(f(n))|` over the integer range.
    pub sum_modulus: f64,
    /// Number of integers summed.
    pub term_count: u64,
    /// The envelope value for this order.
    pub bound: f64,
    /// `sum_modulus / bound`.
    pub ratio: f64,
}

/// `gamma (gamma-1) ... (gamma-r+1)`.
fn falling(gamma: f64, r: u32) -> f64 {
    (0..r).map(|i| gamma - i as f64).product()
}

/// `f^(r)(x)` for `f(x) = alpha x^3 + h (x+u)^gamma`, `r >= 2`.
fn derivative(alpha: f64, h: f64, gamma: f64, u: f64, r: u32, x: f64) -> f64 {
    let cubic = match r {
        2 => 6.0 * alpha * x,
        3 => 6.0 * alpha,
        _ => 0.0,
    };
    cubic + h * falling(gamma, r) * (x + u).powf(gamma - r as f64)
}

pub fn vdc_probe(params: &VdcParams, budgets: &Budgets) -> Result<VdcReport, Error> {
    let VdcParams {
        order,
        alpha,
        h,
        gamma,
        u,
        range_start: a,
        range_end: b,
    } = *params;
    if a == 0 || b <= a {
        return Err(Error::domain("need 1 <= range_start < range_end"));
    }
    if b > 2 * a {
        return Err(Error::domain(
            "range_end may not exceed twice range_start (dyadic range)",
        ));
    }
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::domain("shift u must be nonnegative and finite"));
    }
    if !h.is_finite() {
        return Err(Error::domain("coefficient h must be finite"));
    }
    if alpha.numer() == 0 && h == 0.0 {
        return Err(Error::domain("phase is identically zero: nothing to test"));
    }
    let r = match order {
        DerivOrder::Second => 2,
        DerivOrder::Higher { q } => {
            if q == 0 || q > 16 {
                return Err(Error::domain("smoothing depth q must lie in 1..=16"));
            }
            q + 2
        }
    };
    budgets.check_terms((b - a) as u128, "derivative-test sum")?;

    let alpha_f = alpha.as_f64();
    let gamma_f = gamma.as_f64();

    // Endpoints plus 64 interior samples.
    let samples = 66usize;
    let mut lambda = f64::INFINITY;
    let mut upper = 0.0f64;
    let mut sign = 0.0f64;
    for i in 0..samples {
        let x = a as f64 + (b - a) as f64 * i as f64 / (samples - 1) as f64;
        let v = derivative(alpha_f, h, gamma_f, u, r, x);
        if v == 0.0 || !v.is_finite() {
            return Err(Error::Domain(format!(
                "derivative of order {r} vanishes near x = {x}; the test does not apply"
            )));
        }
        if sign == 0.0 {
            sign = v.signum();
        } else if v.signum() != sign {
            return Err(Error::Domain(format!(
                "derivative of order {r} changes sign on the range; the test does not apply"
            )));
        }
        lambda = lambda.min(v.abs());
        upper = upper.max(v.abs());
    }
    let ratio_coeff = upper / lambda;

    let (p, q_den) = (alpha.numer() as u128, alpha.denom() as u128);
    let mut acc = KahanComplex::default();
    for n in a + 1..=b {
        let m = n as u128 % q_den;
        let cube = m * m % q_den * m % q_den;
        let rational = (cube * p % q_den) as f64 / q_den as f64;
        let power = h * (n as f64 + u).powf(gamma_f);
        acc.add(e_of((rational + power).rem_euclid(1.0)));
    }
    let sum_modulus = acc.value().norm();

    let l = (b - a) as f64;
    let bound = match order {
        DerivOrder::Second => ratio_coeff * l * lambda.sqrt() + lambda.powf(-0.5),
        DerivOrder::Higher { q } => {
            let big_q = 2f64.powi(q as i32);
            l * (ratio_coeff * ratio_coeff * lambda).powf(1.0 / (4.0 * big_q - 2.0))
                + l.powf(1.0 - 1.0 / (2.0 * big_q)) * ratio_coeff.powf(1.0 / (2.0 * big_q))
                + l.powf(1.0 - 2.0 / big_q + 1.0 / (big_q * big_q))
                    * lambda.powf(-1.0 / (2.0 * big_q))
        }
    };

    Ok(VdcReport {
        derivative_order: r,
        lambda,
        ratio_coeff,
        sum_modulus,
        term_count: b - a,
        bound,
        ratio: sum_modulus / bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex;

    fn base(
        order: DerivOrder,
        alpha: (u64, u64),
        h: f64,
        gamma: (u64, u64),
        u: f64,
        a: u64,
        b: u64,
    ) -> VdcParams {
        VdcParams {
            order,
            alpha: RationalPhase::new(alpha.0, alpha.1).unwrap(),
            h,
            gamma: Exponent::new(gamma.0, gamma.1).unwrap(),
            u,
            range_start: a,
            range_end: b,
        }
    }

    #[test]
    fn pure_power_second_derivative() {
        // f(x) = x^(9/10) on (10^4, 2*10^4]: f'' is negative and
        // single-signed, the sum stays well inside the envelope.
        let p = base(
            DerivOrder::Second,
            (0, 1),
            1.0,
            (9, 10),
            0.0,
            10_000,
            20_000,
        );
        let r = vdc_probe(&p, &Budgets::default()).unwrap();
        assert_eq!(r.derivative_order, 2);
        assert!(r.lambda > 0.0);
        assert!(r.ratio_coeff >= 1.0 && r.ratio_coeff < 3.0);
        assert!(r.ratio <= 4.0, "ratio {} exceeds envelope slack", r.ratio);
        // Field consistency.
        let expect = r.ratio_coeff * 10_000.0 * r.lambda.sqrt() + r.lambda.powf(-0.5);
        assert!((r.bound - expect).abs() <= 1e-12 * expect);
    }

    #[test]
    fn cubic_mix_fourth_derivative() {
        // alpha = 1/1000, h = 3, gamma = 3/4, u = 1/2 on (10^4, 2*10^4]
        // with q = 2: the cubic part has zero fourth derivative, so the
        // fractional power alone controls lambda.
        let p = base(
            DerivOrder::Higher { q: 2 },
            (1, 1000),
            3.0,
            (3, 4),
            0.5,
            10_000,
            20_000,
        );
        let r = vdc_probe(&p, &Budgets::default()).unwrap();
        assert_eq!(r.derivative_order, 4);
        assert!(r.lambda > 0.0 && r.lambda < 1e-10);
        assert!(r.ratio <= 4.0);
        assert!(r.bound.is_finite());
    }

    #[test]
    fn constant_third_derivative_and_exact_periodic_sum() {
        // Pure cubic alpha = 1/8: f''' = 6/8 everywhere, so the sampled
        // ratio is exactly 1, and the sum over (8, 16] covers one full
        // period of n^3/8 mod 1, which equals 4.
        let p = base(DerivOrder::Higher { q: 1 }, (1, 8), 0.0, (1, 1), 0.0, 8, 16);
        let r = vdc_probe(&p, &Budgets::default()).unwrap();
        assert_eq!(r.derivative_order, 3);
        assert!((r.lambda - 0.75).abs() < 1e-15);
        assert_eq!(r.ratio_coeff, 1.0);
        let direct: Complex = (1..=8u64).map(|n| e_of((n * n * n) as f64 / 8.0)).sum();
        assert!((r.sum_modulus - direct.norm()).abs() < 1e-9);
        assert!((r.sum_modulus - 4.0).abs() < 1e-9);
    }

    #[test]
    fn sign_change_is_rejected() {
        // 6 alpha x grows through |h gamma (gamma-1) (x+u)^(gamma-2)| near
        // x = 7.5, inside (5, 10].
        let p = base(DerivOrder::Second, (1, 1000), 3.0, (3, 4), 0.0, 5, 10);
        let err = vdc_probe(&p, &Budgets::default()).unwrap_err();
        assert!(err.to_string().contains("sign"), "{err}");
    }

    #[test]
    fn zero_phase_is_rejected() {
        let p = base(DerivOrder::Second, (0, 1), 0.0, (3, 4), 0.0, 10, 20);
        assert!(vdc_probe(&p, &Budgets::default()).is_err());
    }

    #[test]
    fn range_validation() {
        let ok = |a, b| base(DerivOrder::Second, (0, 1), 1.0, (9, 10), 0.0, a, b);
        assert!(vdc_probe(&ok(0, 5), &Budgets::default()).is_err());
        assert!(vdc_probe(&ok(10, 10), &Budgets::default()).is_err());
        assert!(vdc_probe(&ok(10, 21), &Budgets::default()).is_err());
        assert!(vdc_probe(&ok(10, 20), &Budgets::default()).is_ok());
    }

    #[test]
    fn budget_enforced() {
        let p = base(
            DerivOrder::Second,
            (0, 1),
            1.0,
            (9, 10),
            0.0,
            1 << 40,
            1 << 41,
        );
        let tight = Budgets {
            max_terms: 1000,
            ..Budgets::default()
        };
        assert!(matches!(vdc_probe(&p, &tight), Err(Error::Budget(_))));
    }
}
