//! Exact spacing counts for products `h k^alpha`.
//!
//! Counts quadruples `(h1, k1, h2, k2)` with `h_i ~ H`, `k_i ~ K` and
//! `|h1 k1^alpha - h2 k2^alpha| <= Delta`. The decision for each pair is
//! exact: a fast float filter with a provably safe margin handles the
//! bulk, and ambiguous pairs fall back to scaled integer-root interval
//! refinement (both quantities are b-th roots of integers, so equality
//! forces both roots rational, which is detected separately).

use num_bigint::BigUint;
use num_traits::Signed;

use crate::{Budgets, Error, Exponent, Rational};

#[derive(Debug, Clone)]
pub struct SpacingParams {
    /// `h` ranges over `(h_scale, 2 h_scale]`.
    pub h_scale: u64,
    /// `k` ranges over `(k_scale, 2 k_scale]`.
    pub k_scale: u64,
    /// Rational exponent, restricted to `(1/2, 1)` strictly.
    pub alpha: Exponent,
    /// Nonnegative rational spacing threshold.
    pub delta: Rational,
}

#[derive(Debug, Clone, Copy)]
pub struct SpacingReport {
    /// Exact quadruple count.
    pub count: u64,
    /// `Delta H K^(2-alpha) + H K log(H K)`, the lemma's envelope.
    pub bound: f64,
    /// `count / bound`.
    pub ratio: f64,
}

/// Decides `|u^(1/b) - v^(1/b)| <= c/d` exactly for integers `u, v` and a
/// nonnegative rational threshold `c/d`.
fn root_gap_within(
    u: &BigUint,
    v: &BigUint,
    b: u32,
    c: &BigUint,
    d: &BigUint,
) -> Result<bool, Error> {
    let (u, v) = if u >= v { (u, v) } else { (v, u) };
    if u == v {
        return Ok(true);
    }
    let ru = u.nth_root(b);
    let rv = v.nth_root(b);
    if ru.pow(b) == *u && rv.pow(b) == *v {
        // Both roots exact: compare (ru - rv) * d <= c.
        return Ok((ru - rv) * d <= *c);
    }
    // Interval refinement: au = floor(d 2^s u^(1/b)) brackets the scaled
    // root within 1. The gap times d 2^s lies in (au-av-1, au-av+1).
    for s in [32u32, 64, 128, 256, 512] {
        let scale = d * (BigUint::from(1u32) << s);
        let scale_b = scale.pow(b);
        let au = (u * &scale_b).nth_root(b);
        let av = (v * &scale_b).nth_root(b);
        let target = c * (BigUint::from(1u32) << s);
        let gap = &au - &av;
        if &gap + 1u32 <= target {
            return Ok(true);
        }
        if gap >= &target + 1u32 {
            return Ok(false);
        }
    }
    Err(Error::budget(
        "spacing comparison undecided at 512 fractional bits; \
         the gap sits on the threshold beyond refinement",
    ))
}

/// Exact spacing count with the lemma envelope for comparison.
pub fn count_spacings(params: &SpacingParams, budgets: &Budgets) -> Result<SpacingReport, Error> {
    let SpacingParams {
        h_scale,
        k_scale,
        alpha,
        ref delta,
    } = *params;
    if h_scale == 0 || k_scale == 0 {
        return Err(Error::domain("spacing scales must be positive"));
    }
    if alpha.is_one() {
        return Err(Error::domain("spacing exponent must lie strictly below 1"));
    }
    if delta.is_negative() {
        return Err(Error::domain("spacing threshold must be nonnegative"));
    }
    let combos = h_scale as u128 * k_scale as u128;
    budgets.check_terms(combos * combos, "spacing count")?;

    let (a, b) = (alpha.num() as u32, alpha.den() as u32);
    let alpha_f = alpha.as_f64();
    let delta_f = crate::exponent::rational_f64(delta);
    let c_big = delta.numer().magnitude().clone();
    let d_big = delta.denom().magnitude().clone();

    // Precompute float values and lazy exact powers per (h, k) combo.
    struct Combo {
        value: f64,
        h: u64,
        k: u64,
    }
    let mut combos_v: Vec<Combo> = Vec::with_capacity(combos as usize);
    for h in h_scale + 1..=2 * h_scale {
        for k in k_scale + 1..=2 * k_scale {
            combos_v.push(Combo {
                value: h as f64 * (k as f64).powf(alpha_f),
                h,
                k,
            });
        }
    }
    let exact_power = |combo: &Combo| -> BigUint {
        BigUint::from(combo.h).pow(b) * BigUint::from(combo.k).pow(a)
    };

    let mut count: u64 = 0;
    for (i, c1) in combos_v.iter().enumerate() {
        for c2 in &combos_v[i..] {
            // Safe float filter: powf is within a few ulps, so a margin of
            // 1e-9 relative to the magnitudes involved can never flip a
            // decision that the filter is allowed to make.
            let gap = (c1.value - c2.value).abs();
            let margin = 1e-9 * (c1.value + c2.value + 1.0);
            let within = if (gap - delta_f).abs() > margin {
                gap <= delta_f
            } else {
                root_gap_within(&exact_power(c1), &exact_power(c2), b, &c_big, &d_big)?
            };
            if within {
                // Ordered quadruples: (1,2) and (2,1), diagonal once.
                count += if std::ptr::eq(c1, c2) { 1 } else { 2 };
            }
        }
    }

    let hf = h_scale as f64;
    let kf = k_scale as f64;
    let bound = delta_f * hf * kf.powf(2.0 - alpha_f) + hf * kf * (hf * kf).ln();
    Ok(SpacingReport {
        count,
        bound,
        ratio: if bound > 0.0 {
            count as f64 / bound
        } else {
            f64::INFINITY
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn params(h: u64, k: u64, a: u64, b: u64, dn: i64, dd: i64) -> SpacingParams {
        SpacingParams {
            h_scale: h,
            k_scale: k,
            alpha: Exponent::new(a, b).unwrap(),
            delta: Rational::new(BigInt::from(dn), BigInt::from(dd)),
        }
    }

    #[test]
    fn single_combo_diagonal() {
        // H = K = 1: only (h,k) = (2,2); the diagonal pair is within 0.
        let r = count_spacings(&params(1, 1, 3, 4, 0, 1), &Budgets::default()).unwrap();
        assert_eq!(r.count, 1);
    }

    #[test]
    fn four_combo_example() {
        // H = K = 2, alpha = 3/4, Delta = 1/10: the four values
        // {3,4} x {3,4}^(3/4) are pairwise more than 1/10 apart, so only
        // the diagonal survives.
        let r = count_spacings(&params(2, 2, 3, 4, 1, 10), &Budgets::default()).unwrap();
        assert_eq!(r.count, 4);
    }

    #[test]
    fn count_matches_naive_float_counting_away_from_ties() {
        // With a threshold far from every gap, careful f64 counting is
        // trustworthy; compare against it.
        for (h, k) in [(3u64, 4u64), (5, 5), (8, 6)] {
            let p = params(h, k, 9, 10, 1, 3);
            let exact = count_spacings(&p, &Budgets::default()).unwrap().count;
            let mut naive = 0u64;
            let mut values = Vec::new();
            for hh in h + 1..=2 * h {
                for kk in k + 1..=2 * k {
                    values.push(hh as f64 * (kk as f64).powf(0.9));
                }
            }
            for &x in &values {
                for &y in &values {
                    if (x - y).abs() <= 1.0 / 3.0 {
                        naive += 1;
                    }
                }
            }
            assert_eq!(exact, naive, "H={h} K={k}");
        }
    }

    #[test]
    fn exact_tie_on_the_threshold() {
        // alpha = 3/4, k1 = 16 -> 16^(3/4) = 8 exactly; with h1 = 3,
        // h2 = 4, k2 = 16 the gap is |24 - 32| = 8. Threshold exactly 8
        // must count it; 8 - epsilon must not. Scales (2,4](8,16] include
        // these combos.
        let hit = count_spacings(&params(2, 8, 3, 4, 8, 1), &Budgets::default()).unwrap();
        let miss = count_spacings(&params(2, 8, 3, 4, 7999, 1000), &Budgets::default()).unwrap();
        assert!(
            hit.count >= miss.count + 2,
            "the tied pair counts both ways"
        );
    }

    #[test]
    fn root_gap_decisions() {
        let big = |n: u64| BigUint::from(n);
        // |8^(1/3) - 1| = 1 <= 1 exactly (both roots integers).
        assert!(root_gap_within(&big(8), &big(1), 3, &big(1), &big(1)).unwrap());
        // sqrt(2) - 1 = 0.4142..: below 1/2, above 2/5.
        assert!(root_gap_within(&big(2), &big(1), 2, &big(1), &big(2)).unwrap());
        assert!(!root_gap_within(&big(2), &big(1), 2, &big(2), &big(5)).unwrap());
        // Equal irrational roots.
        assert!(root_gap_within(&big(7), &big(7), 5, &big(0), &big(1)).unwrap());
    }

    #[test]
    fn monotone_in_delta() {
        let mut last = 0;
        for dn in [0i64, 1, 2, 5, 10, 100] {
            let r = count_spacings(&params(4, 4, 3, 4, dn, 10), &Budgets::default()).unwrap();
            assert!(r.count >= last, "Delta = {dn}/10");
            last = r.count;
        }
    }

    #[test]
    fn rejects_alpha_one_and_negative_delta() {
        assert!(count_spacings(&params(2, 2, 1, 1, 1, 10), &Budgets::default()).is_err());
        assert!(count_spacings(&params(2, 2, 3, 4, -1, 10), &Budgets::default()).is_err());
    }
}
