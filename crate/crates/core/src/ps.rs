//! Shifted-power ("floor of a fractional power") sequences and their primes.
//!
//! The floor sequence for an exponent `gamma = a/b` in `(1/2, 1]` is
//! `N_gamma = { floor(n^(1/gamma)) : n = 1, 2, ... }`. Membership of `m`
//! is equivalent to the window `[m^a, (m+1)^a)` containing a perfect
//! `b`-th power, so every decision here reduces to big-integer power
//! comparisons; no floating point touches a decision path.
//!
//! Two routes to membership are kept deliberately distinct and are tested
//! against each other: the defining map (iterate `n`, take floors) and the
//! endpoint indicator `ceil((m+1)^gamma) - ceil(m^gamma)` (the exact value
//! of the floor-bracket difference `[-m^gamma] - [-(m+1)^gamma]`).

use num_bigint::BigUint;

use crate::{Budgets, Error, Exponent};

/// PS primes up to a limit together with the weights used downstream:
/// `log p` and the change-of-variables weight `(1/gamma) p^(1-gamma) log p`.
#[derive(Debug, Clone)]
pub struct PsPrimeTable {
    pub gamma: Exponent,
    pub limit: u64,
    pub primes: Vec<u64>,
    pub log_weights: Vec<f64>,
    pub ps_weights: Vec<f64>,
}

/// Rejects inputs whose decision integers `(m+1)^a` would blow past the
/// bit budget.
fn check_power_bits(m: u64, a: u64, budgets: &Budgets) -> Result<(), Error> {
    let bits_per = 64 - (m + 1).leading_zeros() as u64; // ceil(log2(m+2)) bound
    let total = a.saturating_mul(bits_per);
    if total > budgets.max_bits {
        return Err(Error::Budget(format!(
            "membership test for m={m} needs ~{total} bits, over the cap of {} bits",
            budgets.max_bits
        )));
    }
    Ok(())
}

fn pow_big(base: u64, exp: u64) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// Exact `floor(m^(a/b))` for `m >= 1`.
fn floor_pow(m: u64, a: u64, b: u64) -> BigUint {
    pow_big(m, a).nth_root(b as u32)
}

/// Exact `ceil(m^(a/b))` for `m >= 1`.
fn ceil_pow(m: u64, a: u64, b: u64) -> BigUint {
    let power = pow_big(m, a);
    let root = power.nth_root(b as u32);
    if root.pow(b as u32) == power {
        root
    } else {
        root + 1u32
    }
}

/// Exact membership of `m` in the floor sequence for `gamma`.
///
/// True iff some integer `n` satisfies `m^a <= n^b < (m+1)^a`.
pub fn is_member(m: u64, gamma: Exponent) -> Result<bool, Error> {
    is_member_with(m, gamma, &Budgets::default())
}

pub fn is_member_with(m: u64, gamma: Exponent, budgets: &Budgets) -> Result<bool, Error> {
    if m == 0 {
        return Err(Error::domain("membership is defined for m >= 1"));
    }
    let (a, b) = (gamma.num(), gamma.den());
    check_power_bits(m, a, budgets)?;
    let lo = pow_big(m, a);
    let hi = pow_big(m + 1, a);
    // Smallest n with n^b >= lo is floor((lo-1)^(1/b)) + 1 for lo >= 1.
    let n0 = (lo - 1u32).nth_root(b as u32) + 1u32;
    Ok(n0.pow(b as u32) < hi)
}

/// Exact value of the endpoint indicator `[-m^gamma] - [-(m+1)^gamma]`,
/// i.e. the number of integers in `[m^gamma, (m+1)^gamma)`.
///
/// For `gamma < 1` the window is shorter than 1, so the value is 0 or 1;
/// it can disagree with [`is_member`] only when `m^gamma` is itself an
/// integer, which never happens for prime `m` when `b >= 2`.
pub fn indicator(m: u64, gamma: Exponent) -> Result<u64, Error> {
    indicator_with(m, gamma, &Budgets::default())
}

pub fn indicator_with(m: u64, gamma: Exponent, budgets: &Budgets) -> Result<u64, Error> {
    if m == 0 {
        return Err(Error::domain("indicator is defined for m >= 1"));
    }
    let (a, b) = (gamma.num(), gamma.den());
    check_power_bits(m, a, budgets)?;
    let count = ceil_pow(m + 1, a, b) - ceil_pow(m, a, b);
    Ok(u64::try_from(&count).expect("window shorter than m+1 fits in u64"))
}

/// All members of the floor sequence up to `x`, ascending.
///
/// Iterates the defining map over `n` (cost `O(x^gamma)` root
/// extractions) rather than filtering every `m <= x`.
pub fn ps_sequence(x: u64, gamma: Exponent) -> Result<Vec<u64>, Error> {
    ps_sequence_with(x, gamma, &Budgets::default())
}

pub fn ps_sequence_with(x: u64, gamma: Exponent, budgets: &Budgets) -> Result<Vec<u64>, Error> {
    let (a, b) = (gamma.num(), gamma.den());
    check_power_bits(x, b.max(a), budgets)?;
    let mut members = Vec::new();
    // floor(n^(b/a)) increases strictly in n (derivative >= b/a >= 1), so
    // no deduplication is needed; we stop at the first value above x.
    for n in 1u64.. {
        let m = floor_pow(n, b, a);
        let m = match u64::try_from(&m) {
            Ok(v) => v,
            Err(_) => break,
        };
        if m > x {
            break;
        }
        members.push(m);
    }
    Ok(members)
}

/// PS primes up to `x` with both weight vectors.
///
/// The member list comes from the defining map and the prime list from a
/// segmented sieve; the table is their sorted intersection. For
/// `gamma = 1` this is exactly the full prime list.
pub fn ps_primes(x: u64, gamma: Exponent) -> Result<PsPrimeTable, Error> {
    ps_primes_with(x, gamma, &Budgets::default())
}

pub fn ps_primes_with(x: u64, gamma: Exponent, budgets: &Budgets) -> Result<PsPrimeTable, Error> {
    let members = ps_sequence_with(x, gamma, budgets)?;
    let primes = crate::sieve::primes_up_to(x);
    let mut kept = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < members.len() && j < primes.len() {
        match members[i].cmp(&primes[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                kept.push(members[i]);
                i += 1;
                j += 1;
            }
        }
    }
    let g = gamma.as_f64();
    let log_weights: Vec<f64> = kept.iter().map(|&p| (p as f64).ln()).collect();
    let ps_weights: Vec<f64> = kept
        .iter()
        .map(|&p| (1.0 / g) * (p as f64).powf(1.0 - g) * (p as f64).ln())
        .collect();
    Ok(PsPrimeTable {
        gamma,
        limit: x,
        primes: kept,
        log_weights,
        ps_weights,
    })
}

/// Count of PS primes up to `x`, plus the count normalized by the
/// expected order `x^gamma / log x`.
pub fn pi_gamma(x: u64, gamma: Exponent) -> Result<(u64, f64), Error> {
    let table = ps_primes(x, gamma)?;
    let count = table.primes.len() as u64;
    let xf = x as f64;
    let normalized = if x >= 2 {
        count as f64 * xf.ln() / xf.powf(gamma.as_f64())
    } else {
        0.0
    };
    Ok((count, normalized))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma(a: u64, b: u64) -> Exponent {
        Exponent::new(a, b).unwrap()
    }

    #[test]
    fn membership_small_cases() {
        assert!(is_member(1, gamma(3, 4)).unwrap());
        assert!(is_member(2, gamma(3, 4)).unwrap());
        assert!(!is_member(3, gamma(3, 4)).unwrap());
        // gamma = 1: every positive integer is a member.
        for m in 1..50 {
            assert!(is_member(m, gamma(1, 1)).unwrap());
        }
        assert!(is_member(0, gamma(3, 4)).is_err());
    }

    #[test]
    fn sequence_small_cases() {
        assert_eq!(ps_sequence(8, gamma(3, 4)).unwrap(), vec![1, 2, 4, 6, 8]);
        assert_eq!(ps_sequence(5, gamma(1, 1)).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(ps_sequence(1, gamma(9, 10)).unwrap(), vec![1]);
    }

    #[test]
    fn sequence_matches_membership_filter() {
        // Two independent routes to the same set.
        for g in [gamma(2, 3), gamma(3, 4), gamma(9, 10), gamma(1, 1)] {
            let x = 3000;
            let seq = ps_sequence(x, g).unwrap();
            let filtered: Vec<u64> = (1..=x).filter(|&m| is_member(m, g).unwrap()).collect();
            assert_eq!(seq, filtered, "gamma = {g}");
        }
    }

    #[test]
    fn ps_prime_tables() {
        let t = ps_primes(20, gamma(9, 10)).unwrap();
        assert_eq!(t.primes, vec![2, 3, 5, 7, 11, 17]);
        let t = ps_primes(10, gamma(1, 1)).unwrap();
        assert_eq!(t.primes, vec![2, 3, 5, 7]);
        // gamma = 1 weights coincide bit-for-bit: p^0 * ln p = ln p.
        assert_eq!(t.log_weights, t.ps_weights);
        let t = ps_primes(2, gamma(9, 10)).unwrap();
        assert_eq!(t.primes, vec![2]);
    }

    #[test]
    fn pi_gamma_counts() {
        assert_eq!(pi_gamma(20, gamma(9, 10)).unwrap().0, 6);
        assert_eq!(pi_gamma(3, gamma(9, 10)).unwrap().0, 2);
        let (count, normalized) = pi_gamma(20, gamma(9, 10)).unwrap();
        let expect = count as f64 * (20f64).ln() / (20f64).powf(0.9);
        assert_eq!(normalized, expect);
    }

    #[test]
    fn indicator_agrees_with_membership_on_primes() {
        // Includes gamma = 2/3, where (p+1)^gamma can be an integer
        // (p = 7 gives 8^(2/3) = 4) and the exact bracket evaluation
        // still matches the defining map.
        for g in [gamma(2, 3), gamma(3, 4), gamma(9, 10)] {
            for &p in crate::sieve::primes_up_to(2000).iter() {
                let member = is_member(p, g).unwrap();
                let ind = indicator(p, g).unwrap();
                assert!(ind <= 1, "window shorter than 1 for gamma < 1");
                assert_eq!(member, ind == 1, "p = {p}, gamma = {g}");
            }
        }
    }

    #[test]
    fn indicator_composite_boundary_case() {
        // m = 7, gamma = 2/3: the defining window [7^(2/3), 8^(2/3)) is
        // [3.65.., 4) and contains no integer, while the half-open window
        // (7^(2/3), 8^(2/3)] would contain 4. The exact bracket form sides
        // with the defining map.
        assert_eq!(indicator(7, gamma(2, 3)).unwrap(), 0);
        assert!(!is_member(7, gamma(2, 3)).unwrap());
    }

    #[test]
    fn bit_budget_is_enforced() {
        let tight = Budgets {
            max_bits: 16,
            ..Budgets::default()
        };
        let err = is_member_with(1 << 20, gamma(9, 10), &tight).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }
}
