//! Prime sieving and multiplicative-function tables.
//!
//! `primes_up_to` runs a segmented sieve of Eratosthenes (fixed segment
//! size, sequential, so output order and content are deterministic).
//! `FactorTables` runs a linear sieve once and derives the standard
//! arithmetic functions from the smallest-prime-factor array.

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // Base primes up to sqrt(limit) by a plain sieve.
    let root = (limit as f64).sqrt() as u64 + 1;
    let mut base_composite = vec![false; (root + 1) as usize];
    let mut base: Vec<u64> = Vec::new();
    for p in 2..=root {
        if !base_composite[p as usize] {
            base.push(p);
            let mut m = p * p;
            while m <= root {
                base_composite[m as usize] = true;
                m += p;
            }
        }
    }

    const SEGMENT: u64 = 1 << 16;
    let mut primes = Vec::new();
    let mut segment = vec![false; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (lo.div_ceil(p) * p).max(p * p);
            let mut m = start;
            while m <= hi {
                segment[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (off, &composite) in segment[..len].iter().enumerate() {
            if !composite {
                let n = lo + off as u64;
                if n >= 2 {
                    primes.push(n);
                }
            }
        }
        lo = hi + 1;
    }
    primes
}

/// Linear-sieve factor tables on `[0, limit]`.
pub struct FactorTables {
    limit: usize,
    /// Smallest prime factor of `n` (0 for `n < 2`).
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorTables {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for n in 2..=limit {
            if spf[n] == 0 {
                spf[n] = n as u32;
                primes.push(n as u32);
            }
            for &p in &primes {
                let m = n * p as usize;
                if p > spf[n] || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        FactorTables { limit, spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: usize) -> Option<u32> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n])
        }
    }

    /// Moebius function as `i8` on `[0, limit]` (`mu[0] = 0`).
    pub fn moebius_table(&self) -> Vec<i8> {
        let mut mu = vec![0i8; self.limit + 1];
        if self.limit >= 1 {
            mu[1] = 1;
        }
        for n in 2..=self.limit {
            let p = self.spf[n] as usize;
            let m = n / p;
            mu[n] = if m % p == 0 { 0 } else { -mu[m] };
        }
        mu
    }

    /// Liouville function as `i8` on `[0, limit]` (`(-1)^Omega(n)`).
    pub fn liouville_table(&self) -> Vec<i8> {
        let mut lam = vec![0i8; self.limit + 1];
        if self.limit >= 1 {
            lam[1] = 1;
        }
        for n in 2..=self.limit {
            lam[n] = -lam[n / self.spf[n] as usize];
        }
        lam
    }

    /// Von Mangoldt function on `[0, limit]`: `log p` on prime powers.
    pub fn mangoldt_table(&self) -> Vec<f64> {
        // Record, for each n, whether n is p^k, by stripping spf repeatedly.
        let mut lambda = vec![0.0f64; self.limit + 1];
        for n in 2..=self.limit {
            let p = self.spf[n] as usize;
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            if m == 1 {
                lambda[n] = (p as f64).ln();
            }
        }
        lambda
    }

    /// Sorted divisor list of `n <= limit`.
    pub fn divisors(&self, n: usize) -> Vec<u64> {
        assert!(n >= 1 && n <= self.limit, "divisors: n out of table range");
        let mut divs: Vec<u64> = vec![1];
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as u64;
            let mut e = 0;
            while m % p as usize == 0 {
                m /= p as usize;
                e += 1;
            }
            let prev = divs.clone();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                divs.extend(prev.iter().map(|d| d * pk));
            }
        }
        divs.sort_unstable();
        divs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial-division reference, kept deliberately naive.
    fn is_prime_naive(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn segmented_sieve_matches_trial_division() {
        let primes = primes_up_to(10_000);
        let naive: Vec<u64> = (2..=10_000).filter(|&n| is_prime_naive(n)).collect();
        assert_eq!(primes, naive);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(2), vec![2]);
    }

    #[test]
    fn sieve_crosses_segment_boundaries() {
        // 65536 and 65537 sit on the first segment boundary; 65537 is prime.
        let primes = primes_up_to(70_000);
        assert!(primes.contains(&65537));
        assert!(!primes.contains(&65536));
        let count = primes.len();
        assert_eq!(count, 6935); // pi(70000)
    }

    #[test]
    fn moebius_and_liouville_against_factor_counts() {
        let tables = FactorTables::new(2000);
        let mu = tables.moebius_table();
        let lam = tables.liouville_table();
        for n in 1..=2000usize {
            // Reference by trial factorization.
            let mut m = n;
            let mut omega_distinct = 0;
            let mut omega_total = 0;
            let mut squarefree = true;
            let mut d = 2;
            while d * d <= m {
                if m % d == 0 {
                    omega_distinct += 1;
                    let mut e = 0;
                    while m % d == 0 {
                        m /= d;
                        e += 1;
                    }
                    omega_total += e;
                    if e > 1 {
                        squarefree = false;
                    }
                }
                d += 1;
            }
            if m > 1 {
                omega_distinct += 1;
                omega_total += 1;
            }
            let mu_ref = if !squarefree {
                0
            } else if omega_distinct % 2 == 0 {
                1
            } else {
                -1
            };
            assert_eq!(mu[n] as i32, mu_ref, "mu({n})");
            let lam_ref = if omega_total % 2 == 0 { 1 } else { -1 };
            assert_eq!(lam[n] as i32, lam_ref, "lambda({n})");
        }
    }

    #[test]
    fn mangoldt_supported_on_prime_powers() {
        let tables = FactorTables::new(1000);
        let lambda = tables.mangoldt_table();
        assert!((lambda[8] - 2f64.ln()).abs() < 1e-15);
        assert!((lambda[7] - 7f64.ln()).abs() < 1e-15);
        assert_eq!(lambda[6], 0.0);
        assert_eq!(lambda[1], 0.0);
        assert!((lambda[729] - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn divisor_lists_are_sorted_and_complete() {
        let tables = FactorTables::new(2000);
        assert_eq!(tables.divisors(1), vec![1]);
        assert_eq!(tables.divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(tables.divisors(1024).len(), 11);
        for n in 1..=500usize {
            let divs = tables.divisors(n);
            let naive: Vec<u64> = (1..=n as u64).filter(|d| n as u64 % d == 0).collect();
            assert_eq!(divs, naive, "divisors({n})");
        }
    }
}
