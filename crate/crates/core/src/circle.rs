//! Representation counts for sums of nine prime cubes, their weighted
//! variants, truncated singular series, and the main-term comparison.
//!
//! Counting is exact: the nine-fold convolution of cube indicator arrays
//! runs over machine 128-bit integers when the worst-case count provably
//! fits, and over big integers otherwise. The weighted array uses the
//! same convolution over doubles in a fixed order, so results are
//! bit-reproducible. Singular series values are assembled multiplicatively
//! from per-prime-power tables, each computed from complete exponential
//! sums over reduced residues; an independent congruence-counting oracle
//! (`local_factor`) cross-checks the local densities.

use std::collections::HashMap;
use std::ops::{AddAssign, Mul};

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};

use crate::expsum::e_of;
use crate::ps::{ps_primes_with, PsPrimeTable};
use crate::{Budgets, Complex, Error, Exponent};

/// Exact tuple counts and weighted sums indexed by target `N <= nmax`.
#[derive(Debug, Clone)]
pub struct RepArray {
    pub nmax: u64,
    pub gammas: Vec<Exponent>,
    /// `counts[n]` = ordered 9-tuples of table primes with cube sum `n`.
    pub counts: Vec<BigUint>,
    /// `weighted[n]` = same sum with each prime contributing its table
    /// weight `(1/gamma) p^(1-gamma) log p`; all zeros for count-only runs.
    pub weighted: Vec<f64>,
}

fn cube(p: u64) -> Result<u64, Error> {
    p.checked_mul(p)
        .and_then(|s| s.checked_mul(p))
        .ok_or_else(|| Error::Domain(format!("cube of {p} overflows")))
}

fn checked_tables<'a>(
    nmax: u64,
    tables: &[&'a PsPrimeTable],
) -> Result<Vec<(&'a PsPrimeTable, Vec<u64>)>, Error> {
    if tables.len() != 9 {
        return Err(Error::Domain(format!(
            "need exactly 9 prime tables, got {}",
            tables.len()
        )));
    }
    let mut out = Vec::with_capacity(9);
    for t in tables {
        let mut cubes = Vec::with_capacity(t.primes.len());
        for &p in &t.primes {
            let c = cube(p)?;
            if c > nmax {
                return Err(Error::Domain(format!(
                    "table prime {p} has cube {c} beyond the array bound {nmax}"
                )));
            }
            cubes.push(c);
        }
        out.push((*t, cubes));
    }
    Ok(out)
}

/// Sparse exact convolution of cube indicator lists, truncated at `nmax`.
fn convolve_exact<T>(nmax: usize, factors: &[Vec<u64>]) -> Vec<T>
where
    T: Clone + Zero + One + for<'a> AddAssign<&'a T>,
{
    let mut acc: Vec<T> = vec![T::zero(); nmax + 1];
    acc[0] = T::one();
    for cubes in factors {
        let mut next: Vec<T> = vec![T::zero(); nmax + 1];
        for &c in cubes {
            let c = c as usize;
            for n in 0..=nmax - c {
                if !acc[n].is_zero() {
                    let (lo, hi) = next.split_at_mut(n + c);
                    let _ = lo;
                    hi[0] += &acc[n];
                }
            }
        }
        acc = next;
    }
    acc
}

/// Same shape over doubles with per-cube weights; fixed iteration order
/// keeps the result bit-identical across runs.
fn convolve_float(nmax: usize, factors: &[Vec<(u64, f64)>]) -> Vec<f64> {
    let mut acc = vec![0.0f64; nmax + 1];
    acc[0] = 1.0;
    for pairs in factors {
        let mut next = vec![0.0f64; nmax + 1];
        for &(c, w) in pairs {
            let c = c as usize;
            for n in 0..=nmax - c {
                if acc[n] != 0.0 {
                    next[n + c] += acc[n] * w;
                }
            }
        }
        acc = next;
    }
    acc
}

fn rep_impl(
    nmax: u64,
    tables: &[&PsPrimeTable],
    budgets: &Budgets,
    with_weights: bool,
) -> Result<RepArray, Error> {
    let prepared = checked_tables(nmax, tables)?;
    let n_us = usize::try_from(nmax).map_err(|_| Error::budget("array bound exceeds usize"))?;
    budgets.check_mem((nmax as u128 + 1) * 80, "representation arrays")?;
    let ops: u128 = prepared
        .iter()
        .map(|(_, c)| c.len() as u128 * (nmax as u128 + 1))
        .sum();
    budgets.check_terms(ops, "representation convolution")?;

    let cube_lists: Vec<Vec<u64>> = prepared.iter().map(|(_, c)| c.clone()).collect();
    let bound: BigUint = prepared
        .iter()
        .map(|(_, c)| BigUint::from(c.len()))
        .product();
    let counts: Vec<BigUint> = if bound <= BigUint::from(u128::MAX) {
        convolve_exact::<u128>(n_us, &cube_lists)
            .into_iter()
            .map(BigUint::from)
            .collect()
    } else {
        convolve_exact::<BigUint>(n_us, &cube_lists)
    };

    let weighted = if with_weights {
        let weight_lists: Vec<Vec<(u64, f64)>> = prepared
            .iter()
            .map(|(t, cubes)| {
                cubes
                    .iter()
                    .copied()
                    .zip(t.ps_weights.iter().copied())
                    .collect()
            })
            .collect();
        convolve_float(n_us, &weight_lists)
    } else {
        vec![0.0; n_us + 1]
    };

    Ok(RepArray {
        nmax,
        gammas: tables.iter().map(|t| t.gamma).collect(),
        counts,
        weighted,
    })
}

/// Ordered 9-tuple counts by exact convolution; `weighted` left at zero.
pub fn rep_count(
    nmax: u64,
    tables: &[&PsPrimeTable],
    budgets: &Budgets,
) -> Result<RepArray, Error> {
    rep_impl(nmax, tables, budgets, false)
}

/// Counts plus the weighted sums (one float convolution per factor).
pub fn weighted_t(
    nmax: u64,
    tables: &[&PsPrimeTable],
    budgets: &Budgets,
) -> Result<RepArray, Error> {
    rep_impl(nmax, tables, budgets, true)
}

/// Independent oracle: counts ordered 9-tuples with cube sum `n` by
/// meet-in-the-middle (4-fold sum map, then 5-level depth-first search
/// with interval pruning). Never shares code with the convolution path.
pub fn naive_rep_count(n: u64, tables: &[&PsPrimeTable], budgets: &Budgets) -> Result<u128, Error> {
    if tables.len() != 9 {
        return Err(Error::Domain(format!(
            "need exactly 9 prime tables, got {}",
            tables.len()
        )));
    }
    let mut cubes: Vec<Vec<u64>> = Vec::with_capacity(9);
    for t in tables {
        let mut cs: Vec<u64> = t
            .primes
            .iter()
            .map(|&p| cube(p))
            .collect::<Result<_, _>>()?;
        cs.sort_unstable();
        if cs.is_empty() {
            return Ok(0);
        }
        cubes.push(cs);
    }
    let front: u128 = cubes[..4].iter().map(|c| c.len() as u128).product();
    let back: u128 = cubes[4..].iter().map(|c| c.len() as u128).product();
    budgets.check_terms(front, "enumeration front half")?;
    budgets.check_terms(back, "enumeration back half")?;

    // All 4-fold sums of the first four positions, with multiplicity.
    let mut map4: HashMap<u64, u128> = HashMap::new();
    let mut min4 = u64::MAX;
    let mut max4 = 0u64;
    for &a in &cubes[0] {
        for &b in &cubes[1] {
            for &c in &cubes[2] {
                for &d in &cubes[3] {
                    let s = a + b + c + d;
                    if s > n {
                        continue;
                    }
                    *map4.entry(s).or_insert(0) += 1;
                    min4 = min4.min(s);
                    max4 = max4.max(s);
                }
            }
        }
    }
    if map4.is_empty() {
        return Ok(0);
    }

    // suffix_min[i] / suffix_max[i]: extreme sums over positions i..9.
    let mut suffix_min = [0u64; 6];
    let mut suffix_max = [0u64; 6];
    for i in (0..5).rev() {
        let list = &cubes[4 + i];
        suffix_min[i] = suffix_min[i + 1] + list[0];
        suffix_max[i] = suffix_max[i + 1] + list[list.len() - 1];
    }

    fn dfs(
        pos: usize,
        partial: u64,
        n: u64,
        cubes: &[Vec<u64>],
        suffix_min: &[u64; 6],
        suffix_max: &[u64; 6],
        map4: &HashMap<u64, u128>,
        min4: u64,
        max4: u64,
        total: &mut u128,
    ) {
        if pos == 5 {
            if let Some(rest) = n.checked_sub(partial) {
                if let Some(&m) = map4.get(&rest) {
                    *total += m;
                }
            }
            return;
        }
        for &c in &cubes[4 + pos] {
            let next = partial + c;
            // Ascending cubes: once the floor overshoots, every later cube does.
            if next + suffix_min[pos + 1] + min4 > n {
                break;
            }
            if next + suffix_max[pos + 1] + max4 < n {
                continue;
            }
            dfs(
                pos + 1,
                next,
                n,
                cubes,
                suffix_min,
                suffix_max,
                map4,
                min4,
                max4,
                total,
            );
        }
    }

    let mut total = 0u128;
    dfs(
        0,
        0,
        n,
        &cubes,
        &suffix_min,
        &suffix_max,
        &map4,
        min4,
        max4,
        &mut total,
    );
    Ok(total)
}

/// Cyclic convolution modulo `m` with exact entries.
fn cyclic_conv<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Zero + for<'r> AddAssign<&'r T>,
    for<'r> &'r T: Mul<&'r T, Output = T>,
{
    let m = a.len();
    let mut out = vec![T::zero(); m];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let k = (i + j) % m;
            let prod = ai * bj;
            out[k] += &prod;
        }
    }
    out
}

fn local_count_nine<T>(v: &[T], target: usize) -> T
where
    T: Clone + Zero + for<'r> AddAssign<&'r T>,
    for<'r> &'r T: Mul<&'r T, Output = T>,
{
    let v2 = cyclic_conv(v, v);
    let v4 = cyclic_conv(&v2, &v2);
    let v8 = cyclic_conv(&v4, &v4);
    let v9 = cyclic_conv(&v8, v);
    v9[target].clone()
}

/// Normalized local solution density: the number of solutions of
/// `x_1^3 + ... + x_9^3 = n (mod p^h)` in units, divided by the expected
/// count `phi(p^h)^9 / p^h` under equidistribution. Brute-force oracle
/// for the series-based local factors.
pub fn local_factor(p: u64, n: u64, h: u32, budgets: &Budgets) -> Result<f64, Error> {
    if p < 2 || (2..p).take(1000).any(|d| d * d <= p && p % d == 0) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if h == 0 {
        return Err(Error::domain("level h must be at least 1"));
    }
    let m = p
        .checked_pow(h)
        .filter(|&m| m <= 1_000_000)
        .ok_or_else(|| Error::Domain(format!("p^h exceeds the enumeration cap 10^6")))?;
    budgets.check_terms(
        4 * (m as u128) * (m as u128) + m as u128,
        "local density convolution",
    )?;
    budgets.check_mem(m as u128 * 16 * 5, "local density tables")?;

    let m_us = m as usize;
    let mut counts = vec![0u64; m_us];
    for x in 0..m {
        if x % p != 0 {
            let r = ((x as u128 * x as u128 % m as u128) * x as u128 % m as u128) as usize;
            counts[r] += 1;
        }
    }
    let phi = m - m / p;
    let phi9 = BigUint::from(phi).pow(9);
    let target = (n % m) as usize;
    let solutions: BigUint = if phi9 <= BigUint::from(u128::MAX) {
        let v: Vec<u128> = counts.iter().map(|&c| c as u128).collect();
        BigUint::from(local_count_nine(&v, target))
    } else {
        let v: Vec<BigUint> = counts.iter().map(|&c| BigUint::from(c)).collect();
        local_count_nine(&v, target)
    };
    let ratio = crate::Rational::new(
        BigInt::from(solutions * BigUint::from(m)),
        BigInt::from(phi9),
    );
    Ok(crate::exponent::rational_f64(&ratio))
}

/// Per-modulus singular-series terms `A(q, r)` for all `q <= q_max`,
/// assembled multiplicatively from prime-power tables.
#[derive(Debug, Clone)]
pub struct SingularSeriesTable {
    pub q_max: u64,
    /// `a_tables[q][r] = A(q, N)` for `N = r (mod q)`; `a_tables[1] = [1]`.
    a_tables: Vec<Vec<f64>>,
    primes: Vec<u64>,
}

/// `A(q, r)` evaluated straight from the definition: complete cubic unit
/// sums `S(q, a)` raised to the ninth power, averaged over reduced `a`
/// against `e(-a r / q)`, normalized by `phi(q)^9`. Works for any `q`;
/// production tables call it on prime powers only.
fn a_table_direct(q: u64) -> Vec<f64> {
    let qs = q as usize;
    if q == 1 {
        return vec![1.0];
    }
    let mut cube_counts = vec![0u32; qs];
    let mut phi = 0u64;
    for x in 1..=q {
        if x.gcd(&q) == 1 {
            phi += 1;
            let r = ((x as u128 * x as u128 % q as u128) * x as u128 % q as u128) as usize;
            cube_counts[r] += 1;
        }
    }
    let roots: Vec<Complex> = (0..qs).map(|k| e_of(k as f64 / q as f64)).collect();
    let mut s_pow9: Vec<Option<Complex>> = vec![None; qs];
    for a in 0..qs {
        if (a as u64).gcd(&q) != 1 {
            continue;
        }
        let mut s = Complex::new(0.0, 0.0);
        for (r, &c) in cube_counts.iter().enumerate() {
            if c > 0 {
                s += roots[a * r % qs] * c as f64;
            }
        }
        s_pow9[a] = Some(s.powu(9));
    }
    let phi9 = (phi as f64).powi(9);
    let mut out = vec![0.0f64; qs];
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex::new(0.0, 0.0);
        for (a, s9) in s_pow9.iter().enumerate() {
            if let Some(s9) = s9 {
                acc += s9 * roots[(qs - a * r % qs) % qs];
            }
        }
        *slot = acc.re / phi9;
    }
    out
}

impl SingularSeriesTable {
    pub fn new(q_max: u64, budgets: &Budgets) -> Result<Self, Error> {
        if q_max < 1 {
            return Err(Error::domain("truncation level must be at least 1"));
        }
        budgets.check_mem((q_max as u128 + 1) * (q_max as u128) * 4, "series tables")?;

        // Enumerate primes and prime powers up to q_max.
        let primes: Vec<u64> = crate::sieve::primes_up_to(q_max);
        let mut prime_powers: Vec<u64> = Vec::new();
        for &p in &primes {
            let mut pe = p;
            loop {
                prime_powers.push(pe);
                match pe.checked_mul(p) {
                    Some(next) if next <= q_max => pe = next,
                    _ => break,
                }
            }
        }
        let direct_ops: u128 = prime_powers
            .iter()
            .map(|&q| 2 * q as u128 * q as u128)
            .sum();
        budgets.check_terms(
            direct_ops + q_max as u128 * q_max as u128,
            "series table assembly",
        )?;

        let mut a_tables: Vec<Vec<f64>> = vec![Vec::new(); q_max as usize + 1];
        a_tables[1] = vec![1.0];
        for &q in &prime_powers {
            a_tables[q as usize] = a_table_direct(q);
        }
        // Composite moduli: A is multiplicative over coprime parts.
        for q in 2..=q_max {
            if !a_tables[q as usize].is_empty() {
                continue;
            }
            let mut parts: Vec<u64> = Vec::new();
            let mut rest = q;
            for &p in &primes {
                if p * p > rest {
                    break;
                }
                if rest % p == 0 {
                    let mut pe = 1u64;
                    while rest % p == 0 {
                        rest /= p;
                        pe *= p;
                    }
                    parts.push(pe);
                }
            }
            if rest > 1 {
                parts.push(rest);
            }
            let table: Vec<f64> = (0..q)
                .map(|r| {
                    parts
                        .iter()
                        .map(|&pe| a_tables[pe as usize][(r % pe) as usize])
                        .product()
                })
                .collect();
            a_tables[q as usize] = table;
        }
        Ok(SingularSeriesTable {
            q_max,
            a_tables,
            primes,
        })
    }

    /// `A(q, n)` for `q <= q_max`.
    pub fn a_term(&self, q: u64, n: u64) -> Result<f64, Error> {
        if q < 1 || q > self.q_max {
            return Err(Error::Domain(format!(
                "modulus {q} outside the tabulated range 1..={}",
                self.q_max
            )));
        }
        Ok(self.a_tables[q as usize][(n % q) as usize])
    }

    /// Truncated series `sum_{q <= q_max} A(q, n)`, ascending `q`.
    pub fn partial(&self, n: u64) -> f64 {
        let mut acc = 0.0;
        for q in 1..=self.q_max {
            acc += self.a_tables[q as usize][(n % q) as usize];
        }
        acc
    }

    /// Series-side local density at `p`: `1 + sum_{p^e <= q_max} A(p^e, n)`.
    pub fn local_factor_series(&self, p: u64, n: u64) -> Result<f64, Error> {
        if !self.primes.contains(&p) {
            return Err(Error::Domain(format!("{p} is not a tabulated prime")));
        }
        let mut acc = 1.0;
        let mut pe = p;
        loop {
            acc += self.a_tables[pe as usize][(n % pe) as usize];
            match pe.checked_mul(p) {
                Some(next) if next <= self.q_max => pe = next,
                _ => break,
            }
        }
        Ok(acc)
    }

    pub fn local_factors(&self, n: u64) -> Vec<(u64, f64)> {
        self.primes
            .iter()
            .map(|&p| (p, self.local_factor_series(p, n).expect("tabulated prime")))
            .collect()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }
}

/// A truncated singular-series evaluation at one target.
#[derive(Debug, Clone)]
pub struct SingularSeriesValue {
    pub n: u64,
    pub q: u64,
    pub partial: f64,
    pub local_factors: Vec<(u64, f64)>,
}

pub fn singular_series(n: u64, q: u64, budgets: &Budgets) -> Result<SingularSeriesValue, Error> {
    if n == 0 {
        return Err(Error::domain("target must be positive"));
    }
    let table = SingularSeriesTable::new(q, budgets)?;
    Ok(SingularSeriesValue {
        n,
        q,
        partial: table.partial(n),
        local_factors: table.local_factors(n),
    })
}

/// Gamma on the positive reals, via a fixed 9-term rational kernel
/// accurate to better than 12 significant digits (tests compare it
/// against an independent slow expansion).
pub fn gamma_function(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    const G: f64 = 7.0;
    let pi = std::f64::consts::PI;
    if x < 0.5 {
        pi / ((pi * x).sin() * gamma_function(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEF[0];
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + G + 0.5;
        (2.0 * pi).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// `Gamma(4/3)^9 / Gamma(3)`: the constant in front of `S(N) N^2`.
pub fn main_term_constant() -> f64 {
    gamma_function(4.0 / 3.0).powi(9) / gamma_function(3.0)
}

/// Expected weighted count for one target: `Gamma^9(4/3)/Gamma(3) * s * N^2`.
/// Only vectors with one shared exponent are emitted numerically; for
/// genuinely mixed exponents the normalization constant is not pinned
/// down here, so the conjectured formula is returned as an error string.
pub fn main_term(n: u64, s_value: f64, gammas: &[Exponent]) -> Result<f64, Error> {
    if gammas.len() != 9 {
        return Err(Error::Domain(format!(
            "need exactly 9 exponents, got {}",
            gammas.len()
        )));
    }
    if gammas.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Unsupported(
            "mixed exponent vectors are not emitted numerically; the conjectured \
             constant is prod_i Gamma(1 + g_i/3) / Gamma((g_1 + ... + g_9)/3) \
             in place of Gamma(4/3)^9 / Gamma(3)"
                .into(),
        ));
    }
    let nf = n as f64;
    Ok(main_term_constant() * s_value * nf * nf)
}

/// One comparison row: exact count, weighted sum, truncated main term.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub n: u64,
    pub count: BigUint,
    pub weighted: f64,
    pub main_term: f64,
    /// `weighted / main_term`, absent where the main term vanishes.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    /// Sum of weighted values over odd targets in the window.
    pub odd_weighted_sum: f64,
    /// Sum of main terms over odd targets in the window.
    pub odd_main_sum: f64,
    /// Mean of the pointwise ratios over odd targets whose main term is
    /// nonzero; absent if no odd target qualifies. Truncated series
    /// values can dip negative for individual targets, so single rows may
    /// carry negative ratios that the window average smooths out.
    pub window_ratio: Option<f64>,
}

/// Tabulates weighted counts against truncated main terms over a window.
/// Rows cover every `N` in `[nlo, nhi]`; the window average is taken over
/// odd targets only (even targets carry a collapsing series).
pub fn compare_window(
    nlo: u64,
    nhi: u64,
    gammas: &[Exponent],
    q_trunc: u64,
    budgets: &Budgets,
) -> Result<CompareReport, Error> {
    if nlo < 1 || nhi < nlo {
        return Err(Error::domain("need 1 <= nlo <= nhi"));
    }
    if gammas.len() != 9 {
        return Err(Error::Domain(format!(
            "need exactly 9 exponents, got {}",
            gammas.len()
        )));
    }
    if gammas.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Unsupported(
            "window comparison requires one shared exponent (see main term)".into(),
        ));
    }
    let limit = nhi.cbrt();
    let table = ps_primes_with(limit.max(1), gammas[0], budgets)?;
    let refs: Vec<&PsPrimeTable> = vec![&table; 9];
    let reps = weighted_t(nhi, &refs, budgets)?;
    let series = SingularSeriesTable::new(q_trunc, budgets)?;
    let constant = main_term_constant();

    let mut rows = Vec::with_capacity((nhi - nlo + 1) as usize);
    let mut odd_weighted_sum = 0.0;
    let mut odd_main_sum = 0.0;
    let mut ratio_sum = 0.0;
    let mut ratio_count = 0u64;
    for n in nlo..=nhi {
        let nf = n as f64;
        let main = constant * series.partial(n) * nf * nf;
        let weighted = reps.weighted[n as usize];
        let ratio = if main != 0.0 {
            Some(weighted / main)
        } else {
            None
        };
        if n % 2 == 1 {
            odd_weighted_sum += weighted;
            odd_main_sum += main;
            if let Some(r) = ratio {
                ratio_sum += r;
                ratio_count += 1;
            }
        }
        rows.push(CompareRow {
            n,
            count: reps.counts[n as usize].clone(),
            weighted,
            main_term: main,
            ratio,
        });
    }
    let window_ratio = if ratio_count > 0 {
        Some(ratio_sum / ratio_count as f64)
    } else {
        None
    };
    Ok(CompareReport {
        rows,
        odd_weighted_sum,
        odd_main_sum,
        window_ratio,
    })
}
