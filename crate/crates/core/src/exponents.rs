//! Exact rational bookkeeping for the nine-exponent admissibility system.
//!
//! Everything in this module is integer-exact: no floating point touches
//! any decision. The objects are
//!
//! - delta vectors `Delta_i = (3/8) sum_{j>i} (1 - gamma_j)`,
//! - the admissibility margins `(80/3)((1 - gamma_i) + Delta_i) < 1`,
//! - sharp common-exponent thresholds for patterns that pin some
//!   positions at exponent 1,
//! - the derived range budget `a, b, c` with the `H0`/`H1` exponents and
//!   its consistency flags, and
//! - the three-way split of a factored dyadic range into a balanced
//!   bilinear shape (the case partition).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::expsum::BilinearKind;
use crate::{Error, Exponent, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Nine exponents together with their exact delta vector.
#[derive(Debug, Clone)]
pub struct GammaVector {
    pub gammas: Vec<Exponent>,
    /// `deltas[i] = (3/8) sum_{j>i} (1 - gammas[j])`; the last entry is 0.
    pub deltas: Vec<Rational>,
}

/// Builds the delta vector for exactly nine exponents.
pub fn delta_vector(gammas: &[Exponent]) -> Result<GammaVector, Error> {
    if gammas.len() != 9 {
        return Err(Error::Domain(format!(
            "need exactly 9 exponents, got {}",
            gammas.len()
        )));
    }
    let mut deltas = vec![Rational::zero(); 9];
    let mut suffix = Rational::zero();
    for i in (0..9).rev() {
        deltas[i] = rat(3, 8) * &suffix;
        suffix += gammas[i].one_minus();
    }
    Ok(GammaVector {
        gammas: gammas.to_vec(),
        deltas,
    })
}

impl GammaVector {
    /// Left-hand sides `(80/3)((1 - gamma_i) + Delta_i)`, one per position;
    /// admissibility asks each to be strictly below 1.
    pub fn constraints(&self) -> Vec<Rational> {
        self.gammas
            .iter()
            .zip(&self.deltas)
            .map(|(g, d)| rat(80, 3) * (g.one_minus() + d))
            .collect()
    }

    pub fn admissible(&self) -> bool {
        let one = Rational::one();
        self.constraints().iter().all(|c| *c < one)
    }
}

/// Infimum of the shared exponent `t` making the pattern admissible, where
/// `fixed[i] = true` pins position `i` at exponent 1 and every other
/// position carries `t`. Solved exactly from the binding constraint: with
/// `c_i` free positions after `i`, position `i` contributes the
/// coefficient `80/3 + 10 c_i` (free) or `10 c_i` (fixed) against `1 - t`.
pub fn threshold(fixed: &[bool]) -> Result<Rational, Error> {
    if fixed.len() != 9 {
        return Err(Error::Domain(format!(
            "need exactly 9 pattern entries, got {}",
            fixed.len()
        )));
    }
    if fixed.iter().all(|&f| f) {
        return Err(Error::domain(
            "every position is pinned at 1; no shared exponent to solve for",
        ));
    }
    let mut binding = Rational::zero();
    for i in 0..9 {
        let free_after = (i + 1..9).filter(|&j| !fixed[j]).count() as i64;
        let coeff = if fixed[i] {
            rat(10 * free_after, 1)
        } else {
            rat(80, 3) + rat(10 * free_after, 1)
        };
        if coeff > binding {
            binding = coeff;
        }
    }
    Ok(Rational::one() - binding.recip())
}

/// Consistency flags carried by a range budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetFlags {
    /// `b < 2/3`.
    pub b_lt_two_thirds: bool,
    /// `1 - c < c - b`.
    pub gap_ok: bool,
    /// `b < a`.
    pub b_lt_a: bool,
    /// `(80/3)((1 - gamma) + Delta) < 1`.
    pub admissible: bool,
}

impl BudgetFlags {
    pub fn all(&self) -> bool {
        self.b_lt_two_thirds && self.gap_ok && self.b_lt_a && self.admissible
    }
}

/// The derived range budget: three exponents `a, b, c` classifying
/// bilinear ranges, plus the truncation exponents for the two harmonic
/// cutoffs.
#[derive(Debug, Clone)]
pub struct ExponentBudget {
    pub gamma: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub a_frak: Rational,
    pub b_frak: Rational,
    pub c_frak: Rational,
    /// `1 - gamma + Delta + 7 epsilon`.
    pub h0_exp: Rational,
    /// `1 - gamma`.
    pub h1_exp: Rational,
    pub flags: BudgetFlags,
}

pub fn budget(
    gamma: &Rational,
    delta: &Rational,
    epsilon: &Rational,
) -> Result<ExponentBudget, Error> {
    let one = Rational::one();
    if !(*gamma > rat(1, 2) && *gamma <= one) {
        return Err(Error::domain("gamma must lie in (1/2, 1]"));
    }
    if delta.is_negative() || *delta >= rat(1, 2) {
        return Err(Error::domain("Delta must lie in [0, 1/2)"));
    }
    if epsilon.is_negative() {
        return Err(Error::domain("epsilon must be nonnegative"));
    }
    let s = &one - gamma;
    let a_frak = std::cmp::min(
        rat(3, 4) - rat(7, 2) * &s - rat(15, 4) * delta - rat(27, 1) * epsilon,
        &one - rat(8, 1) * &s - rat(8, 1) * delta - rat(56, 1) * epsilon,
    );
    let b_frak = rat(16, 1) * (&s + delta) + rat(112, 1) * epsilon;
    let c_frak = std::cmp::min(
        rat(16, 17) - rat(16, 17) * &s - rat(32, 17) * delta - rat(224, 17) * epsilon,
        rat(2, 1) - rat(32, 1) * &s - rat(32, 1) * delta - rat(224, 1) * epsilon,
    );
    let flags = BudgetFlags {
        b_lt_two_thirds: b_frak < rat(2, 3),
        gap_ok: &one - &c_frak < &c_frak - &b_frak,
        b_lt_a: b_frak < a_frak,
        admissible: rat(80, 3) * (&s + delta) < one,
    };
    Ok(ExponentBudget {
        gamma: gamma.clone(),
        delta: delta.clone(),
        epsilon: epsilon.clone(),
        h0_exp: &s + delta + rat(7, 1) * epsilon,
        h1_exp: s,
        a_frak,
        b_frak,
        c_frak,
        flags,
    })
}

/// Outcome of splitting a six-factor exponent vector into a bilinear shape.
#[derive(Debug, Clone)]
pub struct CasePartition {
    /// 1, 2, or 3.
    pub case_label: u8,
    /// Type I for case 1, Type II otherwise.
    pub kind: BilinearKind,
    /// Exponent of the long (coefficient) range; `m_exp + k_exp = 1`.
    pub m_exp: Rational,
    /// Exponent of the grouped range.
    pub k_exp: Rational,
    /// Case 3 only: how many (sorted) factors were grouped.
    pub ell: Option<usize>,
    /// Case 3 only: the descending order applied to the input entries.
    pub order: Option<Vec<usize>>,
}

/// Splits a vector of six nonnegative exponents summing to 1 against a
/// budget whose flags all hold:
///
/// - case 1: some entry reaches `[1-b, 1]` (possible only among the first
///   three, since the last three are capped at 1/3 < 1-b) — Type I with
///   that entry as the grouped range;
/// - case 2: some entry lands in `[1-c, 1-b)` — Type II;
/// - case 3: all entries fall below `1-c`; sort descending and group the
///   minimal prefix reaching `1-c`, which the gap flag keeps below `1-b` —
///   Type II.
pub fn case_partition(evec: &[Rational], budget: &ExponentBudget) -> Result<CasePartition, Error> {
    if evec.len() != 6 {
        return Err(Error::Domain(format!(
            "need exactly 6 exponent entries, got {}",
            evec.len()
        )));
    }
    if evec.iter().any(|e| e.is_negative()) {
        return Err(Error::domain("exponent entries must be nonnegative"));
    }
    let one = Rational::one();
    let total: Rational = evec.iter().sum();
    if total != one {
        return Err(Error::domain("exponent entries must sum to exactly 1"));
    }
    let third = rat(1, 3);
    for (i, e) in evec.iter().enumerate().skip(3) {
        if *e > third {
            return Err(Error::Domain(format!(
                "entry {} exceeds 1/3; the last three factors are capped",
                i + 1
            )));
        }
    }
    if !budget.flags.all() {
        return Err(Error::domain(
            "the budget's consistency flags must all hold before partitioning",
        ));
    }

    let type_one_floor = &one - &budget.b_frak;
    let type_two_floor = &one - &budget.c_frak;

    for (i, e) in evec.iter().enumerate() {
        if *e >= type_one_floor {
            if i > 2 {
                return Err(Error::domain(
                    "consistency violation: a capped entry reached the Type-I range",
                ));
            }
            return Ok(CasePartition {
                case_label: 1,
                kind: BilinearKind::TypeI,
                m_exp: &one - e,
                k_exp: e.clone(),
                ell: None,
                order: None,
            });
        }
    }
    for e in evec {
        if *e >= type_two_floor {
            return Ok(CasePartition {
                case_label: 2,
                kind: BilinearKind::TypeII,
                m_exp: &one - e,
                k_exp: e.clone(),
                ell: None,
                order: None,
            });
        }
    }

    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| evec[b].cmp(&evec[a]));
    let mut prefix = Rational::zero();
    for (pos, &i) in order.iter().enumerate() {
        prefix += &evec[i];
        if prefix >= type_two_floor {
            if prefix >= type_one_floor {
                return Err(Error::domain(
                    "consistency violation: the grouped prefix overshot the Type-II window",
                ));
            }
            return Ok(CasePartition {
                case_label: 3,
                kind: BilinearKind::TypeII,
                m_exp: &one - &prefix,
                k_exp: prefix,
                ell: Some(pos + 1),
                order: Some(order),
            });
        }
    }
    Err(Error::domain(
        "consistency violation: no case applies to the exponent vector",
    ))
}

/// Samples an exact rational pair `(gamma, Delta)` in the admissible
/// region `(1 - gamma) + Delta < 3/80`.
pub fn sample_admissible_pair<R: Rng>(rng: &mut R) -> (Rational, Rational) {
    let n: i64 = 10_000;
    let u = rng.gen_range(0..n);
    let v = rng.gen_range(0..n - u);
    let gamma = Rational::one() - rat(3, 80) * rat(u, n);
    let delta = rat(3, 80) * rat(v, n);
    (gamma, delta)
}
