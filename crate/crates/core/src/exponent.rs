//! Exact rational exponents.
//!
//! A [`Exponent`] is a reduced fraction `a/b` confined to the half-open
//! interval `(1/2, 1]`. It drives every floor-sequence decision, so it is
//! stored as integers and converted to `f64` only inside analytic probes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::{Error, Rational};

/// Reduced rational exponent `a/b` with `1/2 < a/b <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    num: u64,
    den: u64,
}

impl Exponent {
    /// Builds `a/b`, reducing and validating `1/2 < a/b <= 1`.
    pub fn new(num: u64, den: u64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::domain("exponent denominator must be nonzero"));
        }
        if num == 0 {
            return Err(Error::domain("exponent must be positive"));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        // 1/2 < a/b  <=>  2a > b;  a/b <= 1  <=>  a <= b.
        if 2 * num <= den || num > den {
            return Err(Error::Domain(format!(
                "exponent {num}/{den} outside (1/2, 1]"
            )));
        }
        Ok(Exponent { num, den })
    }

    /// Numerator of the reduced fraction.
    pub fn num(&self) -> u64 {
        self.num
    }

    /// Denominator of the reduced fraction.
    pub fn den(&self) -> u64 {
        self.den
    }

    /// True for the degenerate exponent 1 (the identity floor map).
    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Value as a double, for analytic probes only.
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Value as an exact rational.
    pub fn as_rational(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Exact `1 - a/b`.
    pub fn one_minus(&self) -> Rational {
        Rational::new(BigInt::from(self.den - self.num), BigInt::from(self.den))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Parses the strict form `a/b` (no whitespace, no bare integers).
    fn from_str(s: &str) -> Result<Self, Error> {
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| Error::Domain(format!("exponent {s:?} must have the form a/b")))?;
        let num: u64 = a
            .parse()
            .map_err(|_| Error::Domain(format!("bad exponent numerator {a:?}")))?;
        let den: u64 = b
            .parse()
            .map_err(|_| Error::Domain(format!("bad exponent denominator {b:?}")))?;
        Exponent::new(num, den)
    }
}

/// Parses a nonnegative rational written as `a/b` or a bare integer `a`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.parse()
            .map_err(|_| Error::Domain(format!("bad rational component {t:?}")))
    };
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let den = parse_int(b)?;
            if den == BigInt::from(0) {
                return Err(Error::domain("rational denominator must be nonzero"));
            }
            Rational::new(parse_int(a)?, den)
        }
        None => Rational::from(parse_int(s)?),
    };
    Ok(value)
}

/// Renders a rational as `a/b` (or `a` when integral).
pub fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Double-precision value of a rational, for report decimals only.
pub fn rational_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_reduced_and_unreduced_forms() {
        let e = Exponent::new(9, 10).unwrap();
        assert_eq!((e.num(), e.den()), (9, 10));
        let e = Exponent::new(18, 20).unwrap();
        assert_eq!((e.num(), e.den()), (9, 10));
        let one = Exponent::new(7, 7).unwrap();
        assert!(one.is_one());
        assert_eq!(one.to_string(), "1/1");
    }

    #[test]
    fn rejects_values_outside_the_half_open_interval() {
        assert!(Exponent::new(1, 2).is_err()); // exactly 1/2 excluded
        assert!(Exponent::new(3, 7).is_err());
        assert!(Exponent::new(11, 10).is_err());
        assert!(Exponent::new(0, 3).is_err());
        assert!(Exponent::new(1, 0).is_err());
    }

    #[test]
    fn parses_strict_slash_form_only() {
        assert_eq!(
            "3/4".parse::<Exponent>().unwrap(),
            Exponent::new(3, 4).unwrap()
        );
        assert!("0.75".parse::<Exponent>().is_err());
        assert!("1".parse::<Exponent>().is_err());
        assert!(" 3/4".parse::<Exponent>().is_err());
    }

    #[test]
    fn exact_complement() {
        let e = Exponent::new(199, 200).unwrap();
        assert_eq!(e.one_minus(), Rational::new(1.into(), 200.into()));
        assert_eq!(rational_str(&e.one_minus()), "1/200");
    }

    #[test]
    fn parses_general_rationals() {
        assert_eq!(
            parse_rational("7/1000").unwrap(),
            Rational::new(7.into(), 1000.into())
        );
        assert_eq!(
            parse_rational("0").unwrap(),
            Rational::from(BigInt::from(0))
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
