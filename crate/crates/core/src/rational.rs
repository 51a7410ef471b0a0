//! Exact rational numbers and their `p/q` text form.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision exact fraction used throughout the crate.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {input:?}")]
pub struct ParseRationalError {
    pub input: String,
}

/// Builds `num/den` from machine integers.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-k` as an exact rational.
pub fn pow2_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Accumulates a sum of rationals by grouping numerators over equal
/// denominators, so reduction happens once per distinct denominator rather
/// than once per term.
#[derive(Debug, Default)]
pub(crate) struct RationalSum {
    groups: HashMap<BigInt, BigInt>,
}

impl RationalSum {
    pub(crate) fn add(&mut self, r: &Rational) {
        match self.groups.get_mut(r.denom()) {
            Some(n) => *n += r.numer(),
            None => {
                self.groups.insert(r.denom().clone(), r.numer().clone());
            }
        }
    }

    pub(crate) fn sub(&mut self, r: &Rational) {
        match self.groups.get_mut(r.denom()) {
            Some(n) => *n -= r.numer(),
            None => {
                self.groups.insert(r.denom().clone(), -r.numer());
            }
        }
    }

    pub(crate) fn total(self) -> Rational {
        self.groups
            .into_iter()
            .map(|(d, n)| Rational::new(n, d))
            .sum()
    }
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Whitespace around the tokens is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_string() };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Renders in lowest terms as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let whole = a.trunc();
    let mut frac = a - &whole;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&whole.numer().to_string());
    if digits > 0 {
        out.push('.');
        let ten = int(10);
        for _ in 0..digits {
            frac *= &ten;
            let d = frac.trunc();
            out.push_str(&d.numer().to_string());
            frac -= d;
        }
    }
    out
}

pub(crate) fn half() -> Rational {
    ratio(1, 2)
}
