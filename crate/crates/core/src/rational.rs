//! Exact rationals, Bernoulli numbers and the rational entry formats used by
//! problem and field files.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli numbers `B_0..=B_n` with the convention `B_1 = -1/2`, i.e. the
/// coefficients of `z / (e^z - 1)`. That convention is the one that makes
/// `sum B_k / k! ad^k` the inverse of the exponential's differential; the
/// other sign choice flips the first-order correction.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    table.push(Rational::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let acc = table
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, b)| {
                acc + Rational::from_integer(binomial(m + 1, k)) * b
            });
        table.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    table
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_table(n).pop().expect("table is non-empty")
}

/// Parses an exact decimal such as `-1.25`, `3`, `2.5e-3`, or a fraction `7/3`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not an exact rational: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let joined = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&joined).map_err(|_| err())?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Ok(if negative { -value } else { value })
}

/// Serialized rational: a `[num, den]` pair, a decimal string, or a JSON
/// integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalEntry {
    Pair([i64; 2]),
    Text(String),
    Integer(i64),
}

impl RationalEntry {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalEntry::Pair([n, d]) => {
                if *d == 0 {
                    Err(Error::Parse("zero denominator".into()))
                } else {
                    Ok(ratio(*n, *d))
                }
            }
            RationalEntry::Text(s) => parse_rational(s),
            RationalEntry::Integer(n) => Ok(int(*n)),
        }
    }

    /// Pair form when numerator and denominator fit in `i64`, otherwise the
    /// `num/den` text form.
    pub fn from_rational(q: &Rational) -> Self {
        use num_traits::ToPrimitive;
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => RationalEntry::Pair([n, d]),
            _ => RationalEntry::Text(q.to_string()),
        }
    }
}

/// Largest absolute value in a slice of rationals, zero for an empty slice.
pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|q| q.abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn bernoulli_recurrence_to_twenty() {
        let b = bernoulli_table(20);
        for n in 1..=20 {
            let sum = (0..=n).fold(Rational::zero(), |acc, k| {
                acc + Rational::from_integer(binomial(n + 1, k)) * &b[k]
            });
            assert!(sum.is_zero(), "recurrence fails at n = {n}");
        }
        for n in (3..=20).step_by(2) {
            assert!(b[n].is_zero());
        }
    }

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("1.5e2").unwrap(), int(150));
        assert_eq!(parse_rational("2.5e-3").unwrap(), ratio(1, 400));
        assert_eq!(parse_rational("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn entry_forms() {
        let e: Vec<RationalEntry> = serde_json::from_str(r#"[[1, 3], "-0.5", 4]"#).unwrap();
        let q: Vec<Rational> = e.iter().map(|x| x.to_rational().unwrap()).collect();
        assert_eq!(q, vec![ratio(1, 3), ratio(-1, 2), int(4)]);
        assert_eq!(RationalEntry::from_rational(&ratio(-2, 6)), RationalEntry::Pair([-1, 3]));
    }
}
