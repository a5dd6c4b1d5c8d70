//! Exact scalars.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Its `Display` form is `p/q`, or just `p` when the
//! denominator is one; that string is the serialized form used everywhere.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("`{text}` is not a rational of the form p or p/q"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidArgument(format!("`{text}` has a zero denominator")));
    }
    Ok(Rational::new(n, d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The exact rational value of a finite double.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// `r` as an `i64`, when it is an integer in range.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = Rational::one();
    for j in 0..k {
        acc = acc * int((n - j) as i64) / int((j + 1) as i64);
    }
    acc
}

/// Falling power `x(x-1)...(x-n+1)`; the empty product for `n = 0` is 1.
pub fn falling_power(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..n {
        acc *= x - int(j as i64);
    }
    acc
}

/// `(-1)^k` as a rational.
pub fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn pow(r: &Rational, n: usize) -> Rational {
    num_traits::pow(r.clone(), n)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_string`] for sequences.
pub mod serde_string_vec {
    use super::{parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_power_examples() {
        assert_eq!(falling_power(&int(3), 2), int(6));
        assert_eq!(falling_power(&rat(7, 3), 0), int(1));
        assert_eq!(falling_power(&int(2), 3), int(0));
    }

    #[test]
    fn falling_power_vanishes_below_order() {
        for n in 0..8usize {
            for x in 0..n {
                assert!(falling_power(&int(x as i64), n).is_zero(), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(rat(6, -4).to_string(), "-3/2");
        assert_eq!(rat(8, 4).to_string(), "2");
        assert_eq!(parse_rational(" -10/4 ").unwrap(), rat(-5, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomial_row() {
        let row: Vec<_> = (0..=5).map(|k| binomial(5, k)).collect();
        assert_eq!(row, vec![int(1), int(5), int(10), int(10), int(5), int(1)]);
    }
}
