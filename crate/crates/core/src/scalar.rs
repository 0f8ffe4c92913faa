//! Exact rational scalars and their textual form `num/den`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

pub type Scalar = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseScalarError(pub String);

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `x^e` for any integer exponent; `x` must be nonzero when `e < 0`.
pub fn powi(x: &Scalar, e: i64) -> Scalar {
    if e >= 0 {
        Pow::pow(x, e as u64)
    } else {
        Pow::pow(x.recip(), e.unsigned_abs())
    }
}

pub fn factorial(n: u64) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Scalar::from_integer(acc)
}

pub fn binomial(n: u64, k: u64) -> Scalar {
    if k > n {
        return zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn sign(even: bool) -> Scalar {
    if even {
        one()
    } else {
        -one()
    }
}

/// Renders `3/4`, `-2/1`, `0/1`: the denominator is always written.
pub fn format(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(s: &str) -> Result<Scalar, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Scalar::new(n, d))
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

/// Serde adapter writing a scalar as its `num/den` string.
pub mod serde_text {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for x in [ratio(2, 3), ratio(-6, 4), zero(), int(7)] {
            assert_eq!(parse(&format(&x)).unwrap(), x);
        }
        assert_eq!(format(&ratio(-6, 4)), "-3/2");
        assert_eq!(format(&zero()), "0/1");
        assert!(parse("1/0").is_err());
        assert!(parse("a/2").is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(powi(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(powi(&ratio(2, 3), 0), one());
    }

    #[test]
    fn small_factorials() {
        assert_eq!(factorial(0), one());
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 5), zero());
    }
}
