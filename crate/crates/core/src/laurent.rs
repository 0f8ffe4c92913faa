//! Sparse Laurent polynomials in one variable and in several variables.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};

pub const DEFAULT_WINDOW: i64 = 12;

/// Adds `c * x^key` into `terms`, dropping the entry if it cancels.
pub fn accumulate<K: Ord>(terms: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    window: i64,
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero(window: i64) -> Self {
        LaurentPoly {
            window,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(window: i64, exp: i64, c: Scalar) -> Result<Self> {
        Self::from_terms(window, [(exp, c)])
    }

    pub fn from_terms(window: i64, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Result<Self> {
        let mut out = Self::zero(window);
        for (e, c) in terms {
            if e.abs() > window {
                return Err(Error::WindowExhausted);
            }
            accumulate(&mut out.terms, e, c);
        }
        Ok(out)
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, *e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.window);
        for (e, v) in &self.terms {
            accumulate(&mut out.terms, *e, v * c);
        }
        out
    }

    /// Product; fails rather than drop a term outside the window.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut raw = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                accumulate(&mut raw, a + b, x * y);
            }
        }
        Self::from_terms(self.window, raw)
    }

    /// `f(c z)`.
    pub fn dilate(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.window);
        for (e, v) in &self.terms {
            accumulate(&mut out.terms, *e, v * powi(c, *e));
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("window mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Scalar::from_integer(1.into()))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("window mismatch or overflow")
    }
}

/// Exponent vector of a monomial in `x_1..x_N`.
pub type MultiMonomial = Vec<i64>;

/// Sparse Laurent polynomial in several variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    pub terms: BTreeMap<MultiMonomial, Scalar>,
}

impl MultiPoly {
    pub fn monomial(exps: MultiMonomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, exps, c);
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &MultiPoly, c: &Scalar) {
        for (e, v) in &other.terms {
            accumulate(&mut self.terms, e.clone(), v * c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, one};

    #[test]
    fn basic_arithmetic() {
        let z2 = LaurentPoly::monomial(12, 2, one()).unwrap();
        assert_eq!(&z2 + &LaurentPoly::zero(12), z2);
        let z = LaurentPoly::monomial(12, 1, one()).unwrap();
        let zi = LaurentPoly::monomial(12, -1, one()).unwrap();
        assert_eq!(&z * &zi, LaurentPoly::monomial(12, 0, one()).unwrap());
        assert!((&z2 - &z2).is_zero());
        assert_eq!(z2.coefficient(2), one());
        assert_eq!(z2.coefficient(5), int(0));
        assert_eq!(z.try_add(&LaurentPoly::zero(3)), Err(Error::WindowMismatch));
        let big = LaurentPoly::monomial(12, 7, one()).unwrap();
        assert_eq!(big.try_mul(&big), Err(Error::WindowExhausted));
    }
}
