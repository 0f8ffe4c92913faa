//! Truncated polynomials in the times `t_1..t_K`, graded by weight `wt(t_k) = k`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::accumulate;
use crate::scalar::{self, one, powi, Scalar};

/// Exponents of `t_1..t_K`.
pub type TMonomial = Vec<u32>;

pub fn weight(mono: &[u32]) -> usize {
    mono.iter()
        .enumerate()
        .map(|(i, e)| (i + 1) * *e as usize)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSeries {
    order: usize,
    max_weight: usize,
    terms: BTreeMap<TMonomial, Scalar>,
}

impl TSeries {
    pub fn zero(order: usize, max_weight: usize) -> Self {
        TSeries {
            order,
            max_weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(order: usize, max_weight: usize, c: Scalar) -> Self {
        let mut s = Self::zero(order, max_weight);
        s.push(vec![0; order], c);
        s
    }

    /// `c * t_k`; zero if `t_k` alone already exceeds the weight cap.
    pub fn time(order: usize, max_weight: usize, k: usize, c: Scalar) -> Result<Self> {
        if k == 0 || k > order {
            return Err(Error::TruncationOverflow {
                index: k as i64,
                order,
            });
        }
        let mut s = Self::zero(order, max_weight);
        let mut mono = vec![0; order];
        mono[k - 1] = 1;
        s.push(mono, c);
        Ok(s)
    }

    /// Inserts a term, discarding it when its weight is above the cap.
    pub fn push(&mut self, mono: TMonomial, c: Scalar) {
        assert_eq!(mono.len(), self.order, "monomial length");
        if weight(&mono) <= self.max_weight {
            accumulate(&mut self.terms, mono, c);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn terms(&self) -> &BTreeMap<TMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_of(&self, mono: &[u32]) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient_of(&vec![0; self.order])
    }

    /// Homogeneous part of weight `w`.
    pub fn weight_component(&self, w: usize) -> Self {
        let mut out = Self::zero(self.order, self.max_weight);
        for (m, c) in &self.terms {
            if weight(m) == w {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// The same series in the ring with a lower weight cap.
    pub fn truncate(&self, max_weight: usize) -> Self {
        let mut out = Self::zero(self.order, max_weight.min(self.max_weight));
        for (m, c) in &self.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.max_weight != other.max_weight {
            return Err(Error::WindowMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.order, self.max_weight);
        for (m, v) in &self.terms {
            accumulate(&mut out.terms, m.clone(), v * c);
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = Self::zero(self.order, self.max_weight);
        for (a, x) in &self.terms {
            let wa = weight(a);
            for (b, y) in &other.terms {
                if wa + weight(b) > self.max_weight {
                    continue;
                }
                let mono = a.iter().zip(b).map(|(i, j)| i + j).collect();
                accumulate(&mut out.terms, mono, x * y);
            }
        }
        Ok(out)
    }

    /// `exp(s)` up to the weight cap, one weight at a time through
    /// `w E_w = sum_k k s_k E_{w-k}` (`s_k`, `E_w` the homogeneous parts).
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let parts: Vec<Self> = (0..=self.max_weight)
            .map(|k| self.weight_component(k).scale(&scalar::int(k as i64)))
            .collect();
        let mut levels = vec![Self::constant(self.order, self.max_weight, one())];
        for w in 1..=self.max_weight {
            let mut level = Self::zero(self.order, self.max_weight);
            for k in 1..=w {
                if parts[k].is_zero() || levels[w - k].is_zero() {
                    continue;
                }
                level = level.try_add(&parts[k].try_mul(&levels[w - k])?)?;
            }
            levels.push(level.scale(&scalar::ratio(1, w as i64)));
        }
        let mut out = Self::zero(self.order, self.max_weight);
        for level in &levels {
            out = out.try_add(level)?;
        }
        Ok(out)
    }

    /// Substitutes `t_k -> c_k t_k`; `factors[k-1]` is `c_k`.
    pub fn rescale_times(&self, factors: &[Scalar]) -> Self {
        assert!(factors.len() >= self.order, "one factor per time");
        let mut out = Self::zero(self.order, self.max_weight);
        for (m, v) in &self.terms {
            let mut c = v.clone();
            for (i, e) in m.iter().enumerate() {
                c *= powi(&factors[i], *e as i64);
            }
            accumulate(&mut out.terms, m.clone(), c);
        }
        out
    }

    /// `d/dt_k`.
    pub fn derivative(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.order {
            return Err(Error::TruncationOverflow {
                index: k as i64,
                order: self.order,
            });
        }
        let mut out = Self::zero(self.order, self.max_weight);
        for (m, v) in &self.terms {
            let e = m[k - 1];
            if e == 0 {
                continue;
            }
            let mut mono = m.clone();
            mono[k - 1] -= 1;
            accumulate(&mut out.terms, mono, v * scalar::int(e as i64));
        }
        Ok(out)
    }

    /// Value at `t = 0`.
    pub fn at_origin(&self) -> Scalar {
        self.constant_term()
    }

    /// Substitutes numeric values for every time; exact because the series is finite.
    pub fn evaluate(&self, values: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, e)| acc * powi(&values[i], *e as i64))
            })
            .sum()
    }
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        self.scale(&-one())
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        self + &(-rhs)
    }
}

impl Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, rhs: &TSeries) -> TSeries {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn t(k: usize) -> TSeries {
        TSeries::time(3, 4, k, one()).unwrap()
    }

    #[test]
    fn square_of_one_plus_t1() {
        let a = &TSeries::constant(3, 4, one()) + &t(1);
        let sq = &a * &a;
        assert_eq!(sq.coefficient_of(&[0, 0, 0]), one());
        assert_eq!(sq.coefficient_of(&[1, 0, 0]), int(2));
        assert_eq!(sq.coefficient_of(&[2, 0, 0]), one());
        assert_eq!(sq.terms().len(), 3);
    }

    #[test]
    fn exp_of_t1_at_weight_two() {
        let s = TSeries::time(1, 2, 1, one()).unwrap();
        let e = s.exp().unwrap();
        assert_eq!(e.coefficient_of(&[0]), one());
        assert_eq!(e.coefficient_of(&[1]), one());
        assert_eq!(e.coefficient_of(&[2]), ratio(1, 2));
        assert_eq!(e.terms().len(), 3);
        assert!(TSeries::zero(1, 2).exp().unwrap() == TSeries::constant(1, 2, one()));
        assert_eq!(
            TSeries::constant(1, 2, one()).exp(),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn exp_weight_two_component() {
        // exp(t1 x + t2 x^2/2): the x^2 coefficient is t1^2/2 + t2/2.
        let s = &t(1) + &t(2).scale(&ratio(1, 2));
        let e = s.exp().unwrap().weight_component(2);
        assert_eq!(e.coefficient_of(&[2, 0, 0]), ratio(1, 2));
        assert_eq!(e.coefficient_of(&[0, 1, 0]), ratio(1, 2));
        assert_eq!(e.terms().len(), 2);
    }

    #[test]
    fn rescale_and_derivative() {
        let (p, q) = (ratio(1, 2), ratio(1, 3));
        let c: Vec<Scalar> = (1..=3).map(|k| powi(&q, k) - powi(&p, k)).collect();
        let t1t2 = &t(1) * &t(2);
        let r = t1t2.rescale_times(&c);
        assert_eq!(r.coefficient_of(&[1, 1, 0]), &c[0] * &c[1]);
        assert_eq!(t1t2.rescale_times(&[one(), one(), one()]), t1t2);
        assert_eq!(t1t2.derivative(2).unwrap(), t(1));
        assert!(t(3).derivative(1).unwrap().is_zero());
    }
}
