//! Time-space machinery: Bell coefficients, determinant operators, the
//! constraint operators of the elliptic and toy matrix models, and a truncated
//! theta product.
//!
//! A [`TOperator`] is a finite sum of `c(t) * d/dt_{k1} ... d/dt_{kn}`. Index 0
//! stands for `d/dt_0`; series never depend on `t_0`, while on moments it acts as
//! the identity because `M_j` carries the factor `exp(t_0)`.

mod bell;
mod det;
mod theta;
mod toy;
mod wtilde;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::accumulate;
use crate::operator::{Comparison, Witness};
use crate::scalar::{factorial, one, Scalar};
use crate::tseries::{TMonomial, TSeries};

pub use bell::{bell_coefficients, bell_recursive, rescaled_bell, rescaling_factors, verify_bell_recursion, verify_rescaled_times};
pub use det::{
    det_operator, multi_index_det_operator, power_sum_exponential, verify_det_base, verify_det_property,
    verify_multi_index, verify_multi_index_symmetric,
};
pub use theta::{theta_eval, theta_pq_display, verify_theta_pq_remark};
pub use toy::{
    make_toy_operator, toy_display, verify_toy_displays, verify_toy_duality, verify_toy_integrand,
    verify_toy_operator_forms, xspace_expansion, ToyDisplay, ToyParams,
};
pub use wtilde::{make_wtilde, verify_wtilde_specializations, wtilde_mismatches, wtilde_remark, Mismatches, WtildeBuild};

/// Sorted multiset of time indices.
pub type DerivMonomial = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TOperator {
    order: usize,
    max_weight: usize,
    terms: BTreeMap<DerivMonomial, TSeries>,
}

impl TOperator {
    pub fn zero(order: usize, max_weight: usize) -> Self {
        TOperator {
            order,
            max_weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(order: usize, max_weight: usize) -> Self {
        Self::scalar(order, max_weight, one())
    }

    pub fn scalar(order: usize, max_weight: usize, c: Scalar) -> Self {
        let mut out = Self::zero(order, max_weight);
        out.push(Vec::new(), TSeries::constant(order, max_weight, c));
        out
    }

    /// Multiplication by `c(t)`.
    pub fn from_series(c: TSeries) -> Self {
        let mut out = Self::zero(c.order(), c.max_weight());
        out.push(Vec::new(), c);
        out
    }

    /// `d/dt_k`; `k = 0` is allowed, `k > order` is not.
    pub fn derivative(order: usize, max_weight: usize, k: usize) -> Result<Self> {
        if k > order {
            return Err(Error::TruncationOverflow {
                index: k as i64,
                order,
            });
        }
        let mut out = Self::zero(order, max_weight);
        out.push(vec![k], TSeries::constant(order, max_weight, one()));
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn terms(&self) -> &BTreeMap<DerivMonomial, TSeries> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, mut mono: DerivMonomial, c: TSeries) {
        mono.sort_unstable();
        let entry = self
            .terms
            .entry(mono.clone())
            .or_insert_with(|| TSeries::zero(self.order, self.max_weight));
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
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
            out.push(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.order, self.max_weight);
        for (m, s) in &self.terms {
            out.push(m.clone(), s.scale(c));
        }
        out
    }

    /// Multiplies every coefficient on the left by `c(t)`.
    pub fn premultiply(&self, c: &TSeries) -> Result<Self> {
        let mut out = Self::zero(self.order, self.max_weight);
        for (m, s) in &self.terms {
            out.push(m.clone(), c.try_mul(s)?);
        }
        Ok(out)
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|s| s.terms().keys().all(|m| m.iter().all(|e| *e == 0)))
    }

    /// Product of two constant-coefficient operators.
    pub fn compose_constant(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        assert!(
            self.has_constant_coefficients() && other.has_constant_coefficients(),
            "composition is only needed for constant coefficients"
        );
        let mut out = Self::zero(self.order, self.max_weight);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mono = a.iter().chain(b).copied().collect();
                out.push(mono, x.try_mul(y)?);
            }
        }
        Ok(out)
    }

    pub fn apply_series(&self, s: &TSeries) -> Result<TSeries> {
        let mut out = TSeries::zero(s.order(), s.max_weight());
        for (mono, c) in &self.terms {
            let mut v = s.clone();
            for &k in mono {
                if k == 0 {
                    v = TSeries::zero(s.order(), s.max_weight());
                    break;
                }
                v = v.derivative(k)?;
            }
            out = out.try_add(&c.truncate(s.max_weight()).try_mul(&v)?)?;
        }
        Ok(out)
    }

    pub fn apply_moments(&self, z: &MomentExpr) -> Result<MomentExpr> {
        let mut out = MomentExpr::zero();
        for (mono, c) in &self.terms {
            let mut v = z.clone();
            for &k in mono {
                v = v.differentiate(k)?;
            }
            out = out.try_add(&v.premultiply(c)?)?;
        }
        Ok(out)
    }

    pub fn compare(&self, expected: &Self) -> Comparison {
        compare_flat(&flatten(&self.terms), &flatten(&expected.terms))
    }

    pub fn mismatches(&self, expected: &Self) -> Vec<(Vec<i64>, Vec<i64>)> {
        mismatch_keys(&flatten(&self.terms), &flatten(&expected.terms))
    }

    /// `Ok(c)` when `self = c * expected`.
    pub fn proportional_to(&self, expected: &Self) -> std::result::Result<Scalar, Witness> {
        proportional_flat(&flatten(&self.terms), &flatten(&expected.terms))
    }
}

/// `sum_j c_j(t) M_j` with `M_j = int x^{gamma+j} exp(sum_s t_s x^s / s!) dx`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MomentExpr {
    terms: BTreeMap<usize, TSeries>,
}

impl MomentExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn moment(j: usize, c: TSeries) -> Self {
        let mut out = Self::zero();
        out.push(j, c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<usize, TSeries> {
        &self.terms
    }

    pub fn coefficient(&self, j: usize) -> Option<&TSeries> {
        self.terms.get(&j)
    }

    pub fn push(&mut self, j: usize, c: TSeries) {
        let next = match self.terms.remove(&j) {
            Some(prev) => &prev + &c,
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(j, next);
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (j, c) in &other.terms {
            if let Some(prev) = out.terms.get(j) {
                prev.try_add(c)?;
            }
            out.push(*j, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (j, s) in &self.terms {
            out.push(*j, s.scale(c));
        }
        out
    }

    pub fn premultiply(&self, c: &TSeries) -> Result<Self> {
        let mut out = Self::zero();
        for (j, s) in &self.terms {
            out.push(*j, c.try_mul(s)?);
        }
        Ok(out)
    }

    /// `d/dt_k (c M_j) = (dc/dt_k) M_j + c M_{j+k} / k!`.
    pub fn differentiate(&self, k: usize) -> Result<Self> {
        let mut out = Self::zero();
        let inv = factorial(k as u64).recip();
        for (j, c) in &self.terms {
            if k > 0 {
                out.push(*j, c.derivative(k)?);
            }
            out.push(j + k, c.scale(&inv));
        }
        Ok(out)
    }

    /// The slice `t = 0`.
    pub fn at_origin(&self) -> Self {
        let mut out = Self::zero();
        for (j, c) in &self.terms {
            let v = c.at_origin();
            if !v.is_zero() {
                out.push(*j, TSeries::constant(c.order(), c.max_weight(), v));
            }
        }
        out
    }

    pub fn compare(&self, expected: &Self) -> Comparison {
        compare_flat(&flatten_moments(self), &flatten_moments(expected))
    }

    pub fn proportional_to(&self, expected: &Self) -> std::result::Result<Scalar, Witness> {
        proportional_flat(&flatten_moments(self), &flatten_moments(expected))
    }

    pub fn mismatches(&self, expected: &Self) -> Vec<(Vec<i64>, Vec<i64>)> {
        mismatch_keys(&flatten_moments(self), &flatten_moments(expected))
    }
}

type Flat = BTreeMap<(Vec<i64>, Vec<i64>), Scalar>;

fn t_key(m: &TMonomial) -> Vec<i64> {
    m.iter().map(|e| *e as i64).collect()
}

fn flatten(terms: &BTreeMap<DerivMonomial, TSeries>) -> Flat {
    let mut out = Flat::new();
    for (d, s) in terms {
        let dk: Vec<i64> = d.iter().map(|k| *k as i64).collect();
        for (m, c) in s.terms() {
            accumulate(&mut out, (dk.clone(), t_key(m)), c.clone());
        }
    }
    out
}

fn flatten_moments(e: &MomentExpr) -> Flat {
    let mut out = Flat::new();
    for (j, s) in &e.terms {
        for (m, c) in s.terms() {
            accumulate(&mut out, (vec![*j as i64], t_key(m)), c.clone());
        }
    }
    out
}

fn value(f: &Flat, k: &(Vec<i64>, Vec<i64>)) -> Scalar {
    f.get(k).cloned().unwrap_or_else(Scalar::zero)
}

fn keys<'a>(a: &'a Flat, b: &'a Flat) -> std::collections::BTreeSet<&'a (Vec<i64>, Vec<i64>)> {
    a.keys().chain(b.keys()).collect()
}

fn witness(k: &(Vec<i64>, Vec<i64>), expected: Scalar, got: Scalar) -> Witness {
    Witness {
        mode: k.0.clone(),
        target: k.1.clone(),
        expected,
        got,
    }
}

fn compare_flat(got: &Flat, expected: &Flat) -> Comparison {
    let all = keys(got, expected);
    for k in &all {
        let (g, e) = (value(got, k), value(expected, k));
        if g != e {
            return Comparison::Differs(witness(k, e, g));
        }
    }
    Comparison::Equal { checked: all.len().max(1) }
}

fn mismatch_keys(got: &Flat, expected: &Flat) -> Vec<(Vec<i64>, Vec<i64>)> {
    keys(got, expected)
        .into_iter()
        .filter(|k| value(got, k) != value(expected, k))
        .cloned()
        .collect()
}

fn proportional_flat(got: &Flat, expected: &Flat) -> std::result::Result<Scalar, Witness> {
    let ratio = match expected.iter().next() {
        Some((k, e)) => value(got, k) / e,
        None => {
            return match got.iter().next() {
                Some((k, g)) => Err(witness(k, Scalar::zero(), g.clone())),
                None => Ok(one()),
            }
        }
    };
    for k in keys(got, expected) {
        let (g, e) = (value(got, k), value(expected, k));
        if g != &ratio * &e {
            return Err(witness(k, &ratio * e, g));
        }
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn derivative_on_moments_follows_the_product_rule() {
        let t1 = TSeries::time(3, 3, 1, int(2)).unwrap();
        let z = MomentExpr::moment(0, t1.clone());
        let out = z.differentiate(1).unwrap();
        assert_eq!(out.coefficient(0).unwrap().constant_term(), int(2));
        assert_eq!(out.coefficient(1), Some(&t1));
        let two = z.differentiate(2).unwrap();
        assert_eq!(two.coefficient(2), Some(&t1.scale(&ratio(1, 2))));
        assert_eq!(z.differentiate(0).unwrap(), z);
    }

    #[test]
    fn constant_operators_compose_by_concatenation() {
        let d1 = TOperator::derivative(4, 4, 1).unwrap();
        let d2 = TOperator::derivative(4, 4, 2).unwrap().scale(&int(3));
        let prod = d2.compose_constant(&d1).unwrap();
        assert_eq!(prod.terms().len(), 1);
        assert!(prod.terms().contains_key(&vec![1, 2]));
        let s = &TSeries::time(4, 4, 1, one()).unwrap() * &TSeries::time(4, 4, 2, one()).unwrap();
        assert_eq!(prod.apply_series(&s).unwrap().constant_term(), int(3));
    }

    #[test]
    fn proportionality_reports_the_ratio() {
        let a = TOperator::derivative(3, 3, 2).unwrap();
        assert_eq!(a.scale(&int(-1)).proportional_to(&a), Ok(int(-1)));
        let b = a.try_add(&TOperator::identity(3, 3)).unwrap();
        assert!(b.proportional_to(&a).is_err());
        assert_eq!(b.mismatches(&a), vec![(vec![], vec![0, 0, 0])]);
    }
}
