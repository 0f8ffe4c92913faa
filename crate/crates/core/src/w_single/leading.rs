//! Derivative-order profile of a homogeneous operator.
//!
//! An operator `z^n -> c(n) z^{n+shift}` is expanded on the nonnegative modes as
//! `c(n) = sum_j a_j A^j_n`. Since `A^j_n` vanishes for `0 <= n < j`, the
//! coefficients follow by forward substitution from `c(0), c(1), ...`.

use num_traits::Zero;

use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::operator::GradedOperator;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeProfile {
    /// `a_0, a_1, ...` up to the last nonnegative mode available.
    pub coefficients: Vec<Scalar>,
    /// First mode whose image leaves the shift, if any.
    pub off_shift: Option<i64>,
}

impl DerivativeProfile {
    /// Highest order with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|c| !c.is_zero())
    }

    /// Smallest order `j >= from` with a nonzero coefficient.
    pub fn first_at_or_above(&self, from: usize) -> Option<usize> {
        (from..self.coefficients.len()).find(|j| !self.coefficients[*j].is_zero())
    }

    pub fn resolved_orders(&self) -> usize {
        self.coefficients.len()
    }
}

pub fn derivative_profile(d: &Deformation, op: &GradedOperator, shift: i64) -> Result<DerivativeProfile> {
    let mut off_shift = None;
    for n in op.domain() {
        let image = op.image(n).expect("domain key");
        if image.iter().any(|(t, c)| *t != n + shift && !c.is_zero()) {
            off_shift = Some(*n);
            break;
        }
    }
    let mut values = Vec::new();
    let mut n = 0;
    while let Some(image) = op.image(&n) {
        values.push(image.get(&(n + shift)).cloned().unwrap_or_else(Scalar::zero));
        n += 1;
    }
    if values.is_empty() {
        return Err(Error::WindowExhausted);
    }
    let mut coefficients: Vec<Scalar> = Vec::with_capacity(values.len());
    for (j, c) in values.iter().enumerate() {
        let j = j as i64;
        let mut rest = c.clone();
        for (k, a) in coefficients.iter().enumerate() {
            rest -= a * d.falling(j, k as i64)?;
        }
        let pivot = d.falling(j, j)?;
        if pivot.is_zero() {
            return Err(Error::DivisionByZeroMode(j));
        }
        coefficients.push(rest / pivot);
    }
    Ok(DerivativeProfile {
        coefficients,
        off_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::w_single::Single;

    #[test]
    fn profile_of_x_d_terms() {
        let s = Single::new(Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap(), 8);
        let op = GradedOperator::linear_combination(&[
            (int(3), &s.x_d(2, 2).unwrap()),
            (int(-1), &s.x_d(0, 0).unwrap()),
        ])
        .unwrap();
        let p = derivative_profile(&s.d, &op, 0).unwrap();
        assert_eq!(p.order(), Some(2));
        assert_eq!(p.coefficients[0], int(-1));
        assert_eq!(p.coefficients[1], int(0));
        assert_eq!(p.coefficients[2], int(3));
        assert_eq!(p.off_shift, None);
    }
}
