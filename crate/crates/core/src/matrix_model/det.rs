//! Determinant operators `D^m_N` and the multi-index operators `D_{m_1..m_N}`.
//!
//! Both multiply `E = exp(sum_k t_k p_k / k!)`, `p_k = sum_i x_i^k`, by a polynomial
//! in the `x_i`; the checks substitute numbers for the `x_i` and compare series.

use std::collections::BTreeMap;

use itertools::Itertools;

use super::TOperator;
use crate::check::{list, merge, params, CheckOutcome};
use crate::error::{Error, Result};
use crate::operator::permutation_is_even;
use crate::scalar::{factorial, int, powi, sign, Scalar};
use crate::tseries::TSeries;

/// `k! d/dt_k`.
fn scaled_derivative(order: usize, max_weight: usize, k: usize) -> Result<TOperator> {
    Ok(TOperator::derivative(order, max_weight, k)?.scale(&factorial(k as u64)))
}

/// `1/N!` times the determinant with `m! d/dt_m` on the diagonal, `i` on the
/// superdiagonal of row `i` and `(m(i-j+1))! d/dt_{m(i-j+1)}` below it.
/// `D^0_N` is the identity.
pub fn det_operator(m: usize, n: usize, order: usize, max_weight: usize) -> Result<TOperator> {
    if n == 0 {
        return Err(Error::ConfigInvalid("determinant size N must be at least 1".into()));
    }
    if m == 0 {
        return Ok(TOperator::identity(order, max_weight));
    }
    let entry = |i: usize, j: usize| -> Result<Option<TOperator>> {
        if j == i + 1 {
            return Ok(Some(TOperator::scalar(order, max_weight, int(i as i64 + 1))));
        }
        if j > i {
            return Ok(None);
        }
        scaled_derivative(order, max_weight, m * (i - j + 1)).map(Some)
    };
    let mut total = TOperator::zero(order, max_weight);
    'perm: for perm in (0..n).permutations(n) {
        let mut term = TOperator::scalar(order, max_weight, sign(permutation_is_even(&perm)));
        for (i, &j) in perm.iter().enumerate() {
            match entry(i, j)? {
                Some(e) => term = term.compose_constant(&e)?,
                None => continue 'perm,
            }
        }
        total = total.try_add(&term)?;
    }
    Ok(total.scale(&factorial(n as u64).recip()))
}

/// `D_M = 1/N sum_k (-1)^{k-1} k! sum_{|S|=k} (sum S)! d/dt_{sum S} D_{M \ S}`.
pub fn multi_index_det_operator(ms: &[usize], order: usize, max_weight: usize) -> Result<TOperator> {
    if let Some(bad) = ms.iter().find(|m| **m == 0) {
        return Err(Error::ConfigInvalid(format!("multi-index entries must be positive, got {bad}")));
    }
    let mut sorted = ms.to_vec();
    sorted.sort_unstable();
    let mut memo = BTreeMap::new();
    multi_index(&sorted, order, max_weight, &mut memo)
}

fn multi_index(
    ms: &[usize],
    order: usize,
    max_weight: usize,
    memo: &mut BTreeMap<Vec<usize>, TOperator>,
) -> Result<TOperator> {
    if ms.is_empty() {
        return Ok(TOperator::identity(order, max_weight));
    }
    if let Some(hit) = memo.get(ms) {
        return Ok(hit.clone());
    }
    let n = ms.len();
    let mut total = TOperator::zero(order, max_weight);
    for k in 1..=n {
        let weight = sign(k % 2 == 1) * factorial(k as u64);
        for subset in (0..n).combinations(k) {
            let s: usize = subset.iter().map(|i| ms[*i]).sum();
            let rest: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).map(|i| ms[i]).collect();
            let inner = multi_index(&rest, order, max_weight, memo)?;
            let term = scaled_derivative(order, max_weight, s)?.compose_constant(&inner)?;
            total = total.try_add(&term.scale(&weight))?;
        }
    }
    let out = total.scale(&int(n as i64).recip());
    memo.insert(ms.to_vec(), out.clone());
    Ok(out)
}

/// `exp(sum_{k=1}^{order} t_k p_k / k!)` with numeric power sums of `xs`.
pub fn power_sum_exponential(xs: &[Scalar], order: usize, max_weight: usize) -> Result<TSeries> {
    let mut arg = TSeries::zero(order, max_weight);
    for k in 1..=order {
        let pk: Scalar = xs.iter().map(|x| powi(x, k as i64)).sum();
        arg = arg.try_add(&TSeries::time(order, max_weight, k, pk / factorial(k as u64))?)?;
    }
    arg.exp()
}

fn scalars_label(xs: &[Scalar]) -> String {
    format!("({})", xs.iter().map(crate::scalar::format).join(" "))
}

/// Applies `op` to `E` and compares with `factor * E` up to weight `w`.
fn property(op: &TOperator, factor: &Scalar, xs: &[Scalar], w: usize) -> Result<super::Comparison> {
    let e = power_sum_exponential(xs, op.order(), op.max_weight())?;
    let lhs = op.apply_series(&e)?.truncate(w);
    let rhs = e.scale(factor).truncate(w);
    Ok(TOperator::from_series(lhs).compare(&TOperator::from_series(rhs)))
}

/// Ring large enough for the derivatives of total order `span` to stay exact to weight `w`.
fn ring(w: usize, span: usize) -> (usize, usize) {
    (w + span, w + span)
}

pub fn verify_det_property(m: usize, xs: &[Scalar], w: usize) -> CheckOutcome {
    let id = "conf.det_property";
    let ps = params(&[("m", m.to_string()), ("x", scalars_label(xs)), ("W", w.to_string())]);
    let body = || -> Result<CheckOutcome> {
        let (order, mw) = ring(w, m * xs.len());
        let op = det_operator(m, xs.len(), order, mw)?;
        let factor: Scalar = xs.iter().map(|x| powi(x, m as i64)).product();
        let cmp = property(&op, &factor, xs, w)?;
        Ok(merge(id, ps.clone(), vec![("determinant".into(), Ok(cmp))]))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// `D_m = m! d/dt_m`, and the 1x1 determinant agrees with it.
pub fn verify_det_base(m: usize, order: usize, max_weight: usize) -> CheckOutcome {
    let id = "conf.multi_index_base";
    let ps = params(&[("m", m.to_string())]);
    let body = || -> Result<CheckOutcome> {
        let base = scaled_derivative(order, max_weight, m)?;
        let parts = vec![
            ("recursion".into(), Ok(multi_index_det_operator(&[m], order, max_weight)?.compare(&base))),
            ("determinant".into(), Ok(det_operator(m, 1, order, max_weight)?.compare(&base))),
        ];
        Ok(merge(id, ps.clone(), parts))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

pub fn verify_multi_index(ms: &[usize], xs: &[Scalar], w: usize) -> CheckOutcome {
    let id = "conf.multi_index_recursion";
    let signed: Vec<i64> = ms.iter().map(|m| *m as i64).collect();
    let ps = params(&[("m", list(&signed)), ("x", scalars_label(xs)), ("W", w.to_string())]);
    let body = || -> Result<CheckOutcome> {
        if ms.len() != xs.len() {
            return Err(Error::ConfigInvalid("one x value per index".into()));
        }
        let (order, mw) = ring(w, ms.iter().sum());
        let op = multi_index_det_operator(ms, order, mw)?;
        let factor: Scalar = (0..ms.len())
            .permutations(ms.len())
            .map(|perm| {
                xs.iter()
                    .zip(&perm)
                    .map(|(x, i)| powi(x, ms[*i] as i64))
                    .product::<Scalar>()
            })
            .sum();
        let cmp = property(&op, &factor, xs, w)?;
        Ok(merge(id, ps.clone(), vec![("symmetrized monomial".into(), Ok(cmp))]))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// The recursion run on every ordering of the index list gives one operator.
pub fn verify_multi_index_symmetric(ms: &[usize], order: usize, max_weight: usize) -> CheckOutcome {
    let id = "forced.multi_index_symmetric";
    let signed: Vec<i64> = ms.iter().map(|m| *m as i64).collect();
    let ps = params(&[("m", list(&signed))]);
    let body = || -> Result<CheckOutcome> {
        let mut parts = Vec::new();
        let mut reference: Option<TOperator> = None;
        for perm in ms.iter().copied().permutations(ms.len()).unique() {
            let mut memo = BTreeMap::new();
            let op = multi_index(&perm, order, max_weight, &mut memo)?;
            match &reference {
                None => reference = Some(op),
                Some(r) => parts.push((format!("order {perm:?}"), Ok(op.compare(r)))),
            }
        }
        if parts.is_empty() {
            parts.push(("single ordering".into(), Ok(super::Comparison::Equal { checked: 1 })));
        }
        Ok(merge(id, ps.clone(), parts))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{one, ratio};

    #[test]
    fn two_by_two_determinant() {
        let m = 2;
        let op = det_operator(m, 2, 8, 8).unwrap();
        // 1/2 ((m! d_m)^2 - (2m)! d_{2m})
        let d_m = scaled_derivative(8, 8, m).unwrap();
        let expected = d_m
            .compose_constant(&d_m)
            .unwrap()
            .try_add(&scaled_derivative(8, 8, 2 * m).unwrap().scale(&int(-1)))
            .unwrap()
            .scale(&ratio(1, 2));
        assert!(op.compare(&expected).is_equal());
        let constant = TSeries::constant(8, 8, one());
        assert!(op.apply_series(&constant).unwrap().is_zero());
    }

    #[test]
    fn product_property_small_cases() {
        for m in 1..=4 {
            assert!(verify_det_property(m, &[int(2)], 6).passed());
        }
        assert!(verify_det_property(1, &[int(1), int(2)], 6).passed());
        assert!(verify_det_property(2, &[int(1), int(2), int(3)], 4).passed());
        assert!(verify_det_property(1, &[int(0), int(3)], 5).passed());
    }

    #[test]
    fn multi_index_recursion_matches_property() {
        assert!(verify_multi_index(&[1, 2], &[int(1), int(2)], 5).passed());
        assert!(verify_multi_index(&[1, 1, 2], &[int(1), int(2), int(3)], 4).passed());
        assert!(verify_det_base(3, 6, 6).passed());
        assert!(verify_multi_index_symmetric(&[1, 2, 3], 8, 8).passed());
    }

    #[test]
    fn multi_index_pair_closed_form() {
        // D_{a,b} = a! b! d_a d_b - (a+b)! d_{a+b}
        let op = multi_index_det_operator(&[1, 2], 6, 6).unwrap();
        let expected = scaled_derivative(6, 6, 1)
            .unwrap()
            .compose_constant(&scaled_derivative(6, 6, 2).unwrap())
            .unwrap()
            .try_add(&scaled_derivative(6, 6, 3).unwrap().scale(&int(-1)))
            .unwrap();
        assert!(op.compare(&expected).is_equal());
    }
}
