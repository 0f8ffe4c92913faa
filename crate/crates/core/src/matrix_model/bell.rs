//! Bell coefficients `exp(sum_s t_s x^s / s!) = sum_k B_k x^k / k!`.

use super::TOperator;
use crate::check::{merge, params, CheckOutcome};
use crate::deform::Deformation;
use crate::error::Result;
use crate::scalar::{binomial, factorial, one, powi, Scalar};
use crate::tseries::TSeries;

/// `B_0..=B_order` in the ring `(order, max_weight)`.
///
/// The coefficient of `x^k` is homogeneous of weight `k`, so `B_k` is `k!` times the
/// weight-`k` part of `exp(sum_s t_s / s!)`.
pub fn bell_coefficients(order: usize, max_weight: usize) -> Result<Vec<TSeries>> {
    let mut arg = TSeries::zero(order, max_weight);
    for s in 1..=order {
        arg = arg.try_add(&TSeries::time(order, max_weight, s, factorial(s as u64).recip())?)?;
    }
    let e = arg.exp()?;
    Ok((0..=order)
        .map(|k| e.weight_component(k).scale(&factorial(k as u64)))
        .collect())
}

/// `B_{k+1} = sum_j C(k, j) t_{j+1} B_{k-j}`.
pub fn bell_recursive(order: usize, max_weight: usize) -> Result<Vec<TSeries>> {
    let mut out = vec![TSeries::constant(order, max_weight, one())];
    for k in 0..order {
        let mut next = TSeries::zero(order, max_weight);
        for j in 0..=k {
            let t = TSeries::time(order, max_weight, j + 1, binomial(k as u64, j as u64))?;
            next = next.try_add(&t.try_mul(&out[k - j])?)?;
        }
        out.push(next);
    }
    Ok(out)
}

/// `c_k = q^{ak} - p^{ak}` for `t^a_k = c_k t_k`, `k = 1..=order`.
pub fn rescaling_factors(d: &Deformation, a: i64, order: usize) -> Vec<Scalar> {
    (1..=order as i64)
        .map(|k| powi(d.q(), a * k) - powi(d.p(), a * k))
        .collect()
}

/// `B_l(t^a_1, ..., t^a_l)`.
pub fn rescaled_bell(bell: &[TSeries], d: &Deformation, a: i64, l: usize) -> TSeries {
    let order = bell[l].order();
    bell[l].rescale_times(&rescaling_factors(d, a, order))
}

pub fn verify_bell_recursion(order: usize, max_weight: usize) -> CheckOutcome {
    let id = "forced.bell_recursion";
    let ps = params(&[("K", order.to_string()), ("W", max_weight.to_string())]);
    let body = || -> Result<CheckOutcome> {
        let direct = bell_coefficients(order, max_weight)?;
        let recursive = bell_recursive(order, max_weight)?;
        let parts = direct
            .into_iter()
            .zip(recursive)
            .enumerate()
            .map(|(k, (a, b))| (format!("k={k}"), Ok(TOperator::from_series(a).compare(&TOperator::from_series(b)))))
            .collect();
        Ok(merge(id, ps.clone(), parts))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// `sum_l B_l(t^a) x^l / l! = E(q^a x) / E(p^a x)`, so
/// `B_l(t^a) = sum_i C(l, i) q^{ai} p^{a(l-i)} B_i(t) B_{l-i}(-t)`.
pub fn verify_rescaled_times(d: &Deformation, a: i64, order: usize, max_weight: usize) -> CheckOutcome {
    let id = "forced.rescaled_times";
    let ps = params(&[("a", a.to_string()), ("K", order.to_string()), ("W", max_weight.to_string())]);
    let body = || -> Result<CheckOutcome> {
        let bell = bell_coefficients(order, max_weight)?;
        let negated: Vec<Scalar> = vec![-one(); order];
        let mut parts = Vec::new();
        for l in 0..=order {
            let lhs = rescaled_bell(&bell, d, a, l);
            let mut rhs = TSeries::zero(order, max_weight);
            for i in 0..=l {
                let c = binomial(l as u64, i as u64) * powi(d.q(), a * i as i64) * powi(d.p(), a * (l - i) as i64);
                let term = bell[i].try_mul(&bell[l - i].rescale_times(&negated))?.scale(&c);
                rhs = rhs.try_add(&term)?;
            }
            let cmp = TOperator::from_series(lhs).compare(&TOperator::from_series(rhs));
            parts.push((format!("l={l}"), Ok(cmp)));
        }
        Ok(merge(id, ps.clone(), parts))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn low_order_coefficients() {
        let b = bell_coefficients(3, 3).unwrap();
        assert_eq!(b[0], TSeries::constant(3, 3, one()));
        assert_eq!(b[1], TSeries::time(3, 3, 1, one()).unwrap());
        let t1 = TSeries::time(3, 3, 1, one()).unwrap();
        let t2 = TSeries::time(3, 3, 2, one()).unwrap();
        assert_eq!(b[2], &(&t1 * &t1) + &t2);
        // B_3 = t1^3 + 3 t1 t2 + t3
        assert_eq!(b[3].coefficient_of(&[1, 1, 0]), int(3));
        assert_eq!(b[3].coefficient_of(&[3, 0, 0]), one());
        assert_eq!(b[3].coefficient_of(&[0, 0, 1]), one());
    }

    #[test]
    fn recursion_agrees() {
        assert!(verify_bell_recursion(8, 8).passed());
    }

    #[test]
    fn rescaled_times_identity() {
        let d = Deformation::two_parameter(ratio(2, 3), ratio(1, 5)).unwrap();
        assert!(verify_rescaled_times(&d, 1, 5, 5).passed());
        assert!(verify_rescaled_times(&d, 2, 4, 4).passed());
    }
}
