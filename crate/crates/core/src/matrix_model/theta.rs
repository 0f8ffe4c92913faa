//! Truncated generalized theta product with `G(P,Q)` evaluated at a scalar pair.
//!
//! `G(P,Q)` is operator-valued in general; here `P`, `Q` are replaced by integers and
//! the powers `p^P`, `q^Q` are read as ordinary powers.

use num_traits::Zero;

use crate::check::{params, scalar_witness, CheckOutcome};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::scalar::{format, one, powi, zero, Scalar};

fn nonzero(x: Scalar, k: usize) -> Result<Scalar> {
    if x.is_zero() {
        Err(Error::PoleHit(k))
    } else {
        Ok(x)
    }
}

/// `prod_{k<T} (1 - F((q/p)^k x) G)(1 - F((q/p)^{k+1} / x) G)`.
pub fn theta_eval(d: &Deformation, x: &Scalar, truncation: usize, substitution: (i64, i64)) -> Result<Scalar> {
    if x.is_zero() {
        return Err(Error::ConfigInvalid("theta argument must be nonzero".into()));
    }
    let (big_p, big_q) = substitution;
    let (pp, qq) = (powi(d.p(), big_p), powi(d.q(), big_q));
    let r_pq = d.meromorphic(&pp, &qq)?;
    let r10 = d.meromorphic(&one(), &zero())?;
    let den = nonzero(&qq * &r_pq, 0)?;
    let g = if r10.is_zero() {
        (&qq - &pp) / den
    } else {
        (powi(d.p(), big_q - big_p) * &r_pq + (&pp - &qq) * &r10) / den
    };
    let f = |y: Scalar, k: usize| -> Result<Scalar> {
        if r10.is_zero() {
            Ok(y)
        } else {
            let den = nonzero(&y - &r10, k)?;
            Ok(y / den)
        }
    };
    let ratio = d.q() / d.p();
    let mut acc = one();
    for k in 0..truncation {
        let a = f(powi(&ratio, k as i64) * x, k)?;
        let b = f(powi(&ratio, k as i64 + 1) / x, k)?;
        acc *= (one() - a * &g) * (one() - b * &g);
    }
    Ok(acc)
}

/// The (p,q) remark form `prod_{k<T} (p^k - q^k x)(p^{k+1} - q^{k+1} / x)`.
pub fn theta_pq_display(d: &Deformation, x: &Scalar, truncation: usize) -> Result<Scalar> {
    if x.is_zero() {
        return Err(Error::ConfigInvalid("theta argument must be nonzero".into()));
    }
    let (p, q) = (d.p(), d.q());
    Ok((0..truncation as i64)
        .map(|k| (powi(p, k) - powi(q, k) * x) * (powi(p, k + 1) - powi(q, k + 1) / x))
        .product())
}

/// The general product at the (p,q) family against its remark form.
pub fn verify_theta_pq_remark(d: &Deformation, xs: &[Scalar], truncation: usize) -> CheckOutcome {
    let id = "conf.theta_pq_remark";
    let labels: Vec<String> = xs.iter().map(format).collect();
    let ps = params(&[("x", format!("({})", labels.join(" "))), ("T", truncation.to_string())]);
    let body = || -> Result<CheckOutcome> {
        let pq = Deformation::two_parameter(d.p().clone(), d.q().clone())?;
        for (i, x) in xs.iter().enumerate() {
            let general = theta_eval(&pq, x, truncation, (1, 1))?;
            let display = theta_pq_display(&pq, x, truncation)?;
            if general != display {
                let w = scalar_witness(vec![truncation as i64, i as i64], display, general);
                return Ok(CheckOutcome::fail(id, ps.clone(), Some(w)).with_note(format!("first differing x = {}", labels[i])));
            }
        }
        Ok(CheckOutcome::pass(id, ps.clone()))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn empty_product_is_one() {
        let d = Deformation::one_parameter(ratio(1, 3)).unwrap();
        assert_eq!(theta_eval(&d, &int(2), 0, (1, 1)).unwrap(), one());
    }

    #[test]
    fn single_factor_by_hand() {
        // q-family: R(1,0) = 1/(1-q) = 3/2, R(p,q) = 1, G = (1 + (1-q) 3/2)/q = 6.
        // F(1) = 1/(1 - 3/2) = -2, F(q) = (1/3)/(1/3 - 3/2) = -2/7.
        let d = Deformation::one_parameter(ratio(1, 3)).unwrap();
        let expected = (one() + int(12)) * (one() + ratio(12, 7));
        assert_eq!(theta_eval(&d, &one(), 1, (1, 1)).unwrap(), expected);
    }

    #[test]
    fn pole_is_reported() {
        // F has a pole where its argument equals R(1,0) = 3/2
        let d = Deformation::one_parameter(ratio(1, 3)).unwrap();
        assert_eq!(theta_eval(&d, &ratio(3, 2), 1, (1, 1)), Err(Error::PoleHit(0)));
    }
}
