//! Constraint operators `W~^r_m` of the elliptic model and their low-rank displays.

use super::bell::{bell_coefficients, rescaled_bell};
use super::det::det_operator;
use super::TOperator;
use crate::check::{params, CheckOutcome};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::scalar::{factorial, one, powi, sign, Scalar};
use crate::tseries::TSeries;

#[derive(Debug, Clone)]
pub struct WtildeBuild {
    pub op: TOperator,
    /// Terms whose time index came out negative.
    pub dropped: usize,
}

/// Where the general operator and a display disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatches {
    pub keys: Vec<(Vec<i64>, Vec<i64>)>,
    /// `general = ratio * display` when the two are proportional.
    pub ratio: Option<Scalar>,
}

struct Ring {
    order: usize,
    max_weight: usize,
    bell: Vec<TSeries>,
}

impl Ring {
    fn new(m: usize, r: usize, n: usize, w: usize) -> Result<Self> {
        let order = (w + m).max(2 * (r - 1) * n).max(1);
        Ok(Ring {
            order,
            max_weight: w,
            bell: bell_coefficients(order, w)?,
        })
    }
}

fn check_args(r: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ConfigInvalid("N must be at least 1".into()));
    }
    if r < 2 {
        return Err(Error::ConfigInvalid("W~ needs rank r >= 2".into()));
    }
    Ok(())
}

/// `sum_l (l+m-2aN)!/l! B_l(t^a) D^{2a}_N d/dt_{l+m-2aN}`.
fn inner_sum(d: &Deformation, ring: &Ring, a: usize, m: usize, n: usize) -> Result<WtildeBuild> {
    let det = det_operator(2 * a, n, ring.order, ring.max_weight)?;
    let mut op = TOperator::zero(ring.order, ring.max_weight);
    let mut dropped = 0;
    for l in 0..=ring.max_weight.min(ring.order) {
        let b = rescaled_bell(&ring.bell, d, a as i64, l);
        if b.is_zero() {
            continue;
        }
        let idx = (l + m) as i64 - (2 * a * n) as i64;
        if idx < 0 {
            dropped += 1;
            continue;
        }
        let c = factorial(idx as u64) / factorial(l as u64);
        let term = det
            .compose_constant(&TOperator::derivative(ring.order, ring.max_weight, idx as usize)?)?
            .premultiply(&b.scale(&c))?;
        op = op.try_add(&term)?;
    }
    Ok(WtildeBuild { op, dropped })
}

fn alpha_bar(a: i64, m: i64, n: i64) -> i64 {
    a * m - a * a * n + a * (3 * a - 1) / 2
}

fn q_over_p(d: &Deformation, e: i64) -> Scalar {
    powi(&(d.q() / d.p()), e)
}

/// The general formula at rank `r`, with `K(P,Q)` read at degree `m + r - 1`.
pub fn make_wtilde(d: &Deformation, m: usize, r: usize, n: usize, w: usize) -> Result<WtildeBuild> {
    check_args(r, n)?;
    let ring = Ring::new(m, r, n, w)?;
    let k = d.k_eigenvalue((m + r - 1) as i64)?;
    let prefactor = powi(&(k / (d.q() - d.p())), (r - 1) as i64) * powi(d.p(), (m + r - 1) as i64);
    let mut op = TOperator::zero(ring.order, ring.max_weight);
    let mut dropped = 0;
    for j in 0..r {
        let a = r - 1 - j;
        let c = sign(j % 2 == 0)
            * d.binomial((r - 1) as i64, j as i64)?
            * q_over_p(d, alpha_bar(a as i64, m as i64, n as i64));
        let inner = inner_sum(d, &ring, a, m, n)?;
        dropped += inner.dropped;
        op = op.try_add(&inner.op.scale(&c))?;
    }
    Ok(WtildeBuild {
        op: op.scale(&prefactor),
        dropped,
    })
}

/// The displayed `r = 2, 3, 4` operators, transcribed term by term.
pub fn wtilde_remark(d: &Deformation, m: usize, r: usize, n: usize, w: usize) -> Result<WtildeBuild> {
    check_args(r, n)?;
    let (mi, ni) = (m as i64, n as i64);
    // (coefficient, exponent of q/p, a) for each sum, then the sign of m! d/dt_m and the overall sign
    let (sums, pure, overall): (Vec<(Scalar, i64, usize)>, Scalar, Scalar) = match r {
        2 => (vec![(one(), mi - ni + 1, 1)], -one(), -one()),
        3 => (
            vec![(one(), 2 * mi - 4 * ni + 5, 2), (-d.number(2)?, mi + 1 - ni, 1)],
            one(),
            one(),
        ),
        4 => (
            vec![
                (one(), 3 * mi - 9 * ni + 12, 3),
                (-d.number(3)?, 2 * mi - 4 * ni + 5, 2),
                (d.number(3)?, mi + 1 - ni, 1),
            ],
            -one(),
            -one(),
        ),
        _ => return Err(Error::ConfigInvalid(format!("no display for rank {r}"))),
    };
    let ring = Ring::new(m, r, n, w)?;
    let k = d.k_eigenvalue((m + r - 1) as i64)?;
    let prefactor = overall * k / powi(&(d.q() - d.p()), (r - 1) as i64) * powi(d.p(), (m + r - 1) as i64);
    let mut op = TOperator::derivative(ring.order, ring.max_weight, m)?.scale(&(pure * factorial(m as u64)));
    let mut dropped = 0;
    for (c, e, a) in sums {
        let inner = inner_sum(d, &ring, a, m, n)?;
        dropped += inner.dropped;
        op = op.try_add(&inner.op.scale(&(c * q_over_p(d, e))))?;
    }
    Ok(WtildeBuild {
        op: op.scale(&prefactor),
        dropped,
    })
}

pub fn wtilde_mismatches(d: &Deformation, m: usize, r: usize, n: usize, w: usize) -> Result<Mismatches> {
    let general = make_wtilde(d, m, r, n, w)?.op;
    let display = wtilde_remark(d, m, r, n, w)?.op;
    Ok(Mismatches {
        keys: general.mismatches(&display),
        ratio: general.proportional_to(&display).ok(),
    })
}

/// Compares the general formula with the displays at `r = 2, 3, 4`.
pub fn verify_wtilde_specializations(d: &Deformation, m: usize, n: usize, w: usize) -> Vec<CheckOutcome> {
    (2..=4)
        .map(|r| {
            let id = format!("conf.wtilde_r{r}");
            let ps = params(&[("m", m.to_string()), ("N", n.to_string()), ("W", w.to_string())]);
            let body = || -> Result<CheckOutcome> {
                let general = make_wtilde(d, m, r, n, w)?;
                let display = wtilde_remark(d, m, r, n, w)?;
                let outcome = match general.op.compare(&display.op) {
                    crate::Comparison::Equal { .. } => CheckOutcome::pass(&id, ps.clone()),
                    crate::Comparison::Differs(wit) => {
                        let total = general.op.mismatches(&display.op).len();
                        let shape = match general.op.proportional_to(&display.op) {
                            Ok(c) => format!("general = {} x display on every term", crate::scalar::format(&c)),
                            Err(_) => "not proportional".to_string(),
                        };
                        CheckOutcome::fail(&id, ps.clone(), Some(wit))
                            .with_note(format!("{total} mismatched terms; {shape}"))
                    }
                };
                Ok(if general.dropped > 0 {
                    outcome.with_note(format!("{} negative-index terms dropped", general.dropped))
                } else {
                    outcome
                })
            };
            CheckOutcome::from_result(&id, ps.clone(), body())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn pq() -> Deformation {
        Deformation::two_parameter(ratio(2, 3), ratio(1, 5)).unwrap()
    }

    #[test]
    fn alpha_bar_matches_the_display_exponents() {
        assert_eq!(alpha_bar(1, 5, 2), 5 - 2 + 1);
        assert_eq!(alpha_bar(2, 5, 2), 10 - 8 + 5);
        assert_eq!(alpha_bar(3, 5, 2), 15 - 18 + 12);
        assert_eq!(alpha_bar(0, 5, 2), 0);
    }

    #[test]
    fn rank_three_display_agrees() {
        let out = verify_wtilde_specializations(&pq(), 2, 1, 4);
        assert_eq!(out.len(), 3);
        assert!(out[1].passed(), "{:?}", out[1]);
    }

    #[test]
    fn even_ranks_differ_by_a_sign() {
        for r in [2, 4] {
            let mm = wtilde_mismatches(&pq(), 2, r, 1, 4).unwrap();
            assert_eq!(mm.ratio, Some(int(-1)));
            assert!(!mm.keys.is_empty());
        }
    }

    #[test]
    fn pure_derivative_term_of_rank_three() {
        let d = pq();
        let (m, w) = (3, 3);
        // with N = 4 every other index is negative, leaving +m! d/dt_m alone
        let op = wtilde_remark(&d, m, 3, 4, w).unwrap().op;
        let expected = int(6) * powi(d.p(), (m + 2) as i64) / powi(&(d.q() - d.p()), 2);
        assert_eq!(op.terms().len(), 1);
        assert_eq!(op.terms().get(&vec![m]).unwrap().constant_term(), expected);
    }

    #[test]
    fn zero_size_rejected() {
        assert!(matches!(make_wtilde(&pq(), 1, 2, 0, 3), Err(Error::ConfigInvalid(_))));
    }
}
