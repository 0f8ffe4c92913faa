//! Scalar central terms of the sub-2n algebras and their cocycle condition.

use itertools::Itertools;
use num_traits::Zero;

use crate::check::{list, params, scalar_witness, CheckOutcome};
use crate::deform::Deformation;
use crate::error::Result;
use crate::operator::permutation_is_even;
use crate::scalar::{self, powi, Scalar};

/// Structure function `K/2 [-2M]/[-M] prod_{j<k} ([m_k+1] - [m_j+1])`, `K` read at the total mode.
pub fn central_f(d: &Deformation, modes: &[i64]) -> Result<Scalar> {
    let total: i64 = modes.iter().sum();
    Ok(d.k_eigenvalue(total)? * d.bracket_prefactor(total, 2)? * d.vandermonde(modes, 1)?)
}

/// `p^m [m] / (q^m [2m]) [m-1][m][m+1]`, zero at `m = 0`.
pub fn central_term_g(d: &Deformation, m: i64) -> Result<Scalar> {
    if m == 0 {
        return Ok(Scalar::zero());
    }
    let num = d.number(m)?;
    let cubic = d.number(m - 1)? * &num * d.number(m + 1)?;
    if cubic.is_zero() {
        return Ok(Scalar::zero());
    }
    let den = d.number(2 * m)?;
    if den.is_zero() {
        return Err(crate::Error::DivisionByZeroMode(2 * m));
    }
    Ok(powi(d.p(), m) * num / (powi(d.q(), m) * den) * cubic)
}

/// The cocycle `C(m_1..m_2n) = c / (12 2^n n!) sum_sigma sgn prod_k g(m_{2k-1}) delta(m_{2k-1} + m_{2k})`.
pub fn central_c(d: &Deformation, modes: &[i64], c: &Scalar) -> Result<Scalar> {
    central_sum(d, modes)?.map_or(Ok(Scalar::zero()), |s| {
        let n = modes.len() / 2;
        Ok(c * s / (scalar::int(12 << n) * scalar::factorial(n as u64)))
    })
}

/// The signed permutation sum of `central_c`, or `None` when no pairing can contribute.
fn central_sum(d: &Deformation, modes: &[i64]) -> Result<Option<Scalar>> {
    assert!(modes.len() % 2 == 0 && !modes.is_empty(), "central term needs 2n modes");
    if modes.iter().sum::<i64>() != 0 {
        return Ok(None);
    }
    let k = modes.len();
    let mut acc = Scalar::zero();
    for perm in (0..k).permutations(k) {
        let mut term = scalar::sign(permutation_is_even(&perm));
        for pair in perm.chunks(2) {
            let (a, b) = (modes[pair[0]], modes[pair[1]]);
            if a + b != 0 {
                term = Scalar::zero();
                break;
            }
            term *= central_term_g(d, a)?;
            if term.is_zero() {
                break;
            }
        }
        acc += term;
    }
    Ok(Some(acc))
}

/// Transposing any two arguments negates `C`.
pub fn verify_central_skew(d: &Deformation, tuples: &[Vec<i64>]) -> CheckOutcome {
    let id = "conf.central_skew";
    let ps = params(&[("tuples", tuples.len().to_string())]);
    let body = || -> Result<CheckOutcome> {
        let c = scalar::one();
        for modes in tuples {
            let base = central_c(d, modes, &c)?;
            for (i, j) in (0..modes.len()).tuple_combinations() {
                let mut swapped = modes.clone();
                swapped.swap(i, j);
                let other = central_c(d, &swapped, &c)?;
                if other != -base.clone() {
                    let w = scalar_witness(swapped, -base.clone(), other);
                    return Ok(CheckOutcome::fail(id, ps.clone(), Some(w)));
                }
            }
        }
        Ok(CheckOutcome::pass(id, ps.clone()))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// The scalar condition `sum_sigma sgn f(m_{i_1..i_2n}) C(m_{i_1}+..+m_{i_2n}, rest) = 0`.
///
/// `f` and `C` are antisymmetric, so each choice of the first `2n` indices
/// contributes `(2n)! (2n-1)!` equal terms; the common factor is dropped.
pub fn cocycle_residual(d: &Deformation, modes: &[i64]) -> Result<Scalar> {
    let k = modes.len();
    let n = (k + 1) / 4;
    assert_eq!(k, 4 * n - 1, "cocycle condition needs 4n-1 modes");
    let c = scalar::one();
    let mut acc = Scalar::zero();
    for subset in (0..k).combinations(2 * n) {
        let rest: Vec<usize> = (0..k).filter(|i| !subset.contains(i)).collect();
        let order: Vec<usize> = subset.iter().chain(&rest).copied().collect();
        let head: Vec<i64> = subset.iter().map(|i| modes[*i]).collect();
        let mut tail = vec![head.iter().sum::<i64>()];
        tail.extend(rest.iter().map(|i| modes[*i]));
        let central = central_c(d, &tail, &c)?;
        if central.is_zero() {
            continue;
        }
        acc += scalar::sign(permutation_is_even(&order)) * central_f(d, &head)? * central;
    }
    Ok(acc)
}

/// Scans strictly increasing `(4n-1)`-tuples from `range`; the residual is totally
/// antisymmetric so other orderings add nothing.
pub fn verify_cocycle(d: &Deformation, n: usize, range: (i64, i64)) -> CheckOutcome {
    let id = "conf.central_cocycle";
    let ps = params(&[("n", n.to_string()), ("range", format!("{}..{}", range.0, range.1))]);
    let body = || -> Result<CheckOutcome> {
        let mut worst: Option<(Vec<i64>, Scalar)> = None;
        let mut first: Option<(Vec<i64>, Scalar)> = None;
        for modes in (range.0..=range.1).combinations(4 * n - 1) {
            let r = cocycle_residual(d, &modes)?;
            if r.is_zero() {
                continue;
            }
            if first.is_none() {
                first = Some((modes.clone(), r.clone()));
            }
            if worst.as_ref().is_none_or(|(_, w)| scalar::abs(&r) > scalar::abs(w)) {
                worst = Some((modes, r));
            }
        }
        Ok(match (first, worst) {
            (Some((modes, r)), Some((_, w))) => {
                let note = format!("max residual {}", scalar::format(&scalar::abs(&w)));
                CheckOutcome::fail(id, ps.clone(), Some(scalar_witness(modes, Scalar::zero(), r))).with_note(note)
            }
            _ => CheckOutcome::pass(id, ps.clone()).with_note("max residual 0"),
        })
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// The Virasoro example `c/12 g(m_1) delta(m_1 + m_2)` against the general `n = 1` solution.
pub fn verify_virasoro_central(d: &Deformation, pairs: &[(i64, i64)]) -> CheckOutcome {
    let id = "conf.central_virasoro";
    let ps = params(&[("pairs", pairs.len().to_string())]);
    let body = || -> Result<CheckOutcome> {
        let c = scalar::one();
        for (m1, m2) in pairs {
            let general = central_c(d, &[*m1, *m2], &c)?;
            let display = if m1 + m2 == 0 {
                central_term_g(d, *m1)? / scalar::int(12)
            } else {
                Scalar::zero()
            };
            if general != display {
                return Ok(CheckOutcome::fail(id, ps.clone(), Some(scalar_witness(vec![*m1, *m2], display, general))));
            }
        }
        Ok(CheckOutcome::pass(id, ps.clone()))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// The centrally extended bracket states the central term with `c/6` where the
/// solution carries `c/12`; compares the two normalizations on `tuples`.
pub fn verify_central_normalization(d: &Deformation, tuples: &[Vec<i64>]) -> CheckOutcome {
    let id = "conf.central_extended_bracket";
    let ps = params(&[("tuples", tuples.len().to_string())]);
    let body = || -> Result<CheckOutcome> {
        let c = scalar::one();
        let mut checked = 0;
        for modes in tuples {
            let solution = central_c(d, modes, &c)?;
            let display = scalar::int(2) * &solution;
            checked += 1;
            if display != solution {
                let w = scalar_witness(modes.clone(), solution, display);
                return Ok(CheckOutcome::fail(id, ps.clone(), Some(w)).with_note(format!("at {}", list(modes))));
            }
        }
        if checked == 0 {
            return Err(crate::Error::WindowExhausted);
        }
        Ok(CheckOutcome::pass(id, ps.clone()))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn pq() -> Deformation {
        Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap()
    }

    #[test]
    fn virasoro_value_at_m2() {
        // hand evaluation: g(2) = 285/104, C = g/12
        let d = pq();
        assert_eq!(central_term_g(&d, 2).unwrap(), ratio(285, 104));
        assert_eq!(central_term_g(&d, 2).unwrap() / scalar::int(12), ratio(95, 416));
    }

    #[test]
    fn c_vanishes_on_small_modes_and_off_pairing() {
        let d = pq();
        let c = scalar::one();
        for m in -1..=1 {
            assert!(central_c(&d, &[m, -m], &c).unwrap().is_zero());
        }
        assert!(central_c(&d, &[2, -1], &c).unwrap().is_zero());
        assert!(central_c(&d, &[2, 3, -2, -3], &c).unwrap() != Scalar::zero());
    }

    #[test]
    fn subset_reduction_matches_full_permutation_sum() {
        let d = pq();
        let c = scalar::one();
        let modes = [-2i64, 1, 3];
        let mut full = Scalar::zero();
        for perm in (0..3).permutations(3) {
            let head = [modes[perm[0]], modes[perm[1]]];
            let tail = [head[0] + head[1], modes[perm[2]]];
            full += scalar::sign(permutation_is_even(&perm))
                * central_f(&d, &head).unwrap()
                * central_c(&d, &tail, &c).unwrap();
        }
        // (2n)! (2n-1)! = 2 for n = 1
        assert_eq!(full, scalar::int(2) * cocycle_residual(&d, &modes).unwrap());
    }
}
