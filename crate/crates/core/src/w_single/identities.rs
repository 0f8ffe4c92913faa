//! Leibniz rule, the W^r_m commutator, the n-algebra and the sub-2n closure.

use itertools::Itertools;
use num_traits::Zero;

use super::{apply_k, combine, Single};
use crate::check::{list, params, scalar_witness, CheckOutcome};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::operator::{gji_residual, n_bracket, permutation_is_even, plain_bracket, BracketSpec, GradedOperator};
use crate::scalar::{self, one, powi, Scalar};

/// `D^k f` on a Laurent polynomial.
pub fn derive_poly(d: &Deformation, f: &LaurentPoly, k: i64) -> Result<LaurentPoly> {
    let mut cur = f.clone();
    for _ in 0..k {
        let terms = cur
            .terms()
            .iter()
            .map(|(e, c)| Ok((e - 1, c * d.number(*e)?)))
            .collect::<Result<Vec<_>>>()?;
        cur = LaurentPoly::from_terms(f.window(), terms)?;
    }
    Ok(cur)
}

/// `K(P,Q)` times the difference quotient `(f(px) - f(qx))/((p - q)x)` against `D z^n = [n] z^{n-1}`.
pub fn verify_derivative(s: &Single) -> CheckOutcome {
    let id = "conf.derivative";
    let ps = params(&[("window", s.window.to_string())]);
    let d = &s.d;
    let mut parts = Vec::new();
    for n in GradedOperator::window(s.window) {
        let cmp = (|| {
            let f = LaurentPoly::monomial(s.window, n, one())?;
            let diff = f.dilate(d.p()).try_add(&f.dilate(d.q()).scale(&-one()))?;
            let mut quotient = diff.coefficient(n) / (d.p() - d.q());
            if n != 0 {
                quotient *= d.k_eigenvalue(n)?;
            }
            let op = s.derivative()?;
            let expected = op
                .image(&n)
                .and_then(|i| i.get(&(n - 1)).cloned())
                .unwrap_or_else(Scalar::zero);
            Ok(if expected == quotient {
                crate::Comparison::Equal { checked: 1 }
            } else {
                crate::Comparison::Differs(scalar_witness(vec![n], expected, quotient))
            })
        })();
        parts.push((format!("z^{n}"), cmp));
    }
    crate::check::merge(id, ps, parts)
}

/// `D^r(fg)` against `sum_j C^j_r (D^j f)(x q^{r-j}) (D^{r-j} g)(x p^j)`.
pub fn verify_leibniz(d: &Deformation, r: i64, f: &LaurentPoly, g: &LaurentPoly) -> CheckOutcome {
    let id = "conf.leibniz";
    let ps = params(&[("r", r.to_string()), ("f", poly_tag(f)), ("g", poly_tag(g))]);
    let body = || -> Result<CheckOutcome> {
        let lhs = derive_poly(d, &f.try_mul(g)?, r)?;
        let mut rhs = LaurentPoly::zero(f.window());
        for j in 0..=r {
            let left = derive_poly(d, f, j)?.dilate(&powi(d.q(), r - j));
            let right = derive_poly(d, g, r - j)?.dilate(&powi(d.p(), j));
            rhs = rhs.try_add(&left.try_mul(&right)?.scale(&d.binomial(r, j)?))?;
        }
        let exps: std::collections::BTreeSet<i64> = lhs.terms().keys().chain(rhs.terms().keys()).copied().collect();
        for e in exps {
            if lhs.coefficient(e) != rhs.coefficient(e) {
                return Ok(CheckOutcome::fail(id, ps.clone(), Some(scalar_witness(vec![e], lhs.coefficient(e), rhs.coefficient(e)))));
            }
        }
        Ok(CheckOutcome::pass(id, ps.clone()))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

fn poly_tag(f: &LaurentPoly) -> String {
    let parts: Vec<String> = f
        .terms()
        .iter()
        .map(|(e, c)| format!("{}z^{}", scalar::format(c), e))
        .collect();
    format!("[{}]", parts.join(" + "))
}

/// Right side of the `W^r_m` commutator assembled term by term.
fn pair_rhs(s: &Single, m: i64, n: i64, r: i64, rank_s: i64) -> Result<GradedOperator> {
    let d = &s.d;
    let (p, q) = (d.p(), d.q());
    let mut terms = Vec::new();
    for j in 0..r {
        let c = powi(q, (r - 1 - j) * (n + rank_s - 1)) * powi(p, j) * d.binomial(r - 1, j)? * d.falling(n + rank_s - 1, j)?;
        terms.push((c, s.w(m + n, r + rank_s - 1 - j)?));
    }
    for j in 0..rank_s {
        let c = powi(q, (rank_s - 1 - j) * (m + r - 1)) * powi(p, j) * d.binomial(rank_s - 1, j)? * d.falling(m + r - 1, j)?;
        terms.push((-c, s.w(m + n, r + rank_s - 1 - j)?));
    }
    apply_k(d, &combine(s.window, terms)?)
}

pub fn verify_pair_commutator(s: &Single, m: i64, n: i64, r: i64, rank_s: i64) -> CheckOutcome {
    let id = "conf.pair_commutator";
    let ps = params(&[("m", m.to_string()), ("n", n.to_string()), ("r", r.to_string()), ("s", rank_s.to_string())]);
    let cmp = (|| {
        let lhs = s.w(m, r)?.commutator(&s.w(n, rank_s)?)?;
        lhs.compare(&pair_rhs(s, m, n, r, rank_s)?)
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// `[W^2_m, W^2_n] = K((q^{n+1} - q^{m+1}) W^3_{m+n} + ([n+1] - [m+1]) W^2_{m+n})`.
pub fn verify_pair_remark(s: &Single, m: i64, n: i64) -> CheckOutcome {
    let id = "conf.pair_commutator_rank2";
    let ps = params(&[("m", m.to_string()), ("n", n.to_string())]);
    let cmp = (|| {
        let d = &s.d;
        let lhs = s.w(m, 2)?.commutator(&s.w(n, 2)?)?;
        let rhs = combine(
            s.window,
            vec![
                (powi(d.q(), n + 1) - powi(d.q(), m + 1), s.w(m + n, 3)?),
                (d.number(n + 1)? - d.number(m + 1)?, s.w(m + n, 2)?),
            ],
        )?;
        lhs.compare(&apply_k(d, &rhs)?)
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// Right side of the n-algebra, with the exponent `lambda` read cyclically.
fn n_algebra_rhs(s: &Single, modes: &[i64], ranks: &[i64]) -> Result<GradedOperator> {
    let d = &s.d;
    let n = modes.len();
    let total_m: i64 = modes.iter().sum();
    let total_r: i64 = ranks.iter().sum();
    let mut terms = Vec::new();
    for perm in (0..n).permutations(n) {
        let sign = scalar::sign(permutation_is_even(&perm));
        let mut alphas = Vec::with_capacity(n - 1);
        walk_alphas(d, modes, ranks, &perm, &mut alphas, one(), &mut |alphas, coeff| {
            let sum_alpha: i64 = alphas.iter().sum();
            let betas = betas(ranks, &perm, alphas);
            let mut lambda = 0;
            for j in 0..n {
                let next = perm[(j + 1) % n];
                lambda += (betas[j] - sum_alpha) * (modes[next] + ranks[next] - 1);
            }
            let c = &sign * coeff * powi(d.q(), lambda) * powi(d.p(), sum_alpha);
            terms.push((c, (total_m, total_r - (n as i64 - 1) - sum_alpha)));
            Ok(())
        })?;
    }
    let mut ops = Vec::new();
    for (c, (m, r)) in terms {
        ops.push((c, s.w(m, r)?));
    }
    let pref = d.bracket_prefactor(total_m, n.max(2))?;
    apply_k(d, &combine(s.window, ops)?.scale(&pref))
}

/// `beta_1..beta_n` for one permutation and a partial choice of alphas (missing ones count as 0).
fn betas(ranks: &[i64], perm: &[usize], alphas: &[i64]) -> Vec<i64> {
    let n = perm.len();
    (1..=n)
        .map(|k| {
            let r: i64 = perm[..k].iter().map(|i| ranks[*i]).sum();
            let a: i64 = alphas.iter().take(k - 1).sum();
            r - k as i64 - a
        })
        .collect()
}

fn walk_alphas(
    d: &Deformation,
    modes: &[i64],
    ranks: &[i64],
    perm: &[usize],
    alphas: &mut Vec<i64>,
    coeff: Scalar,
    emit: &mut dyn FnMut(&[i64], &Scalar) -> Result<()>,
) -> Result<()> {
    let n = perm.len();
    let k = alphas.len();
    if k + 1 == n {
        return emit(alphas, &coeff);
    }
    let beta = betas(ranks, perm, alphas)[k];
    let next = perm[k + 1];
    for a in 0..=beta.max(-1) {
        let c = &coeff * d.binomial(beta, a)? * d.falling(modes[next] + ranks[next] - 1, a)?;
        alphas.push(a);
        walk_alphas(d, modes, ranks, perm, alphas, c, emit)?;
        alphas.pop();
    }
    Ok(())
}

pub fn verify_n_algebra(s: &Single, modes: &[i64], ranks: &[i64]) -> CheckOutcome {
    let id = "conf.n_algebra";
    let ps = params(&[("m", list(modes)), ("r", list(ranks))]);
    let cmp = (|| {
        let ops = modes.iter().zip(ranks).map(|(m, r)| s.w(*m, *r)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&GradedOperator> = ops.iter().collect();
        let lhs = n_bracket(&refs, BracketSpec::mode_sum(modes.iter().sum()), &s.d)?;
        lhs.compare(&n_algebra_rhs(s, modes, ranks)?)
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// Even-arity GJI with every bracket carrying its own mode-sum prefactor.
pub fn verify_gji_prefactor(s: &Single, modes: &[i64], ranks: &[i64]) -> CheckOutcome {
    let id = "conf.gji_prefactor";
    let ps = params(&[("m", list(modes)), ("r", list(ranks))]);
    let cmp = (|| {
        let ops = modes.iter().zip(ranks).map(|(m, r)| s.w(*m, *r)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&GradedOperator> = ops.iter().collect();
        let residual = gji_residual(&refs, Some(modes), &s.d)?;
        residual.compare(&GradedOperator::zero(residual.domain().copied()))
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// Outcome of the proportionality part of a sub-2n check.
#[derive(Debug, Clone)]
pub struct Sub2nReport {
    pub outcome: CheckOutcome,
    /// Ratio of bracket to generator divided by the displayed mode-dependent factor, per tuple.
    pub normalized: Vec<(Vec<i64>, Scalar)>,
}

/// Shared body for the sub-2n display and the sub-4 example: `offset` selects
/// `[m_k + 1] - [m_j + 1]` or `[m_k] - [m_j]` in the normalizing product.
fn sub2n_generic(s: &Single, id: &str, n: usize, tuples: &[Vec<i64>], offset: i64) -> Sub2nReport {
    let ps = params(&[("n", n.to_string()), ("tuples", tuples.len().to_string())]);
    let mut normalized = Vec::new();
    let mut checked = 0;
    for modes in tuples {
        let step = (|| -> Result<Option<CheckOutcome>> {
            let ops = modes.iter().map(|m| s.w(*m, n as i64 + 1)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&GradedOperator> = ops.iter().collect();
            let bracket = plain_bracket(&refs)?;
            let total: i64 = modes.iter().sum();
            let target = s.w(total, n as i64 + 1)?;
            match bracket.proportional_to(&target)? {
                Err(mut w) => {
                    w.mode = modes.iter().copied().chain(w.mode).collect();
                    let note = format!("bracket of modes {} is not a multiple of the generator", list(modes));
                    Ok(Some(CheckOutcome::fail(id, ps.clone(), Some(w)).with_note(note)))
                }
                Ok(c) => {
                    let factor = s.d.bracket_prefactor(total, 2 * n)? * s.d.vandermonde(modes, offset)?;
                    if !factor.is_zero() {
                        normalized.push((modes.clone(), c / factor));
                    } else if !c.is_zero() {
                        let w = scalar_witness(modes.clone(), Scalar::zero(), c);
                        return Ok(Some(CheckOutcome::fail(id, ps.clone(), Some(w)).with_note("nonzero bracket where the displayed factor vanishes")));
                    }
                    Ok(None)
                }
            }
        })();
        match step {
            Ok(Some(fail)) => return Sub2nReport { outcome: fail, normalized },
            Ok(None) => checked += 1,
            Err(e) => {
                return Sub2nReport {
                    outcome: CheckOutcome::skipped(id, ps.clone(), &e).with_note(list(modes)),
                    normalized,
                }
            }
        }
    }
    if checked == 0 {
        return Sub2nReport {
            outcome: CheckOutcome::skipped(id, ps, &Error::WindowExhausted),
            normalized,
        };
    }
    if let Some((first_modes, first)) = normalized.first() {
        if let Some((modes, other)) = normalized.iter().find(|(_, c)| c != first) {
            let mut w = scalar_witness(modes.clone(), first.clone(), other.clone());
            w.target = first_modes.clone();
            let outcome = CheckOutcome::fail(id, ps, Some(w)).with_note("normalized ratio depends on the modes");
            return Sub2nReport { outcome, normalized };
        }
        let outcome = CheckOutcome::pass(id, ps).with_note(format!("constant {}", scalar::format(first)));
        return Sub2nReport { outcome, normalized };
    }
    Sub2nReport {
        outcome: CheckOutcome::pass(id, ps),
        normalized,
    }
}

/// Plain 2n-bracket of `W^{n+1}` against a multiple of `W^{n+1}_{sum m}`, the
/// multiple normalized by prefactor and shifted Vandermonde product; the
/// `(2n+1)`-fold brackets in `null_tuples` must vanish.
pub fn verify_sub2n_closure(s: &Single, n: usize, tuples: &[Vec<i64>], null_tuples: &[Vec<i64>]) -> (Sub2nReport, CheckOutcome) {
    let report = sub2n_generic(s, "conf.sub2n", n, tuples, 1);
    let null_id = "conf.sub2n_null";
    let ps = params(&[("n", n.to_string()), ("tuples", null_tuples.len().to_string())]);
    let mut parts = Vec::new();
    for modes in null_tuples {
        let cmp = (|| {
            let ops = modes.iter().map(|m| s.w(*m, n as i64 + 1)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&GradedOperator> = ops.iter().collect();
            let b = plain_bracket(&refs)?;
            b.compare(&GradedOperator::zero(b.domain().copied()))
        })();
        parts.push((list(modes), cmp));
    }
    (report, crate::check::merge(null_id, ps, parts))
}

/// The sub-4 example normalizes by `[m_k] - [m_j]` instead of the shifted numbers.
pub fn verify_sub4_example(s: &Single, tuples: &[Vec<i64>]) -> Sub2nReport {
    sub2n_generic(s, "conf.sub4_example", 2, tuples, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn single() -> Single {
        Single::new(Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap(), 10)
    }

    #[test]
    fn leibniz_first_order_on_z() {
        let s = single();
        let z = LaurentPoly::monomial(10, 1, one()).unwrap();
        assert!(verify_leibniz(&s.d, 1, &z, &z).passed());
        assert!(verify_leibniz(&s.d, 0, &z, &z).passed());
        assert_eq!(derive_poly(&s.d, &z.try_mul(&z).unwrap(), 1).unwrap().coefficient(1), ratio(5, 6));
    }

    #[test]
    fn pair_commutator_trivial_cases() {
        let s = single();
        assert!(verify_pair_commutator(&s, 1, 2, 1, 1).passed());
        assert!(verify_pair_commutator(&s, 2, 2, 3, 3).passed());
    }

    #[test]
    fn betas_follow_the_recursion() {
        // ranks in permuted order (2, 3, 1), alpha_1 = 1
        let b = betas(&[2, 3, 1], &[0, 1, 2], &[1]);
        assert_eq!(b, vec![1, 2 + 3 - 2 - 1, 6 - 3 - 1]);
    }

    #[test]
    fn repeated_arguments_give_zero_on_both_sides() {
        let s = single();
        assert!(verify_n_algebra(&s, &[1, 1, 0], &[2, 2, 1]).passed());
    }
}
