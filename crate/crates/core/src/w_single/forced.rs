//! Identities forced by associativity and antisymmetry; they validate the engine itself.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CalWMode, Fock, Single};
use crate::check::{list, merge, params, scalar_witness, CheckOutcome};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::operator::{gji_residual, nambu_left, nambu_right, plain_bracket, Comparison, GradedOperator};
use crate::scalar::{one, powi, ratio, Scalar};

fn zero_like(op: &GradedOperator) -> GradedOperator {
    GradedOperator::zero(op.domain().copied())
}

/// A random combination of one or two `W^r_m` with small rational coefficients.
pub fn random_operator(s: &Single, rng: &mut ChaCha8Rng) -> Result<GradedOperator> {
    let terms = rng.gen_range(1..=2);
    let mut acc: Option<GradedOperator> = None;
    for _ in 0..terms {
        let r = rng.gen_range(1..=3);
        let m = rng.gen_range(-2..=2);
        let c = ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        let term = s.w(m, r)?.scale(&c);
        acc = Some(match acc {
            None => term,
            Some(prev) => prev.add(&term)?,
        });
    }
    Ok(acc.expect("at least one term"))
}

fn random_ops(s: &Single, rng: &mut ChaCha8Rng, k: usize) -> Result<Vec<GradedOperator>> {
    (0..k).map(|_| random_operator(s, rng)).collect()
}

fn scalar_cmp(mode: Vec<i64>, expected: Scalar, got: Scalar) -> Result<Comparison> {
    Ok(if expected == got {
        Comparison::Equal { checked: 1 }
    } else {
        Comparison::Differs(scalar_witness(mode, expected, got))
    })
}

/// `[n] = R(p^n, q^n)`, `[n]! = [n][n-1]!`, and `C^k_n [k]! [n-k]! = [n]!` with `C^k_n = C^{n-k}_n`.
pub fn verify_deformed_numbers(d: &Deformation, max_n: i64) -> CheckOutcome {
    let ps = params(&[("n", format!("{}..={max_n}", -max_n))]);
    let mut parts = Vec::new();
    for n in -max_n..=max_n {
        let direct = (|| {
            let via_r = d.meromorphic(&powi(d.p(), n), &powi(d.q(), n))?;
            scalar_cmp(vec![n], via_r, d.number(n)?)
        })();
        match direct {
            Err(Error::UnsupportedExponent(_)) => {}
            other => parts.push((format!("[{n}]"), other)),
        }
        if n < 1 {
            continue;
        }
        let step = (|| scalar_cmp(vec![n], d.number(n)? * d.factorial(n - 1)?, d.factorial(n)?))();
        parts.push((format!("[{n}]!"), step));
        for k in 0..=n {
            let symmetric = (|| scalar_cmp(vec![n, k], d.binomial(n, k)?, d.binomial(n, n - k)?))();
            let product = (|| {
                let full = d.binomial(n, k)? * d.factorial(k)? * d.factorial(n - k)?;
                scalar_cmp(vec![n, k], d.factorial(n)?, full)
            })();
            for (label, cmp) in [("symmetry", symmetric), ("product", product)] {
                if !matches!(cmp, Err(Error::DivisionByZeroMode(_))) {
                    parts.push((format!("C({n},{k}) {label}"), cmp));
                }
            }
        }
    }
    merge("forced.deformed_numbers", ps, parts)
}

pub fn verify_fock(s: &Single) -> CheckOutcome {
    let ps = params(&[("window", s.window.to_string())]);
    let rel = |f: &dyn Fn() -> Result<(GradedOperator, GradedOperator)>| f().and_then(|(a, b)| a.compare(&b));
    let parts = vec![
        (
            "A Adag = [N+1]".to_string(),
            rel(&|| Ok((s.fock(Fock::A)?.compose(&s.fock(Fock::Adag)?)?, s.number_operator(1)?))),
        ),
        (
            "Adag A = [N]".to_string(),
            rel(&|| Ok((s.fock(Fock::Adag)?.compose(&s.fock(Fock::A)?)?, s.number_operator(0)?))),
        ),
        (
            "[N, A] = -A".to_string(),
            rel(&|| Ok((s.fock(Fock::N)?.commutator(&s.fock(Fock::A)?)?, s.fock(Fock::A)?.scale(&-one())))),
        ),
        (
            "[N, Adag] = Adag".to_string(),
            rel(&|| Ok((s.fock(Fock::N)?.commutator(&s.fock(Fock::Adag)?)?, s.fock(Fock::Adag)?))),
        ),
    ];
    merge("forced.fock", ps, parts)
}

/// Swapping two arguments of a plain bracket negates it; arities 2 through `max_arity`.
pub fn verify_antisymmetry(s: &Single, seed: u64, cases: usize, max_arity: usize) -> CheckOutcome {
    let ps = params(&[("seed", seed.to_string()), ("cases", cases.to_string()), ("max_arity", max_arity.to_string())]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for case in 0..cases {
        let arity = 2 + case % (max_arity - 1);
        let i = rng.gen_range(0..arity);
        let j = (i + rng.gen_range(1..arity)) % arity;
        let cmp = (|| {
            let ops = random_ops(s, &mut rng, arity)?;
            let refs: Vec<&GradedOperator> = ops.iter().collect();
            let mut swapped = refs.clone();
            swapped.swap(i, j);
            let a = plain_bracket(&refs)?;
            let b = plain_bracket(&swapped)?;
            a.compare(&b.scale(&-one()))
        })();
        parts.push((format!("case {case}, arity {arity}, swap {i}<->{j}"), cmp));
    }
    merge("forced.antisymmetry", ps, parts)
}

/// Jacobi identity for commutators and the plain GJI for 4-brackets.
pub fn verify_jacobi(s: &Single, seed: u64, cases: usize) -> CheckOutcome {
    let ps = params(&[("seed", seed.to_string()), ("cases", cases.to_string())]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for case in 0..cases {
        let count = if case % 2 == 0 { 3 } else { 7 };
        let cmp = (|| {
            let ops = random_ops(s, &mut rng, count)?;
            let refs: Vec<&GradedOperator> = ops.iter().collect();
            let residual = gji_residual(&refs, None, &s.d)?;
            residual.compare(&zero_like(&residual))
        })();
        parts.push((format!("case {case}, {count} operators"), cmp));
    }
    merge("forced.jacobi_gji", ps, parts)
}

pub fn verify_nambu_forms(s: &Single, seed: u64, cases: usize) -> CheckOutcome {
    let ps = params(&[("seed", seed.to_string()), ("cases", cases.to_string())]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for case in 0..cases {
        let cmp = (|| {
            let ops = random_ops(s, &mut rng, 3)?;
            let left = nambu_left(&ops[0], &ops[1], &ops[2])?;
            let right = nambu_right(&ops[0], &ops[1], &ops[2])?;
            left.compare(&right)
        })();
        parts.push((format!("case {case}"), cmp));
    }
    merge("forced.nambu_forms", ps, parts)
}

pub fn verify_associativity(s: &Single, seed: u64, cases: usize) -> CheckOutcome {
    let ps = params(&[("seed", seed.to_string()), ("cases", cases.to_string())]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for case in 0..cases {
        let cmp = (|| {
            let ops = random_ops(s, &mut rng, 3)?;
            let left = ops[0].compose(&ops[1])?.compose(&ops[2])?;
            let right = ops[0].compose(&ops[1].compose(&ops[2])?)?;
            left.compare(&right)
        })();
        parts.push((format!("case {case}"), cmp));
    }
    merge("forced.associativity", ps, parts)
}

/// `[W^1_n, W^1_m] = 0` for both rank-one families and `[R_n, R_m] = 0`.
///
/// `calW^1_m = -D^m` is a power of `D` only for `m >= 0`; negative modes are
/// exercised on the multiplication family alone.
pub fn verify_abelian_rank_one(s: &Single, modes: &[i64]) -> CheckOutcome {
    let ps = params(&[("modes", list(modes))]);
    let mut parts = Vec::new();
    let families: [(&str, bool, fn(&Single, i64) -> Result<GradedOperator>); 3] = [
        ("calW1", true, |s, m| s.calw(m, 1, CalWMode::Closed)),
        ("R", true, |s, m| s.r(m)),
        ("W1", false, |s, m| s.w(m, 1)),
    ];
    for (label, powers_of_d, make) in families {
        for &n in modes {
            for &m in modes {
                if powers_of_d && (n < 0 || m < 0) {
                    continue;
                }
                let cmp = (|| {
                    let c = make(s, n)?.commutator(&make(s, m)?)?;
                    c.compare(&zero_like(&c))
                })();
                parts.push((format!("{label} n={n} m={m}"), cmp));
            }
        }
    }
    merge("forced.abelian_rank_one", ps, parts)
}

/// Recursive and closed forms of `calW^s_m` agree wherever the recursion is defined.
pub fn verify_calw_agreement(s: &Single, max_rank: i64, modes: &[i64]) -> CheckOutcome {
    let ps = params(&[("max_rank", max_rank.to_string()), ("modes", list(modes))]);
    let mut parts = Vec::new();
    let mut degenerate = 0;
    for rank in 1..=max_rank {
        for &m in modes {
            let recursive = match s.calw(m, rank, CalWMode::Recursive) {
                Err(Error::DegenerateRecursion { .. }) => {
                    degenerate += 1;
                    continue;
                }
                other => other,
            };
            let cmp = recursive.and_then(|r| r.compare(&s.calw(m, rank, CalWMode::Closed)?));
            parts.push((format!("s={rank} m={m}"), cmp));
        }
    }
    let out = merge("forced.calw_recursive_closed", ps, parts);
    if degenerate > 0 {
        out.with_note(format!("{degenerate} pairs excluded where m+s vanishes in the recursion"))
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_level_identities_hold() {
        let s = Single::new(Deformation::two_parameter(ratio(2, 3), ratio(1, 5)).unwrap(), 8);
        assert!(verify_fock(&s).passed());
        assert!(verify_associativity(&s, 7, 5).passed());
        assert!(verify_nambu_forms(&s, 7, 5).passed());
        assert!(verify_antisymmetry(&s, 7, 5, 4).passed());
        assert!(matches!(
            s.w(0, 1).unwrap().compare(&s.w(0, 1).unwrap()).unwrap(),
            Comparison::Equal { .. }
        ));
    }
}
