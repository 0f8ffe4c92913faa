//! Checks on the recursively generated operators: commutators, 3- and 4-algebras,
//! Virasoro-Witt realizations and the multibracket.

use itertools::Itertools;
use num_traits::Zero;

use super::{combine, derivative_profile, graded_by_root, CalWMode, Single};
use crate::check::{list, merge, params, scalar_witness, CheckOutcome};
use crate::error::{Error, Result};
use crate::operator::{n_bracket, nambu_left, permutation_is_even, plain_bracket, BracketSpec, Comparison, GradedOperator, Witness};
use crate::scalar::{self, int, one, ratio, Scalar};

fn calw(s: &Single, m: i64, rank: i64) -> Result<GradedOperator> {
    s.calw(m, rank, CalWMode::Closed)
}

fn is_zero_on_window(op: &GradedOperator) -> Result<Comparison> {
    op.compare(&GradedOperator::zero(op.domain().copied()))
}

fn bracket3(a: &GradedOperator, b: &GradedOperator, c: &GradedOperator) -> Result<GradedOperator> {
    plain_bracket(&[a, b, c])
}

/// Checks that `delta` has no derivative component of order `>= from`.
///
/// `max_order` bounds the order of every operator involved, so the profile is
/// conclusive once it resolves past it.
fn below_order(s: &Single, delta: &GradedOperator, shift: i64, from: i64, max_order: i64) -> Result<Comparison> {
    let profile = derivative_profile(&s.d, delta, shift)?;
    if let Some(n) = profile.off_shift {
        let image = delta.image(&n).expect("domain key");
        let (t, c) = image.iter().find(|(t, c)| **t != n + shift && !c.is_zero()).expect("off-shift entry");
        return Ok(Comparison::Differs(Witness {
            mode: vec![n],
            target: vec![*t],
            expected: Scalar::zero(),
            got: c.clone(),
        }));
    }
    if (profile.resolved_orders() as i64) <= max_order {
        return Err(Error::WindowExhausted);
    }
    let from = from.max(0) as usize;
    Ok(match profile.first_at_or_above(from) {
        Some(j) => Comparison::Differs(scalar_witness(vec![j as i64], Scalar::zero(), profile.coefficients[j].clone())),
        None => Comparison::Equal {
            checked: profile.resolved_orders(),
        },
    })
}

/// The six displayed first commutators, one outcome per line.
pub fn verify_first_commutators_calw(s: &Single, n: i64, m: i64) -> Vec<CheckOutcome> {
    let d = &s.d;
    let ps = params(&[("n", n.to_string()), ("m", m.to_string())]);
    type Line<'a> = (&'a str, (i64, i64), Box<dyn Fn() -> Result<Vec<(Scalar, i64)>> + 'a>);
    let lines: Vec<Line> = vec![
        ("conf.calw_comm_11", (1, 1), Box::new(|| Ok(vec![]))),
        ("conf.calw_comm_21", (2, 1), Box::new(|| Ok(vec![(d.number(-m)?, 1)]))),
        ("conf.calw_comm_22", (2, 2), Box::new(|| Ok(vec![(d.number(n)? - d.number(m)?, 2)]))),
        ("conf.calw_comm_31", (3, 1), Box::new(|| Ok(vec![(-d.number(2 * m)?, 2)]))),
        (
            "conf.calw_comm_32",
            (3, 2),
            Box::new(|| {
                Ok(vec![
                    (d.number(n)? - d.number(2 * m)?, 3),
                    (ratio(1, 4) * d.number(n + 2)? * d.number(m + 1)? * d.number(m)?, 1),
                ])
            }),
        ),
        (
            "conf.calw_comm_33",
            (3, 3),
            Box::new(|| {
                Ok(vec![
                    (d.number(2 * n)? - d.number(2 * m)?, 4),
                    (-ratio(1, 2) * (d.number(n)? - d.number(m)?) * d.number(n + 2)? * d.number(m + 2)?, 2),
                ])
            }),
        ),
    ];
    lines
        .into_iter()
        .map(|(id, (rs, rr), rhs)| {
            let cmp = (|| {
                let lhs = calw(s, n, rs)?.commutator(&calw(s, m, rr)?)?;
                let mut terms = Vec::new();
                for (c, rank) in rhs()? {
                    terms.push((c, calw(s, n + m, rank)?));
                }
                lhs.compare(&combine(s.window, terms)?)
            })();
            CheckOutcome::from_comparison(id, ps.clone(), cmp)
        })
        .collect()
}

/// `[W^s_n, W^r_m]` against `([n(r-1)] - [m(s-1)]) W^{s+r-2}_{n+m}` up to lower derivative orders.
pub fn verify_calw_leading(s: &Single, n: i64, m: i64, rank_s: i64, rank_r: i64) -> CheckOutcome {
    let id = "conf.calw_leading";
    let ps = params(&[("n", n.to_string()), ("m", m.to_string()), ("s", rank_s.to_string()), ("r", rank_r.to_string())]);
    let cmp = (|| {
        let d = &s.d;
        let lhs = calw(s, n, rank_s)?.commutator(&calw(s, m, rank_r)?)?;
        let coeff = d.number(n * (rank_r - 1))? - d.number(m * (rank_s - 1))?;
        let rank = rank_s + rank_r - 2;
        let delta = if rank >= 1 {
            lhs.sub(&calw(s, n + m, rank)?.scale(&coeff))?
        } else {
            lhs
        };
        let top = n + m + rank - 1;
        let max_order = (n + rank_s - 1) + (m + rank_r - 1);
        below_order(s, &delta, -(n + m), top, max_order)
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// The 3-bracket display with coefficient `[m_1(s_3-s_2) + m_2(s_1-s_3) + m_3(s_2-s_1)]`
/// in front of `W^{s_1+s_2+s_3}`, and the derivative-order bounds `W^{S-7}` and
/// `W^{S-8}` for the 4- and 5-brackets.
pub fn verify_structure_functions(s: &Single, modes: &[i64], ranks: &[i64]) -> CheckOutcome {
    let arity = modes.len();
    let id = match arity {
        3 => "conf.structure_3bracket",
        4 => "conf.structure_4bracket",
        5 => "conf.structure_5bracket",
        _ => panic!("structure functions are displayed for 3, 4 and 5 arguments"),
    };
    let ps = params(&[("m", list(modes)), ("s", list(ranks))]);
    let cmp = (|| {
        let ops = modes.iter().zip(ranks).map(|(m, r)| calw(s, *m, *r)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&GradedOperator> = ops.iter().collect();
        let total_m: i64 = modes.iter().sum();
        let total_s: i64 = ranks.iter().sum();
        let bracket = n_bracket(&refs, BracketSpec::mode_sum(total_m), &s.d)?;
        let max_order: i64 = modes.iter().zip(ranks).map(|(m, r)| m + r - 1).sum();
        match arity {
            3 => {
                let (m1, m2, m3) = (modes[0], modes[1], modes[2]);
                let (s1, s2, s3) = (ranks[0], ranks[1], ranks[2]);
                let coeff = s.d.number(m1 * (s3 - s2) + m2 * (s1 - s3) + m3 * (s2 - s1))?;
                let delta = bracket.sub(&calw(s, total_m, total_s)?.scale(&coeff))?;
                below_order(s, &delta, -total_m, total_m + total_s - 1, max_order.max(total_m + total_s - 1))
            }
            _ => {
                let rank = total_s - if arity == 4 { 7 } else { 8 };
                below_order(s, &bracket, -total_m, total_m + rank, max_order)
            }
        }
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// `[L_k, L_n, L_m] = 0`.
pub fn verify_l_null(s: &Single, k: i64, n: i64, m: i64) -> CheckOutcome {
    let ps = params(&[("m", list(&[k, n, m]))]);
    let cmp = (|| is_zero_on_window(&bracket3(&s.l(k)?, &s.l(n)?, &s.l(m)?)?))();
    CheckOutcome::from_comparison("conf.l_null_3algebra", ps, cmp)
}

/// The four lines of the `W^2`/`W^1` 3-algebra, as Nambu brackets.
pub fn verify_3algebra(s: &Single, m1: i64, m2: i64, m3: i64) -> Vec<CheckOutcome> {
    let d = &s.d;
    let ps = params(&[("m", list(&[m1, m2, m3]))]);
    let total = m1 + m2 + m3;
    let line = |id: &str, ranks: [i64; 3], rhs: &dyn Fn() -> Result<Option<(Scalar, i64)>>| {
        let cmp = (|| {
            let a = calw(s, m1, ranks[0])?;
            let b = calw(s, m2, ranks[1])?;
            let c = calw(s, m3, ranks[2])?;
            let lhs = nambu_left(&a, &b, &c)?;
            match rhs()? {
                Some((coeff, rank)) => lhs.compare(&calw(s, total, rank)?.scale(&coeff)),
                None => is_zero_on_window(&lhs),
            }
        })();
        CheckOutcome::from_comparison(id, ps.clone(), cmp)
    };
    let n = |m: i64| d.number(m);
    vec![
        line("conf.three_algebra_222", [2, 2, 2], &|| {
            Ok(Some((ratio(1, 4) * (n(m3)? - n(m2)?) * (n(m3)? - n(m1)?) * (n(m2)? - n(m1)?), 1)))
        }),
        line("conf.three_algebra_221", [2, 2, 1], &|| Ok(Some((n(m2)? - n(m1)?, 2)))),
        line("conf.three_algebra_211", [2, 1, 1], &|| Ok(Some((n(m2)? - n(m3)?, 1)))),
        line("conf.three_algebra_null", [1, 1, 1], &|| Ok(None)),
    ]
}

/// `[[A, B, C], D, E] + [C, [A, B, D], E] + [C, D, [A, B, E]] - [A, B, [C, D, E]]`.
pub fn filippov_residual(ops: [&GradedOperator; 5]) -> Result<GradedOperator> {
    let [a, b, c, d, e] = ops;
    let lhs = bracket3(a, b, &bracket3(c, d, e)?)?;
    let r1 = bracket3(&bracket3(a, b, c)?, d, e)?;
    let r2 = bracket3(c, &bracket3(a, b, d)?, e)?;
    let r3 = bracket3(c, d, &bracket3(a, b, e)?)?;
    GradedOperator::linear_combination(&[(one(), &r1), (one(), &r2), (one(), &r3), (-one(), &lhs)])
}

/// Scans 5-tuples of `W^1`/`W^2` generators; passes when some tuple violates the
/// fundamental identity, as the 3-algebra is claimed not to satisfy it.
pub fn verify_filippov(s: &Single, modes: &[i64]) -> CheckOutcome {
    let id = "conf.filippov_fails";
    let ps = params(&[("modes", list(modes))]);
    let body = || -> Result<CheckOutcome> {
        let mut generators = Vec::new();
        for m in modes {
            for rank in [2, 1] {
                generators.push(((*m, rank), calw(s, *m, rank)?));
            }
        }
        for tuple in (0..generators.len()).permutations(5) {
            let ops: Vec<&GradedOperator> = tuple.iter().map(|i| &generators[*i].1).collect();
            let residual = filippov_residual([ops[0], ops[1], ops[2], ops[3], ops[4]])?;
            if let Comparison::Differs(w) = is_zero_on_window(&residual)? {
                let labels: Vec<String> = tuple.iter().map(|i| format!("W{}_{}", generators[*i].0 .1, generators[*i].0 .0)).collect();
                let note = format!("nonzero residual at ({}), mode {} value {}", labels.join(" "), list(&w.mode), scalar::format(&w.expected));
                return Ok(CheckOutcome::pass(id, ps.clone()).with_note(note));
            }
        }
        Ok(CheckOutcome::fail(id, ps.clone(), None).with_note("identity held on every scanned tuple"))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// Bremner identity with `A = ops[0]`, `B_i = ops[i]`.
///
/// Each side is antisymmetric in two groups of its indices; both reduce to 60
/// representative terms with the same multiplicity 12, which is dropped.
pub fn bremner_sides(ops: &[GradedOperator]) -> Result<(GradedOperator, GradedOperator)> {
    assert_eq!(ops.len(), 7, "Bremner identity takes A and six B's");
    let a = &ops[0];
    let b = &ops[1..];
    let idx: Vec<usize> = (0..6).collect();
    let mut lhs_terms = Vec::new();
    let mut rhs_terms = Vec::new();
    for triple in idx.iter().copied().combinations(3) {
        let rest: Vec<usize> = idx.iter().copied().filter(|i| !triple.contains(i)).collect();
        let inner = bracket3(&b[triple[0]], &b[triple[1]], &b[triple[2]])?;
        for (pos, &i4) in rest.iter().enumerate() {
            let pair: Vec<usize> = rest.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, i)| *i).collect();
            let order: Vec<usize> = triple.iter().copied().chain([i4]).chain(pair.iter().copied()).collect();
            let middle = bracket3(a, &inner, &b[i4])?;
            let value = bracket3(&middle, &b[pair[0]], &b[pair[1]])?;
            lhs_terms.push((scalar::sign(permutation_is_even(&order)), value));
        }
    }
    for pair in idx.iter().copied().combinations(2) {
        let rest: Vec<usize> = idx.iter().copied().filter(|i| !pair.contains(i)).collect();
        let first = bracket3(a, &b[pair[0]], &b[pair[1]])?;
        for triple in rest.iter().copied().combinations(3) {
            let i6 = *rest.iter().find(|i| !triple.contains(i)).expect("one index left");
            let order: Vec<usize> = pair.iter().copied().chain(triple.iter().copied()).chain([i6]).collect();
            let second = bracket3(&b[triple[0]], &b[triple[1]], &b[triple[2]])?;
            let value = bracket3(&first, &second, &b[i6])?;
            rhs_terms.push((scalar::sign(permutation_is_even(&order)), value));
        }
    }
    let fold = |terms: Vec<(Scalar, GradedOperator)>| {
        let refs: Vec<(Scalar, &GradedOperator)> = terms.iter().map(|(c, o)| (c.clone(), o)).collect();
        GradedOperator::linear_combination(&refs)
    };
    Ok((fold(lhs_terms)?, fold(rhs_terms)?))
}

/// `generators` are `(mode, rank)` pairs for `A, B_1, ..., B_6`.
pub fn verify_bremner(s: &Single, generators: &[(i64, i64)]) -> CheckOutcome {
    let tag: Vec<String> = generators.iter().map(|(m, r)| format!("W{r}_{m}")).collect();
    let ps = params(&[("ops", format!("({})", tag.join(" ")))]);
    let cmp = (|| {
        let ops = generators.iter().map(|(m, r)| calw(s, *m, *r)).collect::<Result<Vec<_>>>()?;
        let (lhs, rhs) = bremner_sides(&ops)?;
        lhs.compare(&rhs)
    })();
    CheckOutcome::from_comparison("conf.bremner", ps, cmp)
}

/// `[F_n, F_m]`, `[F_n, R_m]`, `[R_n, R_m]`.
pub fn verify_virasoro_witt(s: &Single, nu: &Scalar, n: i64, m: i64) -> Vec<CheckOutcome> {
    let d = &s.d;
    let ps = params(&[("nu", scalar::format(nu)), ("n", n.to_string()), ("m", m.to_string())]);
    let ff = (|| {
        let lhs = s.f(n, nu)?.commutator(&s.f(m, nu)?)?;
        lhs.compare(&s.f(n + m, nu)?.scale(&(d.number(n)? - d.number(m)?)))
    })();
    let fr = (|| {
        let lhs = s.f(n, nu)?.commutator(&s.r(m)?)?;
        lhs.compare(&s.r(n + m)?.scale(&d.number(-m)?))
    })();
    let rr = (|| is_zero_on_window(&s.r(n)?.commutator(&s.r(m)?)?))();
    vec![
        CheckOutcome::from_comparison("conf.virasoro_witt_ff", ps.clone(), ff),
        CheckOutcome::from_comparison("conf.virasoro_witt_fr", ps.clone(), fr),
        CheckOutcome::from_comparison("conf.virasoro_witt_rr", ps, rr),
    ]
}

/// The four lines of the `F`/`R` 3-algebra.
pub fn verify_virasoro_witt_3algebra(s: &Single, nu: &Scalar, k: i64, m: i64, n: i64) -> Vec<CheckOutcome> {
    let d = &s.d;
    let ps = params(&[("nu", scalar::format(nu)), ("m", list(&[k, m, n]))]);
    let total = k + m + n;
    let num = |x: i64| d.number(x);
    let v = ratio(1, 4) - nu * nu;
    let fff = (|| {
        let lhs = bracket3(&s.f(k, nu)?, &s.f(m, nu)?, &s.f(n, nu)?)?;
        let c = &v * (num(n)? - num(m)?) * (num(n)? - num(k)?) * (num(m)? - num(k)?);
        lhs.compare(&s.r(total)?.scale(&c))
    })();
    let ffr = (|| {
        let lhs = bracket3(&s.f(k, nu)?, &s.f(m, nu)?, &s.r(n)?)?;
        let outer = num(m)? - num(k)?;
        let rhs = combine(
            s.window,
            vec![
                (outer.clone(), s.f(total, nu)?),
                (-outer * int(2) * nu * num(n)?, s.r(total)?),
            ],
        )?;
        lhs.compare(&rhs)
    })();
    let frr = (|| {
        let lhs = bracket3(&s.f(k, nu)?, &s.r(m)?, &s.r(n)?)?;
        lhs.compare(&s.r(total)?.scale(&(num(m)? - num(n)?)))
    })();
    let rrr = (|| is_zero_on_window(&bracket3(&s.r(k)?, &s.r(m)?, &s.r(n)?)?))();
    vec![
        CheckOutcome::from_comparison("conf.vw3_fff", ps.clone(), fff),
        CheckOutcome::from_comparison("conf.vw3_ffr", ps.clone(), ffr),
        CheckOutcome::from_comparison("conf.vw3_frr", ps.clone(), frr),
        CheckOutcome::from_comparison("conf.vw3_rrr", ps, rrr),
    ]
}

/// Compares `sum c_i root^{e_i} O_i` against zero power by power of the root.
fn zero_over_root(s: &Single, nu: &Scalar, terms: Vec<(Scalar, i64, GradedOperator)>) -> Result<Comparison> {
    let root = super::QuarticRoot::new(ratio(1, 4) - nu * nu)?;
    let buckets = graded_by_root(s.window, &root, terms)?;
    let mut checked = 0;
    for (power, bucket) in buckets.iter().enumerate() {
        match is_zero_on_window(bucket)? {
            Comparison::Equal { checked: c } => checked += c,
            Comparison::Differs(mut w) => {
                w.target.push(power as i64);
                return Ok(Comparison::Differs(w));
            }
        }
    }
    Ok(Comparison::Equal { checked })
}

/// The hat-scaled 3-algebra, with `hat F = -c^{-1} F`, `hat R = c R`, `c^4 = 1/4 - nu^2`
/// and `z = 2 nu / c^2`, compared exactly in the field generated by `c`.
pub fn verify_hat_3algebra(s: &Single, nu: &Scalar, k: i64, m: i64, n: i64) -> Vec<CheckOutcome> {
    let d = &s.d;
    let ps = params(&[("nu", scalar::format(nu)), ("m", list(&[k, m, n]))]);
    let total = k + m + n;
    let num = |x: i64| d.number(x);
    let fff = (|| {
        let lhs = bracket3(&s.f(k, nu)?, &s.f(m, nu)?, &s.f(n, nu)?)?;
        let c = (num(n)? - num(m)?) * (num(n)? - num(k)?) * (num(k)? - num(m)?);
        zero_over_root(s, nu, vec![(-one(), -3, lhs), (-c, 1, s.r(total)?)])
    })();
    let ffr = (|| {
        let lhs = bracket3(&s.f(k, nu)?, &s.f(m, nu)?, &s.r(n)?)?;
        let outer = num(k)? - num(m)?;
        zero_over_root(
            s,
            nu,
            vec![
                (one(), -1, lhs),
                (outer.clone(), -1, s.f(total, nu)?),
                (-outer * int(2) * nu * num(n)?, -1, s.r(total)?),
            ],
        )
    })();
    let frr = (|| {
        let lhs = bracket3(&s.f(k, nu)?, &s.r(m)?, &s.r(n)?)?;
        zero_over_root(s, nu, vec![(-one(), 1, lhs), (-(num(n)? - num(m)?), 1, s.r(total)?)])
    })();
    let rrr = (|| {
        let lhs = bracket3(&s.r(k)?, &s.r(m)?, &s.r(n)?)?;
        zero_over_root(s, nu, vec![(one(), 3, lhs)])
    })();
    vec![
        CheckOutcome::from_comparison("conf.hat_vw3_fff", ps.clone(), fff),
        CheckOutcome::from_comparison("conf.hat_vw3_ffr", ps.clone(), ffr),
        CheckOutcome::from_comparison("conf.hat_vw3_frr", ps.clone(), frr),
        CheckOutcome::from_comparison("conf.hat_vw3_rrr", ps, rrr),
    ]
}

/// The five lines of the `W^3`/`W^1` 4-algebra, with the mode-sum prefactor on the bracket.
pub fn verify_4algebra_w3(s: &Single, modes: [i64; 4]) -> Vec<CheckOutcome> {
    let d = &s.d;
    let ps = params(&[("m", list(&modes))]);
    let total: i64 = modes.iter().sum();
    let line = |id: &str, ranks: [i64; 4], rhs: &dyn Fn(&[Scalar]) -> Result<Vec<(Scalar, i64)>>| {
        let cmp = (|| {
            let ops = modes.iter().zip(ranks).map(|(m, r)| calw(s, *m, r)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&GradedOperator> = ops.iter().collect();
            let lhs = n_bracket(&refs, BracketSpec::mode_sum(total), d)?;
            let nums = modes.iter().map(|m| d.number(*m)).collect::<Result<Vec<_>>>()?;
            let mut terms = Vec::new();
            for (c, rank) in rhs(&nums)? {
                terms.push((c, calw(s, total, rank)?));
            }
            lhs.compare(&combine(s.window, terms)?)
        })();
        CheckOutcome::from_comparison(id, ps.clone(), cmp)
    };
    let v4 = d.vandermonde(&modes, 0);
    let v3 = d.vandermonde(&modes[..3], 0);
    let pair_sum = |x: &[Scalar], upto: usize| -> Scalar {
        (0..upto).tuple_combinations().map(|(j, k)| &x[j] * &x[k]).sum()
    };
    vec![
        line("conf.four_algebra_3333", [3, 3, 3, 3], &|x| {
            let v = v4.clone()?;
            let singles: Scalar = x.iter().map(|y| int(6) * y + y * y).sum();
            let bracket = int(3) * pair_sum(x, 4) + singles + int(9);
            Ok(vec![(-ratio(9, 2) * &v, 3), (ratio(1, 8) * v * bracket, 1)])
        }),
        line("conf.four_algebra_3331", [3, 3, 3, 1], &|x| {
            let v = v3.clone()?;
            let m4 = &x[3];
            let first3: Scalar = x[..3].iter().sum();
            let bracket = pair_sum(x, 4) + (int(4) - m4) * first3 + int(6) * m4 - int(3) * m4 * m4 + int(4);
            Ok(vec![(-int(10) * m4 * &v, 3), (ratio(1, 2) * m4 * v * bracket, 1)])
        }),
        line("conf.four_algebra_3311", [3, 3, 1, 1], &|x| {
            Ok(vec![(int(2) * &x[2] * &x[3] * (&x[0] - &x[1]) * (&x[2] - &x[3]), 1)])
        }),
        line("conf.four_algebra_3111", [3, 1, 1, 1], &|_| Ok(vec![])),
        line("conf.four_algebra_1111", [1, 1, 1, 1], &|_| Ok(vec![])),
    ]
}

/// The `(2s-1)`-bracket of `W^s` against multiples of `V_{2s-1} W^1_{sum m}` with a
/// mode-independent factor, and the vanishing of the `2s`-bracket.
pub fn verify_multibracket(s: &Single, rank: i64, odd_tuples: &[Vec<i64>], even_tuples: &[Vec<i64>]) -> (CheckOutcome, CheckOutcome) {
    let id = "conf.multibracket";
    let ps = params(&[("s", rank.to_string()), ("tuples", odd_tuples.len().to_string())]);
    let body = || -> Result<CheckOutcome> {
        let mut reference: Option<(Vec<i64>, Scalar)> = None;
        let mut checked = 0;
        for modes in odd_tuples {
            let ops = modes.iter().map(|m| calw(s, *m, rank)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&GradedOperator> = ops.iter().collect();
            let bracket = plain_bracket(&refs)?;
            let target = calw(s, modes.iter().sum(), 1)?;
            let Some(c) = bracket.ratio_to(&target)? else {
                let guess = reference.as_ref().map(|(_, r)| r.clone()).unwrap_or_else(Scalar::zero);
                let v = s.d.vandermonde(modes, 0)?;
                let w = match target.scale(&(guess * v)).compare(&bracket)? {
                    Comparison::Differs(w) => Some(w),
                    Comparison::Equal { .. } => None,
                };
                return Ok(CheckOutcome::fail(id, ps.clone(), w).with_note(format!("not a multiple of W1 at {}", list(modes))));
            };
            checked += 1;
            let v = s.d.vandermonde(modes, 0)?;
            if v.is_zero() {
                if !c.is_zero() {
                    let w = scalar_witness(modes.clone(), Scalar::zero(), c);
                    return Ok(CheckOutcome::fail(id, ps.clone(), Some(w)));
                }
                continue;
            }
            let normalized = c / v;
            match &reference {
                None => reference = Some((modes.clone(), normalized)),
                Some((first, r)) if *r != normalized => {
                    let mut w = scalar_witness(modes.clone(), r.clone(), normalized);
                    w.target = first.clone();
                    return Ok(CheckOutcome::fail(id, ps.clone(), Some(w)).with_note("normalized ratio depends on the modes"));
                }
                _ => {}
            }
        }
        if checked == 0 {
            return Err(Error::WindowExhausted);
        }
        let note = reference.map(|(_, r)| format!("constant {}", scalar::format(&r)));
        let out = CheckOutcome::pass(id, ps.clone());
        Ok(match note {
            Some(n) => out.with_note(n),
            None => out,
        })
    };
    let ratio_check = CheckOutcome::from_result(id, ps.clone(), body());
    let null_ps = params(&[("s", rank.to_string()), ("tuples", even_tuples.len().to_string())]);
    let parts = even_tuples
        .iter()
        .map(|modes| {
            let cmp = (|| {
                let ops = modes.iter().map(|m| calw(s, *m, rank)).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&GradedOperator> = ops.iter().collect();
                is_zero_on_window(&plain_bracket(&refs)?)
            })();
            (list(modes), cmp)
        })
        .collect();
    (ratio_check, merge("conf.multibracket_null", null_ps, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::Deformation;

    fn single() -> Single {
        Single::new(Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap(), 10)
    }

    #[test]
    fn deformed_l_operators_leave_a_residual() {
        // independent evaluation on z^{-1}: the bracket of L_{-1}, L_0, L_2 gives -4278 z^0
        let s = single();
        let out = verify_l_null(&s, -1, 0, 2);
        let w = out.witness.expect("nonzero bracket");
        assert_eq!((w.mode, w.target, w.expected), (vec![-1], vec![0], int(-4278)));
    }

    #[test]
    fn first_line_of_first_commutators_is_exact() {
        let s = single();
        let out = verify_first_commutators_calw(&s, 1, 2);
        assert_eq!(out.len(), 6);
        assert!(out[0].passed());
    }

    #[test]
    fn bremner_reduction_uses_sixty_terms_per_side() {
        let s = Single::new(Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap(), 12);
        let ops: Vec<GradedOperator> = (0..7).map(|i| s.multiply(i % 2).unwrap()).collect();
        let (l, r) = bremner_sides(&ops).unwrap();
        assert!(l.is_zero() && r.is_zero());
    }
}
