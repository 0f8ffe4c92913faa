//! The parameter grid: which checks run, at which arguments.

use std::sync::Mutex;
use std::time::Instant;

use itertools::Itertools;

use super::{RunConfig, SuiteKind};
use crate::check::CheckOutcome;
use crate::deform::Deformation;
use crate::laurent::LaurentPoly;
use crate::matrix_model::{
    verify_bell_recursion, verify_det_base, verify_det_property, verify_multi_index, verify_multi_index_symmetric,
    verify_rescaled_times, verify_theta_pq_remark, verify_toy_displays, verify_toy_duality, verify_toy_integrand,
    verify_toy_operator_forms, verify_wtilde_specializations, ToyParams,
};
use crate::scalar::{int, one, ratio};
use crate::w_multi::{
    verify_multi_antisymmetry, verify_partials_commute, verify_vbar_abelian, verify_vbar_commutator,
    verify_vbar_nbracket, verify_vbar_symmetric, verify_wbar_commutator, verify_wbar_from_vbar, Multi, VbarArg,
    MAX_VARS,
};
use crate::w_single::*;

#[derive(Debug, Clone)]
pub struct Timed {
    pub outcome: CheckOutcome,
    pub ms: u64,
}

type Job<'a> = (SuiteKind, Box<dyn Fn() -> Vec<CheckOutcome> + Send + Sync + 'a>);

/// Window of the multi-variable checks; the domain grows as `(2w+1)^N`.
const MULTI_WINDOW: i64 = 3;
/// Window of the 2-variable bracket checks.
const PAIR_WINDOW: i64 = 4;

fn increasing(lo: i64, hi: i64, k: usize) -> Vec<Vec<i64>> {
    (lo..=hi).combinations(k).collect()
}

fn forced_jobs<'a>(d: &'a Deformation, cfg: &'a RunConfig) -> Vec<Job<'a>> {
    let s = Single::new(d.clone(), cfg.window);
    let modes: Vec<i64> = (cfg.modes.0..=cfg.modes.1).collect();
    let small: Vec<i64> = modes.iter().copied().filter(|m| m.abs() <= 3).collect();
    let seed = cfg.seed;
    let k = cfg.t_order;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let mut add = |f: Box<dyn Fn() -> Vec<CheckOutcome> + Send + Sync + 'a>| jobs.push((SuiteKind::Forced, f));
    {
        let window = cfg.window;
        add(Box::new(move || vec![verify_deformed_numbers(d, window)]));
    }
    let s1 = s.clone();
    add(Box::new(move || vec![verify_fock(&s1)]));
    let s1 = s.clone();
    let arity = cfg.max_arity;
    add(Box::new(move || vec![verify_antisymmetry(&s1, seed, 50, arity)]));
    let s1 = s.clone();
    add(Box::new(move || vec![verify_jacobi(&s1, seed, 20)]));
    let s1 = s.clone();
    add(Box::new(move || vec![verify_nambu_forms(&s1, seed, 50)]));
    let s1 = s.clone();
    add(Box::new(move || vec![verify_associativity(&s1, seed, 20)]));
    let s1 = s.clone();
    let m1 = modes.clone();
    add(Box::new(move || vec![verify_abelian_rank_one(&s1, &m1)]));
    let s1 = s.clone();
    let rank = cfg.max_rank;
    add(Box::new(move || vec![verify_calw_agreement(&s1, rank, &small)]));
    add(Box::new(move || {
        (1..=MAX_VARS)
            .map(|vars| match Multi::new(d.clone(), MULTI_WINDOW, vars) {
                Ok(m) => verify_partials_commute(&m),
                Err(e) => CheckOutcome::skipped("forced.partials_commute", format!("vars={vars}"), &e),
            })
            .collect()
    }));
    add(Box::new(move || match Multi::new(d.clone(), PAIR_WINDOW, 2) {
        Ok(m) => vec![
            verify_vbar_symmetric(&m, &[1, -1], &[2, 1]),
            verify_vbar_symmetric(&m, &[2, 0], &[1, 3]),
            verify_multi_antisymmetry(&m, seed, 10),
        ],
        Err(e) => vec![CheckOutcome::skipped("forced.vbar_symmetric", "", &e)],
    }));
    add(Box::new(move || match Multi::new(d.clone(), MULTI_WINDOW, 3) {
        Ok(m) => vec![verify_vbar_symmetric(&m, &[1, 0, -1], &[2, 1, 1])],
        Err(e) => vec![CheckOutcome::skipped("forced.vbar_symmetric", "", &e)],
    }));
    add(Box::new(move || vec![verify_bell_recursion(k, k)]));
    add(Box::new(move || (1..=2).map(|a| verify_rescaled_times(d, a, k, k)).collect()));
    add(Box::new(move || {
        let order = k.max(6);
        vec![
            verify_multi_index_symmetric(&[1, 1, 2], order, order),
            verify_multi_index_symmetric(&[1, 2, 3], order, order),
        ]
    }));
    jobs
}

fn conformance_single<'a>(d: &'a Deformation, cfg: &'a RunConfig) -> Vec<Job<'a>> {
    let s = Single::new(d.clone(), cfg.window);
    let window = cfg.window;
    let nu = ratio(1, 3);
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let mut add = |f: Box<dyn Fn() -> Vec<CheckOutcome> + Send + Sync + 'a>| jobs.push((SuiteKind::Conformance, f));
    let s1 = s.clone();
    add(Box::new(move || vec![verify_derivative(&s1)]));
    add(Box::new(move || {
        let poly = |terms: Vec<(i64, i64)>| LaurentPoly::from_terms(window, terms.into_iter().map(|(e, c)| (e, int(c))));
        let (f, g) = match (poly(vec![(2, 1), (-1, 3)]), poly(vec![(1, 2), (3, -1)])) {
            (Ok(f), Ok(g)) => (f, g),
            (Err(e), _) | (_, Err(e)) => return vec![CheckOutcome::skipped("conf.leibniz", "", &e)],
        };
        (1..=3).map(|r| verify_leibniz(d, r, &f, &g)).collect()
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        [(1, 2, 1, 1), (2, -1, 2, 3), (1, 1, 3, 2), (0, -2, 2, 2), (2, 1, 3, 3)]
            .into_iter()
            .map(|(m, n, r, rs)| verify_pair_commutator(&s1, m, n, r, rs))
            .chain([(1, 2), (-1, 3), (2, -2)].into_iter().map(|(m, n)| verify_pair_remark(&s1, m, n)))
            .collect()
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        vec![
            verify_n_algebra(&s1, &[1, 2, 0], &[2, 2, 1]),
            verify_n_algebra(&s1, &[1, -1, 2], &[2, 3, 2]),
            verify_n_algebra(&s1, &[1, 0, -1, 2], &[2, 1, 2, 2]),
            verify_gji_prefactor(&s1, &[1, 0, -1], &[2, 2, 1]),
            verify_gji_prefactor(&s1, &[1, 0, -1, 2, 0, 1, -2], &[2, 1, 2, 1, 2, 1, 1]),
        ]
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        let (pairs, triples) = verify_sub2n_closure(&s1, 1, &increasing(-2, 2, 2), &increasing(-2, 2, 3));
        vec![pairs.outcome, triples]
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        let (quads, quints) = verify_sub2n_closure(&s1, 2, &increasing(-2, 2, 4), &increasing(-2, 2, 5));
        vec![quads.outcome, quints, verify_sub4_example(&s1, &increasing(-2, 2, 4)).outcome]
    }));
    add(Box::new(move || {
        let tuples = vec![vec![1, 2, -3, 0], vec![2, -1, 1, -2], vec![2, 3, -2, -3]];
        let pairs: Vec<(i64, i64)> = (-3..=3).map(|m| (m, -m)).chain([(1, 2), (2, -1)]).collect();
        vec![
            verify_central_skew(d, &tuples),
            verify_central_normalization(d, &tuples),
            verify_virasoro_central(d, &pairs),
            verify_cocycle(d, 1, (-3, 3)),
            verify_cocycle(d, 2, (-3, 3)),
        ]
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        let mut out = Vec::new();
        for (n, m) in [(1, 2), (2, -1)] {
            out.extend(verify_first_commutators_calw(&s1, n, m));
        }
        out.push(verify_calw_leading(&s1, 1, 2, 3, 2));
        out.push(verify_calw_leading(&s1, 2, 1, 3, 3));
        out
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        vec![
            verify_structure_functions(&s1, &[1, 0, 2], &[2, 2, 3]),
            verify_structure_functions(&s1, &[1, 0, -1, 2], &[2, 2, 3, 3]),
            verify_structure_functions(&s1, &[1, 0, -1, 2, -2], &[2, 2, 2, 3, 3]),
        ]
    }));
    let s1 = s.clone();
    add(Box::new(move || {
        let mut out = vec![verify_l_null(&s1, -1, 0, 2), verify_l_null(&s1, 0, 1, 2)];
        out.extend(verify_3algebra(&s1, 1, 2, -1));
        out.extend(verify_3algebra(&s1, 0, 1, 3));
        out
    }));
    let s1 = s.clone();
    add(Box::new(move || vec![verify_filippov(&s1, &[0, 1, 2])]));
    let s1 = s.clone();
    add(Box::new(move || {
        vec![verify_bremner(&s1, &[(1, 2), (0, 1), (2, 2), (-1, 1), (1, 1), (0, 2), (-1, 2)])]
    }));
    let s1 = s.clone();
    let nu1 = nu.clone();
    add(Box::new(move || {
        let mut out = Vec::new();
        for (n, m) in [(1, 2), (2, -1)] {
            out.extend(verify_virasoro_witt(&s1, &nu1, n, m));
        }
        out.extend(verify_virasoro_witt_3algebra(&s1, &nu1, 1, 2, -1));
        out
    }));
    let s1 = s.clone();
    add(Box::new(move || verify_hat_3algebra(&s1, &nu, 1, 2, -1)));
    let s1 = s.clone();
    add(Box::new(move || {
        let mut out = verify_4algebra_w3(&s1, [1, 0, -1, 2]);
        out.extend(verify_4algebra_w3(&s1, [2, 1, -2, 0]));
        out
    }));
    let s1 = s.clone();
    let rank = cfg.max_rank.min(3);
    add(Box::new(move || {
        let mut out = Vec::new();
        for r in 2..=rank {
            let odd = increasing(-2, 2, (2 * r - 1) as usize);
            let even = increasing(-3, 2, (2 * r) as usize);
            let (ratio_check, null) = verify_multibracket(&s1, r, &odd, &even);
            out.push(ratio_check);
            out.push(null);
        }
        out
    }));
    jobs
}

fn conformance_multi<'a>(d: &'a Deformation) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let mut add = |f: Box<dyn Fn() -> Vec<CheckOutcome> + Send + Sync + 'a>| jobs.push((SuiteKind::Conformance, f));
    add(Box::new(move || match Multi::new(d.clone(), PAIR_WINDOW, 2) {
        Ok(m) => vec![
            verify_vbar_abelian(&m, &[1, 0], &[-1, 2]),
            verify_vbar_commutator(&m, &[1, 0], &[1, 0], &[1, 1], &[1, 1]),
            verify_vbar_commutator(&m, &[1, 0], &[0, 1], &[2, 1], &[1, 2]),
            verify_wbar_from_vbar(&m, 1, 2),
            verify_wbar_from_vbar(&m, -1, 3),
            verify_wbar_commutator(&m, 1, -1, 2, 3),
            verify_wbar_commutator(&m, 1, 2, 2, 2),
            verify_vbar_nbracket(
                &m,
                &[
                    VbarArg { modes: vec![1, 0], ranks: vec![2, 1] },
                    VbarArg { modes: vec![0, 1], ranks: vec![1, 2] },
                ],
            ),
            verify_vbar_nbracket(
                &m,
                &[
                    VbarArg { modes: vec![1, 0], ranks: vec![2, 1] },
                    VbarArg { modes: vec![0, 1], ranks: vec![1, 2] },
                    VbarArg { modes: vec![-1, 0], ranks: vec![1, 1] },
                ],
            ),
        ],
        Err(e) => vec![CheckOutcome::skipped("conf.vbar_commutator", "", &e)],
    }));
    jobs
}

fn conformance_matrix<'a>(d: &'a Deformation, cfg: &'a RunConfig) -> Vec<Job<'a>> {
    let w = cfg.t_order;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    let mut add = |f: Box<dyn Fn() -> Vec<CheckOutcome> + Send + Sync + 'a>| jobs.push((SuiteKind::Conformance, f));
    add(Box::new(move || {
        let mut out: Vec<CheckOutcome> = (1..=4).map(|m| verify_det_property(m, &[int(2)], w)).collect();
        for xs in [vec![int(1), int(2)], vec![int(2), int(3)]] {
            out.extend((1..=3).map(|m| verify_det_property(m, &xs, w)));
        }
        out
    }));
    add(Box::new(move || (1..=3).map(|m| verify_det_property(m, &[int(1), int(2), int(3)], w)).collect()));
    add(Box::new(move || {
        let mut out: Vec<CheckOutcome> = (1..=3).map(|m| verify_det_base(m, w.max(3), w.max(3))).collect();
        out.push(verify_multi_index(&[1, 2], &[int(1), int(2)], w));
        out.push(verify_multi_index(&[1, 1, 2], &[int(1), int(2), int(3)], w.min(4)));
        out
    }));
    add(Box::new(move || {
        let mut out = verify_wtilde_specializations(d, 3, 1, w);
        out.extend(verify_wtilde_specializations(d, 2, 2, w.min(4)));
        out
    }));
    for point in cfg.toy.iter().copied() {
        for r in 1..=(cfg.max_rank.clamp(1, 3) as usize) {
            add(Box::new(move || {
                let mut out = Vec::new();
                for m in 0..=2 {
                    let p = ToyParams { a: point.a, gamma: point.gamma, m, r, order: w, max_weight: w };
                    let (full, origin) = verify_toy_duality(d, &p);
                    out.push(full);
                    out.push(origin);
                    out.push(verify_toy_integrand(d, &p));
                    if r == 1 {
                        out.extend(verify_toy_displays(d, &p));
                    }
                }
                out
            }));
        }
    }
    let window = cfg.window;
    let (a_values, rank) = (cfg.toy.iter().map(|t| t.a).unique().collect::<Vec<_>>(), cfg.max_rank.min(4));
    add(Box::new(move || {
        let mut out = Vec::new();
        for &a in &a_values {
            for r in 2..=rank {
                out.push(verify_toy_operator_forms(d, a, 1, r, window));
            }
        }
        out
    }));
    add(Box::new(move || vec![verify_theta_pq_remark(d, &[int(2), ratio(1, 2), int(3), -one()], 3)]));
    jobs
}

/// Runs every selected job across a small thread pool; output order is fixed by the caller's sort.
pub fn execute(d: &Deformation, cfg: &RunConfig) -> Vec<Timed> {
    let mut jobs = forced_jobs(d, cfg);
    jobs.extend(conformance_single(d, cfg));
    jobs.extend(conformance_multi(d));
    jobs.extend(conformance_matrix(d, cfg));
    let jobs: Vec<_> = jobs.into_iter().filter(|(kind, _)| cfg.suite.includes(*kind)).collect();
    let next = Mutex::new(0usize);
    let results = Mutex::new(Vec::new());
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = {
                    let mut guard = next.lock().expect("job counter");
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let Some((_, job)) = jobs.get(i) else { break };
                let start = Instant::now();
                let outcomes = job();
                let ms = if cfg.timings { start.elapsed().as_millis() as u64 } else { 0 };
                let timed: Vec<Timed> = outcomes.into_iter().map(|outcome| Timed { outcome, ms }).collect();
                results.lock().expect("result list").extend(timed);
            });
        }
    });
    results
        .into_inner()
        .expect("result list")
        .into_iter()
        .filter(|t| cfg.suite.includes(SuiteKind::of(&t.outcome.id)))
        .collect()
}
