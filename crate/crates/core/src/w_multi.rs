//! Operators in several variables `x_1..x_N` built from partial deformed derivatives.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::{list, merge, params, CheckOutcome};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::laurent::MultiMonomial;
use crate::operator::{n_bracket, plain_bracket, span_coefficients, BracketSpec, Comparison, Operator};
use crate::scalar::{self, one, powi, Scalar};

pub type MultiOperator = Operator<MultiMonomial>;

/// Highest number of variables the permutation sums are run with.
pub const MAX_VARS: usize = 3;

/// A deformation, a number of variables and the per-coordinate window.
#[derive(Debug, Clone)]
pub struct Multi {
    pub d: Deformation,
    pub window: i64,
    pub vars: usize,
}

fn tri(a: i64) -> i64 {
    a * (a - 1) / 2
}

impl Multi {
    pub fn new(d: Deformation, window: i64, vars: usize) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&vars) {
            return Err(Error::ConfigInvalid(format!("number of variables must be 1..={MAX_VARS}, got {vars}")));
        }
        if window < 1 {
            return Err(Error::ConfigInvalid(format!("window must be positive, got {window}")));
        }
        Ok(Multi { d, window, vars })
    }

    pub fn domain(&self) -> impl Iterator<Item = MultiMonomial> {
        (0..self.vars)
            .map(|_| -self.window..=self.window)
            .multi_cartesian_product()
    }

    /// `D_j`, acting on coordinate `j` (zero based) only.
    pub fn derivative(&self, j: usize) -> Result<MultiOperator> {
        self.d_x(j, 1, 0)
    }

    /// Multiplication by `x_j^k`.
    pub fn multiply(&self, j: usize, k: i64) -> Result<MultiOperator> {
        self.d_x(j, 0, k)
    }

    /// `D_j^a x_j^b`: multiplication first, then `a` derivatives.
    pub fn d_x(&self, j: usize, a: i64, b: i64) -> Result<MultiOperator> {
        assert!(j < self.vars && a >= 0, "coordinate or derivative order out of range");
        MultiOperator::from_action(self.domain(), |e| {
            let mut t = e.clone();
            t[j] += b - a;
            Ok(vec![(t, self.d.falling(e[j] + b, a)?)])
        })
    }

    /// `(-1)^{sum r} sum_sigma prod_j D_j^{r_sigma(j) - 1} x_j^{m_sigma(j) + r_sigma(j) - 1}`.
    pub fn vbar(&self, modes: &[i64], ranks: &[i64]) -> Result<MultiOperator> {
        assert!(modes.len() == self.vars && ranks.len() == self.vars, "one mode and rank per variable");
        assert!(ranks.iter().all(|r| *r >= 1), "ranks must be positive");
        let sign = scalar::sign(ranks.iter().sum::<i64>() % 2 == 0);
        let perms: Vec<Vec<usize>> = (0..self.vars).permutations(self.vars).collect();
        MultiOperator::from_action(self.domain(), |e| {
            let mut out = Vec::with_capacity(perms.len());
            for perm in &perms {
                let mut c = sign.clone();
                let mut t = e.clone();
                for (j, &src) in perm.iter().enumerate() {
                    let (a, b) = (ranks[src] - 1, modes[src] + ranks[src] - 1);
                    c *= self.d.falling(e[j] + b, a)?;
                    t[j] += modes[src];
                }
                out.push((t, c));
            }
            Ok(out)
        })
    }

    /// `(-1)^r sum_j D_j^{r-1} x_j^{m+r-1}`.
    pub fn wbar(&self, m: i64, r: i64) -> Result<MultiOperator> {
        assert!(r >= 1, "rank must be positive");
        let parts = (0..self.vars).map(|j| self.d_x(j, r - 1, m + r - 1)).collect::<Result<Vec<_>>>()?;
        let sign = scalar::sign(r % 2 == 0);
        let terms: Vec<(Scalar, &MultiOperator)> = parts.iter().map(|p| (sign.clone(), p)).collect();
        MultiOperator::linear_combination(&terms)
    }

    /// `K(P,Q)` read diagonally at the total degree of each target monomial.
    fn apply_k(&self, op: &MultiOperator) -> Result<MultiOperator> {
        if self.d.is_builtin() {
            return Ok(op.clone());
        }
        op.try_map_entries(|_, t, c| Ok(c * self.d.k_eigenvalue(t.iter().sum())?))
    }

    fn combine(&self, terms: &[(Scalar, MultiOperator)]) -> Result<MultiOperator> {
        if terms.is_empty() {
            return Ok(MultiOperator::zero(self.domain()));
        }
        let refs: Vec<(Scalar, &MultiOperator)> = terms.iter().map(|(c, o)| (c.clone(), o)).collect();
        MultiOperator::linear_combination(&refs)
    }
}

/// Memoizes `vbar` over the generators a right-hand side refers to.
struct VbarCache<'a> {
    multi: &'a Multi,
    seen: BTreeMap<(Vec<i64>, Vec<i64>), MultiOperator>,
}

impl<'a> VbarCache<'a> {
    fn new(multi: &'a Multi) -> Self {
        VbarCache {
            multi,
            seen: BTreeMap::new(),
        }
    }

    fn get(&mut self, modes: Vec<i64>, ranks: Vec<i64>) -> Result<MultiOperator> {
        let key = (modes, ranks);
        if let Some(op) = self.seen.get(&key) {
            return Ok(op.clone());
        }
        let op = self.multi.vbar(&key.0, &key.1)?;
        self.seen.insert(key, op.clone());
        Ok(op)
    }
}

fn ranges(upper: &[i64]) -> impl Iterator<Item = Vec<i64>> {
    upper.iter().map(|u| 0..*u).multi_cartesian_product()
}

/// One of the two multi-sums: `sum_alpha q^e p^f prod_j C^{alpha_j}_{top_j} A^{alpha_j}_{arg_j}`
/// with `e = sum tri(alpha_j) - top_j arg_j` and `f = sum tri(alpha_j) - j top_j`.
fn alpha_sum(
    multi: &Multi,
    cache: &mut VbarCache,
    top: &[i64],
    arg: &[i64],
    modes: &[i64],
    base_ranks: &[i64],
    sign: &Scalar,
    terms: &mut Vec<(Scalar, MultiOperator)>,
) -> Result<()> {
    let (p, q) = (multi.d.p(), multi.d.q());
    let upper: Vec<i64> = top.iter().map(|t| t + 1).collect();
    for alpha in ranges(&upper) {
        let mut e = 0;
        let mut f = 0;
        let mut c = sign.clone();
        for j in 0..multi.vars {
            e += tri(alpha[j]) - top[j] * arg[j];
            f += tri(alpha[j]) - (j as i64 + 1) * top[j];
            c *= multi.d.binomial(top[j], alpha[j])? * multi.d.falling(arg[j], alpha[j])?;
        }
        if c.is_zero() {
            continue;
        }
        c *= powi(q, e) * powi(p, f);
        let ranks: Vec<i64> = (0..multi.vars).map(|j| base_ranks[j] - alpha[j]).collect();
        terms.push((c, cache.get(modes.to_vec(), ranks)?));
    }
    Ok(())
}

/// The displayed right side and the distinct generators it refers to. The generator
/// rank is read as `sigma(r) + s - 1 - alpha`, the rank the `Wbar` reduction carries.
fn vbar_commutator_rhs(multi: &Multi, m: &[i64], n: &[i64], r: &[i64], s: &[i64]) -> Result<(MultiOperator, Vec<MultiOperator>)> {
    let vars = multi.vars;
    let mut cache = VbarCache::new(multi);
    let mut terms = Vec::new();
    for perm in (0..vars).permutations(vars) {
        let pm: Vec<i64> = perm.iter().map(|i| m[*i]).collect();
        let pr: Vec<i64> = perm.iter().map(|i| r[*i]).collect();
        let modes: Vec<i64> = (0..vars).map(|j| pm[j] + n[j]).collect();
        let base: Vec<i64> = (0..vars).map(|j| pr[j] + s[j] - 1).collect();
        let s_top: Vec<i64> = s.iter().map(|x| x - 1).collect();
        let m_arg: Vec<i64> = (0..vars).map(|j| pm[j] + pr[j] - 1).collect();
        alpha_sum(multi, &mut cache, &s_top, &m_arg, &modes, &base, &one(), &mut terms)?;
        let r_top: Vec<i64> = pr.iter().map(|x| x - 1).collect();
        let n_arg: Vec<i64> = (0..vars).map(|j| n[j] + s[j] - 1).collect();
        alpha_sum(multi, &mut cache, &r_top, &n_arg, &modes, &base, &-one(), &mut terms)?;
    }
    let sum = multi.combine(&terms)?;
    let rhs = multi.apply_k(&sum.scale(&scalar::sign(vars % 2 == 0)))?;
    Ok((rhs, cache.seen.into_values().collect()))
}

/// Turns a failed comparison into an outcome noting whether the left side lies in
/// the span of the generators the right side uses.
fn with_span(id: &str, ps: String, lhs: &MultiOperator, cmp: Comparison, generators: &[MultiOperator]) -> Result<CheckOutcome> {
    let Comparison::Differs(w) = cmp else {
        return Ok(CheckOutcome::pass(id, ps));
    };
    let refs: Vec<&MultiOperator> = generators.iter().collect();
    let note = match span_coefficients(lhs, &refs)? {
        Some(_) => "left side lies in the span of the displayed generators; coefficients differ",
        None => "left side lies outside the span of the displayed generators",
    };
    Ok(CheckOutcome::fail(id, ps, Some(w)).with_note(note))
}

fn vectors(pairs: &[(&str, &[i64])]) -> String {
    let owned: Vec<(&str, String)> = pairs.iter().map(|(k, v)| (*k, list(v))).collect();
    params(&owned)
}

/// `[D_i, D_j] = 0` for every pair of coordinates.
pub fn verify_partials_commute(multi: &Multi) -> CheckOutcome {
    let ps = params(&[("vars", multi.vars.to_string()), ("window", multi.window.to_string())]);
    let mut parts = Vec::new();
    for (i, j) in (0..multi.vars).cartesian_product(0..multi.vars) {
        let cmp = (|| {
            let c = multi.derivative(i)?.commutator(&multi.derivative(j)?)?;
            c.compare(&MultiOperator::zero(c.domain().cloned()))
        })();
        parts.push((format!("D{} D{}", i + 1, j + 1), cmp));
    }
    merge("forced.partials_commute", ps, parts)
}

/// Permuting the `(m_j, r_j)` pairs together leaves the operator unchanged.
pub fn verify_vbar_symmetric(multi: &Multi, modes: &[i64], ranks: &[i64]) -> CheckOutcome {
    let ps = vectors(&[("m", modes), ("r", ranks)]);
    let mut parts = Vec::new();
    let base = multi.vbar(modes, ranks);
    for perm in (0..multi.vars).permutations(multi.vars) {
        let pm: Vec<i64> = perm.iter().map(|i| modes[*i]).collect();
        let pr: Vec<i64> = perm.iter().map(|i| ranks[*i]).collect();
        let cmp = match &base {
            Ok(b) => multi.vbar(&pm, &pr).and_then(|o| o.compare(b)),
            Err(e) => Err(e.clone()),
        };
        parts.push((format!("permutation {perm:?}"), cmp));
    }
    merge("forced.vbar_symmetric", ps, parts)
}

fn random_vbar(multi: &Multi, rng: &mut ChaCha8Rng) -> Result<MultiOperator> {
    let modes: Vec<i64> = (0..multi.vars).map(|_| rng.gen_range(-1..=1)).collect();
    let ranks: Vec<i64> = (0..multi.vars).map(|_| rng.gen_range(1..=2)).collect();
    let c = scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    Ok(multi.vbar(&modes, &ranks)?.scale(&c))
}

/// Swapping two arguments of a multi-variable bracket negates it.
pub fn verify_multi_antisymmetry(multi: &Multi, seed: u64, cases: usize) -> CheckOutcome {
    let ps = params(&[("vars", multi.vars.to_string()), ("seed", seed.to_string()), ("cases", cases.to_string())]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for case in 0..cases {
        let arity = 2 + case % 2;
        let i = rng.gen_range(0..arity);
        let j = (i + rng.gen_range(1..arity)) % arity;
        let cmp = (|| {
            let ops = (0..arity).map(|_| random_vbar(multi, &mut rng)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&MultiOperator> = ops.iter().collect();
            let mut swapped = refs.clone();
            swapped.swap(i, j);
            plain_bracket(&refs)?.compare(&plain_bracket(&swapped)?.scale(&-one()))
        })();
        parts.push((format!("case {case}, arity {arity}"), cmp));
    }
    merge("forced.multi_antisymmetry", ps, parts)
}

/// `Wbar^r_m = (-1)^{N-1}/(N-1)! Vbar^{(r,1,..,1)}_{(m,0,..,0)}`.
pub fn verify_wbar_from_vbar(multi: &Multi, m: i64, r: i64) -> CheckOutcome {
    let id = "conf.wbar_from_vbar";
    let ps = params(&[("vars", multi.vars.to_string()), ("m", m.to_string()), ("r", r.to_string())]);
    let cmp = (|| {
        let n = multi.vars;
        let mut modes = vec![0; n];
        let mut ranks = vec![1; n];
        modes[0] = m;
        ranks[0] = r;
        let c = scalar::sign((n - 1) % 2 == 0) / scalar::factorial(n as u64 - 1);
        multi.vbar(&modes, &ranks)?.scale(&c).compare(&multi.wbar(m, r)?)
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// Rank-one generators commute.
pub fn verify_vbar_abelian(multi: &Multi, m: &[i64], n: &[i64]) -> CheckOutcome {
    let id = "conf.vbar_abelian";
    let ps = vectors(&[("m", m), ("n", n)]);
    let ones = vec![1; multi.vars];
    let cmp = (|| {
        let c = multi.vbar(m, &ones)?.commutator(&multi.vbar(n, &ones)?)?;
        c.compare(&MultiOperator::zero(c.domain().cloned()))
    })();
    CheckOutcome::from_comparison(id, ps, cmp)
}

/// The commutator of two `Vbar` against the displayed double permutation and multi-sum.
pub fn verify_vbar_commutator(multi: &Multi, m: &[i64], n: &[i64], r: &[i64], s: &[i64]) -> CheckOutcome {
    let id = "conf.vbar_commutator";
    let ps = vectors(&[("m", m), ("n", n), ("r", r), ("s", s)]);
    let body = || -> Result<CheckOutcome> {
        let lhs = multi.vbar(m, r)?.commutator(&multi.vbar(n, s)?)?;
        let (rhs, generators) = vbar_commutator_rhs(multi, m, n, r, s)?;
        let cmp = lhs.compare(&rhs)?;
        with_span(id, ps.clone(), &lhs, cmp, &generators)
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// One argument of a multi-variable n-bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VbarArg {
    pub modes: Vec<i64>,
    pub ranks: Vec<i64>,
}

/// Closure of the n-bracket in the algebra spanned by the `Vbar` generators.
///
/// The coefficient symbols of the displayed right side and the generator indices are
/// not fixed, so the bracket is tested against the span of every candidate generator
/// reachable from the arguments: `mbar` a sum of coordinate permutations of the mode
/// vectors, `rbar_j - 1` at most the total derivative order.
pub fn verify_vbar_nbracket(multi: &Multi, args: &[VbarArg]) -> CheckOutcome {
    let id = "conf.vbar_nbracket";
    let tag: Vec<String> = args
        .iter()
        .map(|a| format!("{}{}", list(&a.modes), list(&a.ranks)))
        .collect();
    let ps = params(&[("vars", multi.vars.to_string()), ("args", tag.join(""))]);
    let body = || -> Result<CheckOutcome> {
        let ops = args
            .iter()
            .map(|a| multi.vbar(&a.modes, &a.ranks))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&MultiOperator> = ops.iter().collect();
        let total: i64 = args.iter().flat_map(|a| a.modes.iter()).sum();
        let bracket = n_bracket(&refs, BracketSpec::mode_sum(total), &multi.d)?;
        if bracket.is_zero() {
            return Ok(CheckOutcome::pass(id, ps.clone()).with_note("bracket vanishes"));
        }
        let vars = multi.vars;
        let perms: Vec<Vec<usize>> = (0..vars).permutations(vars).collect();
        let mut mode_candidates: Vec<Vec<i64>> = Vec::new();
        for choice in (1..args.len()).map(|_| perms.iter()).multi_cartesian_product() {
            let mut mbar = args[0].modes.clone();
            for (arg, perm) in args[1..].iter().zip(choice) {
                for j in 0..vars {
                    mbar[j] += arg.modes[perm[j]];
                }
            }
            mbar.sort_unstable();
            if !mode_candidates.contains(&mbar) {
                mode_candidates.push(mbar);
            }
        }
        let order: i64 = args.iter().flat_map(|a| a.ranks.iter().map(|r| r - 1)).sum();
        let mut labels = Vec::new();
        let mut generators = Vec::new();
        for mbar in &mode_candidates {
            for alpha in ranges(&vec![order + 1; vars]) {
                let rbar: Vec<i64> = alpha.iter().map(|a| a + 1).collect();
                if alpha.iter().sum::<i64>() > order {
                    continue;
                }
                let op = multi.vbar(mbar, &rbar)?;
                // equal generators reached from a permuted pair
                let mut key: Vec<(i64, i64)> = mbar.iter().copied().zip(rbar.iter().copied()).collect();
                key.sort_unstable();
                if labels.iter().any(|(k, _, _)| *k == key) {
                    continue;
                }
                labels.push((key, mbar.clone(), rbar));
                generators.push(op);
            }
        }
        let refs: Vec<&MultiOperator> = generators.iter().collect();
        match span_coefficients(&bracket, &refs)? {
            Some(coefficients) => {
                let used: Vec<String> = labels
                    .iter()
                    .zip(&coefficients)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((_, m, r), c)| format!("{} Vbar{}{}", scalar::format(c), list(r), list(m)))
                    .collect();
                let note = format!("closes as {}; coefficient symbols beta, gamma and the generator indices are unresolved", used.join(" + "));
                Ok(CheckOutcome::pass(id, ps.clone()).with_note(note))
            }
            None => {
                let w = bracket.compare(&MultiOperator::zero(bracket.domain().cloned()))?;
                let Comparison::Differs(w) = w else {
                    unreachable!("nonzero bracket");
                };
                let note = format!("outside the span of {} candidate generators", generators.len());
                Ok(CheckOutcome::fail(id, ps.clone(), Some(w)).with_note(note))
            }
        }
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

fn wbar_commutator_rhs(multi: &Multi, m: i64, n: i64, r: i64, s: i64) -> Result<MultiOperator> {
    let d = &multi.d;
    let (p, q) = (d.p(), d.q());
    let mut terms = Vec::new();
    for k in 0..r {
        let c = powi(q, tri(k) - (r - 1) * (n + s - 1)) * powi(p, tri(k)) * d.binomial(r - 1, k)? * d.falling(n + s - 1, k)?;
        terms.push((c, multi.wbar(m + n, r + s - 1 - k)?));
    }
    for k in 0..s {
        let c = powi(q, tri(k) - (s - 1) * (m + r - 1)) * powi(p, tri(k)) * d.binomial(s - 1, k)? * d.falling(m + r - 1, k)?;
        terms.push((-c, multi.wbar(m + n, r + s - 1 - k)?));
    }
    multi.apply_k(&multi.combine(&terms)?)
}

/// The `Wbar` commutator; the `p` exponents are read as `k(k-1)/2`.
pub fn verify_wbar_commutator(multi: &Multi, m: i64, n: i64, r: i64, s: i64) -> CheckOutcome {
    let id = "conf.wbar_commutator";
    let ps = params(&[
        ("vars", multi.vars.to_string()),
        ("m", m.to_string()),
        ("n", n.to_string()),
        ("r", r.to_string()),
        ("s", s.to_string()),
    ]);
    let body = || -> Result<CheckOutcome> {
        let lhs = multi.wbar(m, r)?.commutator(&multi.wbar(n, s)?)?;
        let generators = (1..r + s).map(|rank| multi.wbar(m + n, rank)).collect::<Result<Vec<_>>>()?;
        let cmp = lhs.compare(&wbar_commutator_rhs(multi, m, n, r, s)?)?;
        with_span(id, ps.clone(), &lhs, cmp, &generators)
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::w_single::Single;

    fn pq() -> Deformation {
        Deformation::two_parameter(ratio(2, 3), ratio(1, 5)).unwrap()
    }

    #[test]
    fn partial_derivative_actions() {
        let m = Multi::new(pq(), 4, 2).unwrap();
        let d1 = m.derivative(0).unwrap();
        let d2 = m.derivative(1).unwrap();
        let img = d1.image(&vec![3, 0]).unwrap();
        assert_eq!(img.get(&vec![2, 0]), Some(&m.d.number(3).unwrap()));
        assert!(d2.image(&vec![3, 0]).unwrap().is_empty());
        assert!(d1.image(&vec![0, 0]).unwrap().is_empty());
        assert!(Multi::new(pq(), 4, 0).is_err());
    }

    #[test]
    fn vbar_matches_composed_factors() {
        let m = Multi::new(pq(), 5, 2).unwrap();
        let (modes, ranks) = ([1, -1], [2, 3]);
        let mut terms = Vec::new();
        for perm in [[0usize, 1], [1, 0]] {
            let mut prod: Option<MultiOperator> = None;
            for (j, &src) in perm.iter().enumerate() {
                let mut factor = m.multiply(j, modes[src] + ranks[src] - 1).unwrap();
                for _ in 1..ranks[src] {
                    factor = m.derivative(j).unwrap().compose(&factor).unwrap();
                }
                prod = Some(match prod {
                    None => factor,
                    Some(p) => p.compose(&factor).unwrap(),
                });
            }
            terms.push((scalar::sign((ranks[0] + ranks[1]) % 2 == 0), prod.unwrap()));
        }
        let oracle = m.combine(&terms).unwrap();
        assert!(m.vbar(&modes, &ranks).unwrap().compare(&oracle).unwrap().is_equal());
    }

    #[test]
    fn one_variable_reduces_to_single_operators() {
        let m = Multi::new(pq(), 6, 1).unwrap();
        let s = Single::new(pq(), 6);
        for (mode, rank) in [(0, 1), (1, 2), (-1, 3)] {
            let single = s.x_d(0, rank - 1).unwrap().compose(&s.multiply(mode + rank - 1).unwrap()).unwrap();
            let multi = m.vbar(&[mode], &[rank]).unwrap();
            let sign = scalar::sign(rank % 2 == 0);
            for n in single.domain() {
                let a = single.image(n).unwrap();
                let b = multi.image(&vec![*n]).unwrap();
                for (t, c) in a {
                    assert_eq!(b.get(&vec![*t]), Some(&(c * &sign)));
                }
                assert_eq!(a.len(), b.len());
            }
        }
        let c = m.vbar(&[1], &[2]).unwrap().commutator(&m.vbar(&[-1], &[2]).unwrap()).unwrap();
        let sc = s
            .x_d(0, 1)
            .unwrap()
            .compose(&s.multiply(2).unwrap())
            .unwrap()
            .commutator(&s.x_d(0, 1).unwrap().compose(&s.multiply(0).unwrap()).unwrap())
            .unwrap();
        for n in sc.domain() {
            if let Some(b) = c.image(&vec![*n]) {
                assert_eq!(b.get(&vec![*n]).cloned().unwrap_or_default(), sc.image(n).unwrap().get(n).cloned().unwrap_or_default());
            }
        }
    }

    #[test]
    fn symmetric_data_doubles_the_product() {
        let m = Multi::new(pq(), 4, 2).unwrap();
        let v = m.vbar(&[1, 1], &[2, 2]).unwrap();
        let single = m.d_x(0, 1, 2).unwrap().compose(&m.d_x(1, 1, 2).unwrap()).unwrap();
        assert!(v.compare(&single.scale(&scalar::int(2))).unwrap().is_equal());
    }

    #[test]
    fn two_bracket_is_the_scaled_commutator() {
        let m = Multi::new(pq(), 4, 2).unwrap();
        let a = m.vbar(&[1, 0], &[2, 1]).unwrap();
        let b = m.vbar(&[0, 1], &[1, 2]).unwrap();
        let bracket = n_bracket(&[&a, &b], BracketSpec::mode_sum(2), &m.d).unwrap();
        let expected = a.commutator(&b).unwrap().scale(&m.d.bracket_prefactor(2, 2).unwrap());
        assert!(bracket.compare(&expected).unwrap().is_equal());
    }

    #[test]
    fn forced_multi_checks_pass() {
        for vars in 1..=3 {
            let m = Multi::new(pq(), 3, vars).unwrap();
            assert!(verify_partials_commute(&m).passed());
        }
        let m = Multi::new(pq(), 4, 2).unwrap();
        assert!(verify_vbar_symmetric(&m, &[1, -1], &[2, 1]).passed());
        assert!(verify_multi_antisymmetry(&m, 3, 4).passed());
        assert!(verify_vbar_abelian(&m, &[1, 0], &[-1, 2]).passed());
        assert!(verify_wbar_from_vbar(&m, 1, 2).passed());
    }

    #[test]
    fn repeated_argument_bracket_vanishes() {
        let m = Multi::new(pq(), 4, 2).unwrap();
        let a = VbarArg {
            modes: vec![1, 0],
            ranks: vec![2, 1],
        };
        let out = verify_vbar_nbracket(&m, &[a.clone(), a.clone(), a]);
        assert!(out.passed());
        assert_eq!(out.note.as_deref(), Some("bracket vanishes"));
    }

    #[test]
    fn identical_commutator_arguments_agree_with_the_display() {
        let m = Multi::new(pq(), 4, 2).unwrap();
        assert!(verify_wbar_commutator(&m, 1, 1, 2, 2).passed());
        assert!(verify_vbar_commutator(&m, &[1, 0], &[1, 0], &[1, 1], &[1, 1]).passed());
    }

    #[test]
    fn one_parameter_family_closes_and_two_parameter_does_not() {
        let q = Deformation::one_parameter(ratio(1, 5)).unwrap();
        let m = Multi::new(q, 4, 2).unwrap();
        assert!(verify_wbar_commutator(&m, 1, -1, 2, 3).passed());
        assert!(verify_vbar_commutator(&m, &[1, 0], &[0, 1], &[2, 1], &[1, 2]).passed());
        let m = Multi::new(pq(), 4, 2).unwrap();
        let out = verify_wbar_commutator(&m, 1, 2, 2, 2);
        assert!(!out.passed());
        assert_eq!(out.note.as_deref(), Some("left side lies outside the span of the displayed generators"));
    }
}
