//! The one-variable toy model `Z = int x^gamma exp(sum_s t_s x^s / s!) dx`.
//!
//! The x-space side differentiates `x^{m+gamma+r-1} E` with the scaled deformed
//! derivative and divides by `E`; the t-space side applies the constraint operator
//! to `Z = M_0`. Both land in [`MomentExpr`].

use std::collections::BTreeMap;

use super::bell::bell_coefficients;
use super::{MomentExpr, TOperator};
use crate::check::{merge, params, CheckOutcome};
use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::operator::GradedOperator;
use crate::scalar::{factorial, format, one, powi, zero, Scalar};
use crate::tseries::TSeries;
use crate::w_single::Single;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyParams {
    pub a: u32,
    pub gamma: usize,
    pub m: usize,
    pub r: usize,
    /// Number of times `K`; also caps the `k` sums and the derivative indices.
    pub order: usize,
    pub max_weight: usize,
}

impl ToyParams {
    fn validate(&self) -> Result<()> {
        if self.a == 0 || self.r == 0 || self.r > 4 || self.order == 0 {
            return Err(Error::ConfigInvalid(format!(
                "toy model needs a >= 1, 1 <= r <= 4, K >= 1 (got a={}, r={}, K={})",
                self.a, self.r, self.order
            )));
        }
        Ok(())
    }

    fn label(&self) -> String {
        params(&[
            ("a", self.a.to_string()),
            ("gamma", self.gamma.to_string()),
            ("m", self.m.to_string()),
            ("r", self.r.to_string()),
            ("K", self.order.to_string()),
            ("W", self.max_weight.to_string()),
        ])
    }

    /// `m + r + gamma - 1`.
    fn degree(&self) -> i64 {
        (self.m + self.r + self.gamma) as i64 - 1
    }

    fn with_rank(&self, r: usize) -> Self {
        ToyParams { r, ..*self }
    }
}

/// Which written form of the constraint operator to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyDisplay {
    General,
    ExampleR2,
    ExampleR3,
    ExampleR4,
    QRemark,
    PqRemark,
}

struct Bell {
    series: Vec<TSeries>,
    order: usize,
    max_weight: usize,
}

impl Bell {
    fn new(p: &ToyParams) -> Result<Self> {
        Ok(Bell {
            series: bell_coefficients(p.order, p.max_weight)?,
            order: p.order,
            max_weight: p.max_weight,
        })
    }

    fn get(&self, l: usize) -> Result<TSeries> {
        match self.series.get(l) {
            Some(b) => Ok(b.clone()),
            None if l > self.max_weight => Ok(TSeries::zero(self.order, self.max_weight)),
            None => Err(Error::TruncationOverflow {
                index: l as i64,
                order: self.order,
            }),
        }
    }
}

/// One `k` term: scalar, Bell index, derivative index.
type KTerm = (Scalar, usize, usize);

fn assemble(
    p: &ToyParams,
    bell: &Bell,
    outer: impl Fn(usize) -> Result<Scalar>,
    inner: impl Fn(usize, usize) -> Result<KTerm>,
) -> Result<TOperator> {
    let mut op = TOperator::zero(p.order, p.max_weight);
    for i in 0..p.r {
        let c = outer(i)?;
        for k in 1..=p.order {
            let (s, b_idx, d_idx) = inner(i, k)?;
            if d_idx > p.order {
                continue;
            }
            let b = bell.get(b_idx)?;
            if b.is_zero() {
                continue;
            }
            let term = TOperator::derivative(p.order, p.max_weight, d_idx)?.premultiply(&b.scale(&(&c * s)))?;
            op = op.try_add(&term)?;
        }
    }
    Ok(op)
}

/// The constraint operator in the requested written form.
pub fn toy_display(d: &Deformation, p: &ToyParams, which: ToyDisplay) -> Result<TOperator> {
    p.validate()?;
    let ds = d.scaled(p.a);
    let a = p.a as i64;
    let (m, r, n0) = (p.m, p.r, p.degree());
    let bell = Bell::new(p)?;
    let binom = |i: usize| d.binomial((r - 1) as i64, i as i64);
    let rest = |i: usize| r - 1 - i;
    let std_outer = |i: usize| -> Result<Scalar> {
        Ok(binom(i)? * ds.falling(n0, i as i64)? * powi(d.q(), a * rest(i) as i64 * n0))
    };
    let p_pow = |i: usize, k: usize| powi(d.p(), a * (i * k) as i64);
    let fact = |n: usize| factorial(n as u64);
    match which {
        ToyDisplay::General => assemble(p, &bell, std_outer, |i, k| {
            let b = rest(i);
            let idx = m + k * b;
            Ok((p_pow(i, k) * fact(idx) / fact(k) * ds.falling(k as i64, b as i64)?, k * b, idx))
        }),
        ToyDisplay::ExampleR2 => {
            if r != 2 {
                return Err(Error::ConfigInvalid("example (a) is the rank-2 operator".into()));
            }
            let first = assemble(
                p,
                &bell,
                |i| Ok(if i == 0 { powi(d.q(), a * n0) } else { zero() }),
                |_, k| Ok((fact(m + k) / fact(k) * ds.falling(k as i64, 1)?, k, m + k)),
            )?;
            let tail: Scalar = (1..=p.order).map(|k| powi(d.p(), a * k as i64)).sum();
            let second = TOperator::derivative(p.order, p.max_weight, m)?
                .scale(&(d.number(n0)? * fact(m) * tail));
            first.try_add(&second)
        }
        ToyDisplay::ExampleR3 | ToyDisplay::ExampleR4 => {
            let (rank, bell_scaled) = if which == ToyDisplay::ExampleR3 { (3, false) } else { (4, true) };
            if r != rank {
                return Err(Error::ConfigInvalid(format!("this example is the rank-{rank} operator")));
            }
            assemble(p, &bell, std_outer, |i, k| {
                let b = rest(i);
                let idx = m + k * b;
                let b_idx = if bell_scaled { k * b } else { k };
                Ok((p_pow(i, k) * fact(idx) / fact(k * b) * ds.falling(k as i64, b as i64)?, b_idx, idx))
            })
        }
        ToyDisplay::QRemark | ToyDisplay::PqRemark => {
            let with_p = which == ToyDisplay::PqRemark;
            assemble(p, &bell, std_outer, |i, k| {
                let c = if with_p { p_pow(i, k) } else { one() };
                Ok((c * fact(m + k) / fact(k) * ds.falling(k as i64, rest(i) as i64)?, k, m + k))
            })
        }
    }
}

pub fn make_toy_operator(d: &Deformation, p: &ToyParams) -> Result<TOperator> {
    toy_display(d, p, ToyDisplay::General)
}

/// Polynomial in `x` with series coefficients.
type XSeries = BTreeMap<i64, TSeries>;

fn x_push(f: &mut XSeries, n: i64, c: TSeries) {
    let next = match f.remove(&n) {
        Some(prev) => &prev + &c,
        None => c,
    };
    if !next.is_zero() {
        f.insert(n, next);
    }
}

/// `f(c x)`; on `x^n E` this is the substitution `t_s -> c^s t_s`.
fn dilate(f: &XSeries, c: &Scalar) -> XSeries {
    f.iter().map(|(n, s)| (*n, s.scale(&powi(c, *n)))).collect()
}

/// The scaled deformed derivative as a difference quotient.
fn deformed_derivative(d: &Deformation, a: u32, f: &XSeries) -> Result<XSeries> {
    let (pa, qa) = (powi(d.p(), a as i64), powi(d.q(), a as i64));
    let up = dilate(f, &pa);
    let down = dilate(f, &qa);
    let den = (&pa - &qa).recip();
    let mut out = XSeries::new();
    for (n, s) in up {
        let mut c = &s - &down[&n];
        if c.is_zero() {
            continue;
        }
        if !d.is_builtin() {
            c = c.scale(&d.k_eigenvalue(n)?);
        }
        x_push(&mut out, n - 1, c.scale(&den));
    }
    Ok(out)
}

/// Coefficients `c_j(t)` of `-D^{r-1}(x^{m+gamma+r-1} E) = sum_j c_j x^{gamma+j} E`.
pub fn xspace_expansion(d: &Deformation, p: &ToyParams) -> Result<MomentExpr> {
    p.validate()?;
    let bell = Bell::new(p)?;
    let top = p.order.min(p.max_weight);
    let mut f = XSeries::new();
    for k in 0..=top {
        x_push(&mut f, p.degree() + k as i64, bell.get(k)?.scale(&factorial(k as u64).recip()));
    }
    for _ in 1..p.r {
        f = deformed_derivative(d, p.a, &f)?;
    }
    let negated = vec![-one(); p.order];
    let mut out = MomentExpr::zero();
    for k in 0..=top {
        let inv = bell.get(k)?.rescale_times(&negated).scale(&factorial(k as u64).recip());
        for (n, c) in &f {
            let j = n + k as i64 - p.gamma as i64;
            if j < 0 {
                return Err(Error::TruncationOverflow { index: j, order: p.order });
            }
            let term = c.try_mul(&inv)?.scale(&-one());
            if !term.is_zero() {
                out.push(j as usize, term);
            }
        }
    }
    Ok(out)
}

fn z_toy(p: &ToyParams) -> MomentExpr {
    MomentExpr::moment(0, TSeries::constant(p.order, p.max_weight, one()))
}

fn proportional(id: &str, ps: &str, got: &MomentExpr, oracle: &MomentExpr) -> CheckOutcome {
    match got.proportional_to(oracle) {
        Ok(c) => CheckOutcome::pass(id, ps).with_note(format!("t-space = {} x x-space", format(&c))),
        Err(w) => {
            let n = got.mismatches(oracle).len();
            CheckOutcome::fail(id, ps, Some(w)).with_note(format!(
                "{n} of {} (j, t-monomial) coefficients differ from the oracle",
                got.mismatches(&MomentExpr::zero()).len().max(oracle.mismatches(&MomentExpr::zero()).len())
            ))
        }
    }
}

/// The full comparison and its `t = 0` slice.
pub fn verify_toy_duality(d: &Deformation, p: &ToyParams) -> (CheckOutcome, CheckOutcome) {
    let ps = p.label();
    let body = || -> Result<(MomentExpr, MomentExpr)> {
        let op = make_toy_operator(d, p)?;
        Ok((op.apply_moments(&z_toy(p))?, xspace_expansion(d, p)?))
    };
    match body() {
        Ok((t_side, x_side)) => {
            let mut full = proportional("conf.toy_duality", &ps, &t_side, &x_side);
            let mut origin = proportional("conf.toy_duality_origin", &ps, &t_side.at_origin(), &x_side.at_origin());
            if p.r == 1 {
                full = full.with_note("degenerate rank 1: no derivative applied");
                origin = origin.with_note("degenerate rank 1: no derivative applied");
            }
            (full, origin)
        }
        Err(e) => (
            CheckOutcome::skipped("conf.toy_duality", ps.clone(), &e),
            CheckOutcome::skipped("conf.toy_duality_origin", ps, &e),
        ),
    }
}

/// The expanded integrand, read with `(k(r-1-i))!` in the denominator, against the oracle.
pub fn verify_toy_integrand(d: &Deformation, p: &ToyParams) -> CheckOutcome {
    let id = "conf.toy_integrand";
    let ps = p.label();
    let body = || -> Result<CheckOutcome> {
        p.validate()?;
        let ds = d.scaled(p.a);
        let a = p.a as i64;
        let bell = Bell::new(p)?;
        let n0 = p.degree();
        let mut display = MomentExpr::zero();
        for i in 0..p.r {
            let b = p.r - 1 - i;
            let outer = d.binomial((p.r - 1) as i64, i as i64)? * ds.falling(n0, i as i64)? * powi(d.q(), a * (b as i64) * n0);
            for k in 1..=p.order {
                let c = &outer * powi(d.p(), a * (i * k) as i64) / factorial((k * b) as u64) * ds.falling(k as i64, b as i64)?;
                let series = bell.get(k * b)?.scale(&c);
                if !series.is_zero() {
                    display.push(p.m + k * b, series);
                }
            }
        }
        let oracle = xspace_expansion(d, p)?.scale(&-one());
        Ok(CheckOutcome::from_comparison(id, ps.clone(), Ok(display.compare(&oracle))))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

fn compare_displays(id: &str, ps: String, general: Result<TOperator>, display: Result<TOperator>) -> CheckOutcome {
    let body = || -> Result<CheckOutcome> {
        let (g, s) = (general?, display?);
        let out = CheckOutcome::from_comparison(id, ps.clone(), Ok(s.compare(&g)));
        Ok(if out.passed() {
            out
        } else {
            out.with_note(format!("{} mismatched terms", s.mismatches(&g).len()))
        })
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

/// The three worked examples and the q and (p,q) remark forms against the general operator.
pub fn verify_toy_displays(d: &Deformation, p: &ToyParams) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for (r, which) in [(2, ToyDisplay::ExampleR2), (3, ToyDisplay::ExampleR3), (4, ToyDisplay::ExampleR4)] {
        let pr = p.with_rank(r);
        out.push(compare_displays(
            &format!("conf.toy_example_r{r}"),
            pr.label(),
            make_toy_operator(d, &pr),
            toy_display(d, &pr, which),
        ));
    }
    let specializations = [
        ("conf.toy_q_remark", Deformation::one_parameter(d.q().clone()), ToyDisplay::QRemark),
        ("conf.toy_pq_remark", Deformation::two_parameter(d.p().clone(), d.q().clone()), ToyDisplay::PqRemark),
    ];
    for (id, family, which) in specializations {
        let outcome = match family {
            Ok(f) => compare_displays(id, p.label(), make_toy_operator(&f, p), toy_display(&f, p, which)),
            Err(e) => CheckOutcome::skipped(id, p.label(), &e),
        };
        out.push(outcome);
    }
    out
}

/// `-D^{r-1} x^{m+r-1}` on `1` is `-A^{r-1}_{m+r-1} x^m`, and the operator equals the
/// ordered product `T_{m+r-2} ... T_m` with `T_k = -D x^{k+1}`.
pub fn verify_toy_operator_forms(d: &Deformation, a: u32, m: i64, r: i64, window: i64) -> CheckOutcome {
    let id = "conf.toy_operators";
    let ps = params(&[("a", a.to_string()), ("m", m.to_string()), ("r", r.to_string())]);
    let body = || -> Result<CheckOutcome> {
        let s = Single::new(d.scaled(a), window);
        let dpow = |k: i64| -> Result<GradedOperator> {
            let mut acc = GradedOperator::identity(GradedOperator::window(window));
            for _ in 0..k {
                acc = s.derivative()?.compose(&acc)?;
            }
            Ok(acc)
        };
        let w = dpow(r - 1)?.compose(&s.multiply(m + r - 1)?)?.scale(&-one());
        let on_one = w.restrict(|n| *n == 0);
        let expected_one = GradedOperator::from_action([0], |_| Ok(vec![(m, -s.d.falling(m + r - 1, r - 1)?)]))?;
        let mut product = GradedOperator::identity(GradedOperator::window(window));
        for i in (1..r).rev() {
            let k = m + r - i - 1;
            let t = s.derivative()?.compose(&s.multiply(k + 1)?)?.scale(&-one());
            product = t.compose(&product)?;
        }
        let parts = vec![
            ("acting on 1".to_string(), on_one.compare(&expected_one)),
            ("product of T".to_string(), product.compare(&w)),
        ];
        Ok(merge(id, ps.clone(), parts))
    };
    CheckOutcome::from_result(id, ps.clone(), body())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn pq() -> Deformation {
        Deformation::two_parameter(ratio(2, 3), ratio(1, 5)).unwrap()
    }

    fn toy(r: usize, m: usize, gamma: usize, a: u32) -> ToyParams {
        ToyParams {
            a,
            gamma,
            m,
            r,
            order: 6,
            max_weight: 6,
        }
    }

    #[test]
    fn rank_one_is_minus_the_moment() {
        let x = xspace_expansion(&pq(), &toy(1, 2, 1, 1)).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert_eq!(x.coefficient(2).unwrap().constant_term(), int(-1));
    }

    #[test]
    fn origin_slice_is_the_falling_factorial() {
        let d = pq();
        let p = toy(3, 1, 1, 2);
        let x = xspace_expansion(&d, &p).unwrap().at_origin();
        let expected = -d.scaled(2).falling(4, 2).unwrap();
        assert_eq!(x.terms().len(), 1);
        assert_eq!(x.coefficient(1).unwrap().constant_term(), expected);
    }

    #[test]
    fn xspace_first_order_by_hand() {
        // r = 2, gamma = 0, m = 0, a = 1: -D(x E)/E up to weight 1.
        // D(x E) = sum_n [n+1] B_n/n! x^n, times 1/E = 1 - t1 x + ...
        // coefficient of x^1: [2] t1 - t1 = ([2] - 1) t1
        let d = pq();
        let p = ToyParams {
            max_weight: 1,
            order: 1,
            ..toy(2, 0, 0, 1)
        };
        let x = xspace_expansion(&d, &p).unwrap();
        assert_eq!(x.coefficient(0).unwrap().constant_term(), -d.number(1).unwrap());
        let c1 = x.coefficient(1).unwrap().coefficient_of(&[1]);
        assert_eq!(c1, -(d.number(2).unwrap() - one()));
    }

    #[test]
    fn duality_completes_and_origin_passes() {
        let d = pq();
        for r in 1..=3 {
            for m in 0..=2 {
                let (full, origin) = verify_toy_duality(&d, &toy(r, m, 1, 1));
                assert!(origin.passed(), "{origin:?}");
                assert_ne!(full.status, crate::check::Status::Skipped);
            }
        }
    }

    #[test]
    fn general_operator_rank_two_terms() {
        let d = pq();
        let p = toy(2, 1, 0, 1);
        let op = make_toy_operator(&d, &p).unwrap();
        // k = 1, i = 0: q^{a(m+1)} (m+1)!/1! B_1 [1] d/dt_{m+1}
        let c = op.terms().get(&vec![2]).unwrap().coefficient_of(&[1, 0, 0, 0, 0, 0]);
        assert_eq!(c, powi(d.q(), 2) * int(2));
    }
}
