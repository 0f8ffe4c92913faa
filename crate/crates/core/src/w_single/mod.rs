//! Single-variable operator families and the checks of their displayed algebras.

mod central;
mod forced;
mod identities;
mod leading;
mod three;

pub use central::{central_c, central_f, central_term_g, verify_central_normalization, verify_central_skew, verify_cocycle, verify_virasoro_central};
pub use forced::{
    verify_abelian_rank_one, verify_antisymmetry, verify_associativity, verify_calw_agreement, verify_deformed_numbers, verify_fock,
    verify_jacobi, verify_nambu_forms,
};
pub use identities::{
    verify_derivative, verify_gji_prefactor, verify_leibniz, verify_n_algebra, verify_pair_commutator, verify_pair_remark,
    verify_sub2n_closure, verify_sub4_example, Sub2nReport,
};
pub use leading::{derivative_profile, DerivativeProfile};
pub use three::{
    verify_3algebra, verify_4algebra_w3, verify_bremner, verify_calw_leading, verify_filippov,
    verify_first_commutators_calw, verify_hat_3algebra, verify_l_null, verify_multibracket,
    verify_structure_functions, verify_virasoro_witt, verify_virasoro_witt_3algebra,
};

use num_traits::Zero;

use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::operator::GradedOperator;
use crate::scalar::{self, one, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fock {
    A,
    Adag,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalWMode {
    Recursive,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatKind {
    F,
    R,
}

/// A deformation together with the window on which operators are tabulated.
#[derive(Debug, Clone)]
pub struct Single {
    pub d: Deformation,
    pub window: i64,
}

/// One image entry: target mode and coefficient.
type Entry = Option<(i64, Scalar)>;

impl Single {
    pub fn new(d: Deformation, window: i64) -> Self {
        Single { d, window }
    }

    /// Builds `z^n -> c z^t` for every mode where `f` yields an entry.
    pub fn graded(&self, mut f: impl FnMut(i64) -> Result<Entry>) -> Result<GradedOperator> {
        let mut domain = Vec::new();
        let mut images = Vec::new();
        for n in GradedOperator::window(self.window) {
            if let Some(e) = f(n)? {
                domain.push(n);
                images.push(e);
            }
        }
        if domain.is_empty() {
            return Err(Error::WindowExhausted);
        }
        let mut it = images.into_iter();
        GradedOperator::from_action(domain, |_| Ok(vec![it.next().expect("one image per mode")]))
    }

    pub fn multiply(&self, m: i64) -> Result<GradedOperator> {
        self.graded(|n| Ok(Some((n + m, one()))))
    }

    pub fn derivative(&self) -> Result<GradedOperator> {
        self.x_d(0, 1)
    }

    /// `x^a D^b`. A negative `b` is the inverse derivative; it is left undefined on
    /// the kernel of `D` and where a factor vanishes, so that it commutes with `D`.
    pub fn x_d(&self, a: i64, b: i64) -> Result<GradedOperator> {
        self.graded(|n| {
            if b >= 0 {
                return Ok(Some((n - b + a, self.d.falling(n, b)?)));
            }
            if self.d.number(n)?.is_zero() {
                return Ok(None);
            }
            let mut den = one();
            for i in 1..=-b {
                den *= self.d.number(n + i)?;
            }
            if den.is_zero() {
                return Ok(None);
            }
            Ok(Some((n - b + a, den.recip())))
        })
    }

    pub fn fock(&self, which: Fock) -> Result<GradedOperator> {
        match which {
            Fock::A => self.derivative(),
            Fock::Adag => self.multiply(1),
            Fock::N => self.graded(|n| Ok(Some((n, scalar::int(n))))),
        }
    }

    /// The diagonal operator `[N + shift]`.
    pub fn number_operator(&self, shift: i64) -> Result<GradedOperator> {
        self.graded(|n| Ok(Some((n, self.d.number(n + shift)?))))
    }

    /// `W^r_m = z^{m+r-1} D^{r-1}`.
    pub fn w(&self, m: i64, r: i64) -> Result<GradedOperator> {
        assert!(r >= 1, "rank must be positive");
        self.x_d(m + r - 1, r - 1)
    }

    pub fn calw(&self, m: i64, s: i64, mode: CalWMode) -> Result<GradedOperator> {
        assert!(s >= 1, "rank must be positive");
        match mode {
            CalWMode::Closed => self.calw_closed(m, s),
            CalWMode::Recursive => {
                for j in 2..=s {
                    if m + 2 * s - j == 0 {
                        return Err(Error::DegenerateRecursion { m: m + 2 * (s - j), s: j });
                    }
                }
                self.calw_recursive(m, s)
            }
        }
    }

    fn calw_recursive(&self, m: i64, s: i64) -> Result<GradedOperator> {
        if s == 1 {
            return Ok(self.x_d(0, m)?.scale(&-one()));
        }
        let inner = self.calw_recursive(m + 2, s - 1)?;
        let c = self.multiply(2)?.commutator(&inner)?;
        Ok(c.scale(&scalar::ratio(1, 2 * (m + s))))
    }

    /// `(-1)^s sum_k C^k_{s-1} A^k_{m+s-1} / 2^k x^{s-1-k} D^{m+s-1-k}`.
    fn calw_closed(&self, m: i64, s: i64) -> Result<GradedOperator> {
        let mut terms = Vec::new();
        for k in 0..s {
            let c = self.d.binomial(s - 1, k)? * self.d.falling(m + s - 1, k)? / scalar::int(1 << k);
            if c.is_zero() {
                continue;
            }
            terms.push((c * scalar::sign(s % 2 == 0), self.x_d(s - 1 - k, m + s - 1 - k)?));
        }
        combine(self.window, terms)
    }

    /// `L_m = -x^{m+1} D`.
    pub fn l(&self, m: i64) -> Result<GradedOperator> {
        Ok(self.x_d(m + 1, 1)?.scale(&-one()))
    }

    /// `F_m = calW^2_m + nu m calW^1_m`.
    pub fn f(&self, m: i64, nu: &Scalar) -> Result<GradedOperator> {
        let w2 = self.calw(m, 2, CalWMode::Closed)?;
        let w1 = self.calw(m, 1, CalWMode::Closed)?;
        GradedOperator::linear_combination(&[(one(), &w2), (nu * scalar::int(m), &w1)])
    }

    pub fn r(&self, m: i64) -> Result<GradedOperator> {
        self.calw(m, 1, CalWMode::Closed)
    }

    /// `hat F_m = -c^{-1} F_m`, `hat R_m = c R_m` with `c^4 = 1/4 - nu^2`.
    pub fn hat(&self, m: i64, nu: &Scalar, which: HatKind) -> Result<Scaled> {
        let root = QuarticRoot::new(scalar::ratio(1, 4) - nu * nu)?;
        Ok(match which {
            HatKind::F => Scaled {
                coefficient: -one(),
                power: -1,
                root,
                op: self.f(m, nu)?,
            },
            HatKind::R => Scaled {
                coefficient: one(),
                power: 1,
                root,
                op: self.r(m)?,
            },
        })
    }
}

/// Sum of scaled operators; an empty sum is the zero operator on the window.
pub fn combine(window: i64, terms: Vec<(Scalar, GradedOperator)>) -> Result<GradedOperator> {
    if terms.is_empty() {
        return Ok(GradedOperator::zero(GradedOperator::window(window)));
    }
    let refs: Vec<(Scalar, &GradedOperator)> = terms.iter().map(|(c, o)| (c.clone(), o)).collect();
    GradedOperator::linear_combination(&refs)
}

/// Multiplies each entry by the eigenvalue of `K(P,Q)` at its target mode.
pub fn apply_k(d: &Deformation, op: &GradedOperator) -> Result<GradedOperator> {
    if d.is_builtin() {
        return Ok(op.clone());
    }
    op.try_map_entries(|_, t, c| Ok(c * d.k_eigenvalue(*t)?))
}

/// The positive real `c` with `c^4 = v`, handled through exact arithmetic in `Q(c)`.
///
/// `1, c, c^2, c^3` are independent over the rationals unless `v` is a square, in
/// which case `c^2` is rational and only `1, c` remain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticRoot {
    pub radicand: Scalar,
    /// Rational value of `c` when one exists.
    pub exact: Option<Scalar>,
    /// Rational value of `c^2` when one exists.
    pub square: Option<Scalar>,
}

impl QuarticRoot {
    pub fn new(radicand: Scalar) -> Result<Self> {
        if radicand <= Scalar::zero() {
            return Err(Error::ScaleNotRepresentable(scalar::format(&radicand)));
        }
        let square = rational_sqrt(&radicand);
        let exact = square.as_ref().and_then(rational_sqrt);
        Ok(QuarticRoot {
            radicand,
            exact,
            square,
        })
    }

    /// Number of independent powers of `c` over the rationals.
    pub fn degree(&self) -> i64 {
        match (&self.exact, &self.square) {
            (Some(_), _) => 1,
            (None, Some(_)) => 2,
            _ => 4,
        }
    }

    /// Writes `coefficient * c^power` as `(rational, r)` meaning `rational * c^r`, `0 <= r < degree`.
    pub fn reduce(&self, coefficient: &Scalar, power: i64) -> (Scalar, i64) {
        let deg = self.degree();
        let r = power.rem_euclid(deg);
        let lifts = (power - r) / deg;
        let base = match deg {
            1 => self.exact.clone().expect("rational root"),
            2 => self.square.clone().expect("rational square"),
            _ => self.radicand.clone(),
        };
        (coefficient * scalar::powi(&base, lifts), r)
    }

    pub fn value(&self) -> Result<Scalar> {
        self.exact
            .clone()
            .ok_or_else(|| Error::ScaleNotRepresentable(scalar::format(&self.radicand)))
    }
}

fn rational_sqrt(x: &Scalar) -> Option<Scalar> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Scalar::new(n, d))
}

/// `coefficient * c^power * op`.
#[derive(Debug, Clone)]
pub struct Scaled {
    pub coefficient: Scalar,
    pub power: i64,
    pub root: QuarticRoot,
    pub op: GradedOperator,
}

impl Scaled {
    /// The operator with `c` substituted; only possible when `c` is rational.
    pub fn to_exact(&self) -> Result<GradedOperator> {
        Ok(self
            .op
            .scale(&(&self.coefficient * scalar::powi(&self.root.value()?, self.power))))
    }
}

/// A sum `sum_r c^r O_r` with rational operators `O_r`.
pub fn graded_by_root(window: i64, root: &QuarticRoot, terms: Vec<(Scalar, i64, GradedOperator)>) -> Result<Vec<GradedOperator>> {
    let mut buckets: Vec<Vec<(Scalar, GradedOperator)>> = vec![Vec::new(); root.degree() as usize];
    for (c, power, op) in terms {
        let (c, r) = root.reduce(&c, power);
        buckets[r as usize].push((c, op));
    }
    buckets.into_iter().map(|b| combine(window, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn single() -> Single {
        Single::new(Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap(), 8)
    }

    #[test]
    fn w_operator_actions() {
        let s = single();
        let w20 = s.w(0, 2).unwrap();
        for n in -8..=8 {
            let img = w20.image(&n).unwrap();
            assert_eq!(img.get(&n).cloned().unwrap_or_default(), s.d.number(n).unwrap());
        }
        assert!(w20.image(&0).unwrap().is_empty());
        let w13 = s.w(3, 1).unwrap();
        assert_eq!(w13.image(&2).unwrap().get(&5), Some(&one()));
    }

    #[test]
    fn inverse_derivative_avoids_poles() {
        let s = single();
        let inv = s.x_d(0, -2).unwrap();
        assert!(inv.image(&-1).is_none() && inv.image(&-2).is_none() && inv.image(&0).is_none());
        let id = s.derivative().unwrap().compose(&s.derivative().unwrap()).unwrap().compose(&inv).unwrap();
        for n in id.domain() {
            assert_eq!(id.image(n).unwrap().get(n), Some(&one()));
        }
    }

    #[test]
    fn closed_calw_low_ranks() {
        let s = single();
        let w1 = s.calw(2, 1, CalWMode::Closed).unwrap();
        let d2 = s.x_d(0, 2).unwrap().scale(&-one());
        assert!(w1.compare(&d2).unwrap().is_equal());
        // calW^2_m = x D^{m+1} + [m+1]/2 D^m
        let m = 1;
        let w2 = s.calw(m, 2, CalWMode::Closed).unwrap();
        let half = s.d.number(m + 1).unwrap() / scalar::int(2);
        let expected = combine(8, vec![(one(), s.x_d(1, m + 1).unwrap()), (half, s.x_d(0, m).unwrap())]).unwrap();
        assert!(w2.compare(&expected).unwrap().is_equal());
        assert!(matches!(
            s.calw(-2, 2, CalWMode::Recursive),
            Err(Error::DegenerateRecursion { .. })
        ));
    }

    #[test]
    fn quartic_roots() {
        let r = QuarticRoot::new(ratio(1, 16)).unwrap();
        assert_eq!(r.value().unwrap(), ratio(1, 2));
        let r = QuarticRoot::new(ratio(1, 4)).unwrap();
        assert_eq!(r.degree(), 2);
        assert_eq!(r.reduce(&one(), 3), (ratio(1, 2), 1));
        let r = QuarticRoot::new(ratio(5, 36)).unwrap();
        assert_eq!(r.degree(), 4);
        assert_eq!(r.reduce(&one(), -1), (ratio(36, 5), 3));
        assert!(matches!(r.value(), Err(Error::ScaleNotRepresentable(_))));
        assert!(matches!(single().hat(0, &ratio(1, 2), HatKind::F), Err(Error::ScaleNotRepresentable(_))));
    }
}
