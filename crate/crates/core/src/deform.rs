//! Deformation families and the scalar quantities built from them.
//!
//! `[n] = R(p^n, q^n)`. The two built-in families have closed forms
//! `(p^n - q^n)/(p - q)` and `(1 - q^n)/(1 - q)`; a custom family is a finite
//! table of coefficients `r_st` summed as `R(u, v) = sum r_st u^s v^t`.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::{self, one, powi, zero, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    /// Largest negative index allowed for `s` and `t`.
    pub l: i64,
    pub terms: Vec<(i64, i64, Scalar)>,
}

#[derive(Deserialize)]
struct RawTable {
    l: i64,
    terms: Vec<(i64, i64, String)>,
}

impl CoefficientTable {
    /// Parses `{"l": 1, "terms": [[1, 0, "6/1"], [0, 1, "-6/1"]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawTable =
            serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        let terms = raw
            .terms
            .into_iter()
            .map(|(s, t, r)| {
                scalar::parse(&r)
                    .map(|r| (s, t, r))
                    .map_err(|e| Error::ConfigInvalid(e.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(CoefficientTable { l: raw.l, terms })
    }

    fn max_index(&self) -> i64 {
        self.terms
            .iter()
            .map(|(s, t, _)| (*s).max(*t))
            .max()
            .unwrap_or(0)
    }

    /// Evaluating at negative `n` maps `p^n` outside the unit bidisk; only a table
    /// whose index range is closed under negation is accepted there.
    fn closed_under_negation(&self) -> bool {
        self.l >= self.max_index()
    }

    fn eval(&self, u: &Scalar, v: &Scalar) -> Scalar {
        self.terms
            .iter()
            .map(|(s, t, r)| r * powi(u, *s) * powi(v, *t))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    TwoParameter,
    OneParameterQ,
    Custom(CoefficientTable),
}

impl Family {
    pub fn is_builtin(&self) -> bool {
        !matches!(self, Family::Custom(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::TwoParameter => "pq",
            Family::OneParameterQ => "q",
            Family::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deformation {
    family: Family,
    p: Scalar,
    q: Scalar,
    scale: u32,
}

impl Deformation {
    pub fn new(family: Family, p: Scalar, q: Scalar) -> Result<Self> {
        let p = if family == Family::OneParameterQ { one() } else { p };
        if !(q > zero() && q < p && p <= one()) {
            return Err(Error::ParameterOrdering {
                p: scalar::format(&p),
                q: scalar::format(&q),
            });
        }
        if let Family::Custom(table) = &family {
            if table.l < 0 || table.terms.iter().any(|(s, t, _)| *s < -table.l || *t < -table.l) {
                return Err(Error::ConfigInvalid(
                    "custom table index below -l".to_string(),
                ));
            }
        }
        let d = Deformation {
            family,
            p,
            q,
            scale: 1,
        };
        let at_zero = d.number(0)?;
        if at_zero != zero() {
            return Err(Error::NotNormalized(scalar::format(&at_zero)));
        }
        Ok(d)
    }

    pub fn two_parameter(p: Scalar, q: Scalar) -> Result<Self> {
        Self::new(Family::TwoParameter, p, q)
    }

    pub fn one_parameter(q: Scalar) -> Result<Self> {
        Self::new(Family::OneParameterQ, one(), q)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn p(&self) -> &Scalar {
        &self.p
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_builtin(&self) -> bool {
        self.family.is_builtin()
    }

    /// Same family read at `p^a, q^a`.
    pub fn scaled(&self, a: u32) -> Self {
        assert!(a >= 1, "scaling exponent must be positive");
        Deformation {
            scale: self.scale * a,
            ..self.clone()
        }
    }

    fn scaled_p(&self) -> Scalar {
        powi(&self.p, self.scale as i64)
    }

    fn scaled_q(&self) -> Scalar {
        powi(&self.q, self.scale as i64)
    }

    fn base_number(&self, n: i64) -> Result<Scalar> {
        let (p, q) = (&self.p, &self.q);
        Ok(match &self.family {
            Family::TwoParameter => (powi(p, n) - powi(q, n)) / (p - q),
            Family::OneParameterQ => (one() - powi(q, n)) / (one() - q),
            Family::Custom(table) => {
                if n < 0 && !table.closed_under_negation() {
                    return Err(Error::UnsupportedExponent(n));
                }
                table.eval(&powi(p, n), &powi(q, n))
            }
        })
    }

    /// `R(u, v)` at arbitrary arguments; the q-family reads as `(u - v)/(1 - q)`.
    pub fn meromorphic(&self, u: &Scalar, v: &Scalar) -> Result<Scalar> {
        Ok(match &self.family {
            Family::TwoParameter => (u - v) / (&self.p - &self.q),
            Family::OneParameterQ => (u - v) / (one() - &self.q),
            Family::Custom(table) => {
                let singular = table.terms.iter().any(|(s, t, _)| {
                    (*s < 0 && num_traits::Zero::is_zero(u)) || (*t < 0 && num_traits::Zero::is_zero(v))
                });
                if singular {
                    return Err(Error::PoleHit(0));
                }
                table.eval(u, v)
            }
        })
    }

    /// The deformed number `[n]`.
    pub fn number(&self, n: i64) -> Result<Scalar> {
        if self.scale == 1 {
            return self.base_number(n);
        }
        let (pa, qa) = (self.scaled_p(), self.scaled_q());
        let core = (powi(&pa, n) - powi(&qa, n)) / (&pa - &qa);
        if self.is_builtin() || n == 0 {
            return Ok(core);
        }
        Ok(self.k_eigenvalue(n)? * core)
    }

    pub fn factorial(&self, n: i64) -> Result<Scalar> {
        if n < 0 {
            return Err(Error::NegativeArgument(n));
        }
        let mut acc = one();
        for k in 1..=n {
            acc *= self.number(k)?;
        }
        Ok(acc)
    }

    pub fn binomial(&self, n: i64, k: i64) -> Result<Scalar> {
        if k < 0 || n < 0 || k > n {
            return Err(Error::IndexOrder { n, k });
        }
        let den = self.factorial(k)? * self.factorial(n - k)?;
        if den == zero() {
            return Err(Error::DivisionByZeroMode(k));
        }
        Ok(self.factorial(n)? / den)
    }

    /// `[n][n-1]...[n-k+1]`; vanishes automatically when `0 <= n < k`.
    pub fn falling(&self, n: i64, k: i64) -> Result<Scalar> {
        if k < 0 {
            return Err(Error::NegativeArgument(k));
        }
        let mut acc = one();
        for i in 0..k {
            acc *= self.number(n - i)?;
        }
        Ok(acc)
    }

    /// Diagonal value of `K(P,Q) = (p-q) R(p^P, q^Q)/(p^P - q^Q)` on `z^n`, at the unscaled parameters.
    pub fn k_eigenvalue(&self, n: i64) -> Result<Scalar> {
        if self.is_builtin() {
            return Ok(one());
        }
        if n == 0 {
            return Err(Error::IndeterminateAtZero);
        }
        let (p, q) = (&self.p, &self.q);
        let den = powi(p, n) - powi(q, n);
        Ok((p - q) * self.base_number(n)? / den)
    }

    /// `(1/2 [-2M]/[-M])^alpha` with `alpha = 1` for even arity and 0 for odd.
    pub fn bracket_prefactor(&self, mode_sum: i64, arity: usize) -> Result<Scalar> {
        assert!(arity >= 2, "bracket arity must be at least 2");
        if arity % 2 == 1 {
            return Ok(one());
        }
        if mode_sum == 0 {
            return if self.is_builtin() {
                Ok(one())
            } else {
                Err(Error::IndeterminateAtZero)
            };
        }
        let den = self.number(-mode_sum)?;
        if den == zero() {
            return Err(Error::DivisionByZeroMode(-mode_sum));
        }
        Ok(self.number(-2 * mode_sum)? / (scalar::int(2) * den))
    }

    /// `prod_{j<k} ([m_k + offset] - [m_j + offset])`.
    pub fn vandermonde(&self, modes: &[i64], offset: i64) -> Result<Scalar> {
        let nums = modes
            .iter()
            .map(|m| self.number(m + offset))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = one();
        for k in 0..nums.len() {
            for j in 0..k {
                acc *= &nums[k] - &nums[j];
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn pq() -> Deformation {
        Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap()
    }

    #[test]
    fn construction_and_ordering() {
        assert!(pq().is_builtin());
        let q = Deformation::one_parameter(ratio(1, 3)).unwrap();
        assert_eq!(q.p(), &one());
        assert!(matches!(
            Deformation::two_parameter(ratio(1, 3), ratio(1, 2)),
            Err(Error::ParameterOrdering { .. })
        ));
    }

    #[test]
    fn hand_values() {
        let d = pq();
        assert_eq!(d.number(0).unwrap(), zero());
        assert_eq!(d.number(2).unwrap(), ratio(5, 6));
        assert_eq!(d.factorial(0).unwrap(), one());
        assert_eq!(d.factorial(2).unwrap(), ratio(5, 6));
        assert_eq!(d.binomial(2, 1).unwrap(), ratio(5, 6));
        assert_eq!(d.falling(2, 2).unwrap(), ratio(5, 6));
        assert_eq!(d.falling(1, 3).unwrap(), zero());
        assert_eq!(d.falling(5, 0).unwrap(), one());
        assert_eq!(d.bracket_prefactor(1, 2).unwrap(), ratio(5, 2));
        assert_eq!(d.bracket_prefactor(0, 2).unwrap(), one());
        assert_eq!(d.bracket_prefactor(7, 3).unwrap(), one());
        assert_eq!(d.vandermonde(&[0, 1], 0).unwrap(), one());
        assert_eq!(d.vandermonde(&[3], 0).unwrap(), one());
        assert!(matches!(d.binomial(1, 2), Err(Error::IndexOrder { .. })));
        assert!(matches!(d.factorial(-1), Err(Error::NegativeArgument(-1))));
        let q = Deformation::one_parameter(ratio(1, 3)).unwrap();
        assert_eq!(q.number(3).unwrap(), ratio(13, 9));
        assert_eq!(q.scaled(2).number(2).unwrap(), ratio(10, 9));
        assert_eq!(d.scaled(2).number(1).unwrap(), one());
        assert_eq!(d.scaled(1), d);
    }

    fn custom_pq_table() -> CoefficientTable {
        // (u - v)/(p - q) at p = 1/2, q = 1/3 is 6u - 6v.
        CoefficientTable {
            l: 1,
            terms: vec![(1, 0, int(6)), (0, 1, int(-6))],
        }
    }

    #[test]
    fn custom_family_matches_builtin_and_errors_at_zero() {
        let c = Deformation::new(Family::Custom(custom_pq_table()), ratio(1, 2), ratio(1, 3)).unwrap();
        let d = pq();
        for n in -5..=5 {
            assert_eq!(c.number(n).unwrap(), d.number(n).unwrap());
        }
        assert_eq!(c.k_eigenvalue(3).unwrap(), one());
        assert_eq!(c.k_eigenvalue(0), Err(Error::IndeterminateAtZero));
        assert_eq!(c.bracket_prefactor(0, 2), Err(Error::IndeterminateAtZero));
        let power_series = CoefficientTable {
            l: 0,
            terms: vec![(1, 0, int(6)), (0, 1, int(-6))],
        };
        let parsed = CoefficientTable::from_json(r#"{"l": 1, "terms": [[1, 0, "6"], [0, 1, "-6/1"]]}"#).unwrap();
        assert_eq!(parsed, custom_pq_table());
        assert!(CoefficientTable::from_json(r#"{"l": 1, "terms": [[1, 0, "x"]]}"#).is_err());
        let c0 = Deformation::new(Family::Custom(power_series), ratio(1, 2), ratio(1, 3)).unwrap();
        assert_eq!(c0.number(-1), Err(Error::UnsupportedExponent(-1)));
        let bad = CoefficientTable {
            l: 0,
            terms: vec![(1, 0, int(1))],
        };
        assert!(matches!(
            Deformation::new(Family::Custom(bad), ratio(1, 2), ratio(1, 3)),
            Err(Error::NotNormalized(_))
        ));
    }
}
