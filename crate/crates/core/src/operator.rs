//! Linear operators given by their action on monomials inside a finite window.
//!
//! An operator knows its image on every basis monomial of its domain. Products
//! only keep the monomials whose whole orbit stays inside the domains of the
//! factors, so a composite is never evaluated from incomplete data.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::deform::Deformation;
use crate::error::{Error, Result};
use crate::laurent::{accumulate, MultiMonomial};
use crate::scalar::{self, one, Scalar};

pub trait Basis: Ord + Clone + std::fmt::Debug {
    fn coords(&self) -> Vec<i64>;
    /// Sort key used to pick the smallest witness.
    fn size(&self) -> i64;
}

impl Basis for i64 {
    fn coords(&self) -> Vec<i64> {
        vec![*self]
    }
    fn size(&self) -> i64 {
        self.abs()
    }
}

impl Basis for MultiMonomial {
    fn coords(&self) -> Vec<i64> {
        self.clone()
    }
    fn size(&self) -> i64 {
        self.iter().map(|e| e.abs()).sum()
    }
}

pub type Image<K> = BTreeMap<K, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator<K: Basis> {
    action: BTreeMap<K, Image<K>>,
}

pub type GradedOperator = Operator<i64>;

/// A mismatch between two operators on one basis monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub mode: Vec<i64>,
    pub target: Vec<i64>,
    #[serde(with = "scalar::serde_text")]
    pub expected: Scalar,
    #[serde(with = "scalar::serde_text")]
    pub got: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equal { checked: usize },
    Differs(Witness),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefactor {
    Plain,
    /// The mode-sum dependent factor `(1/2 [-2M]/[-M])^alpha`.
    ModeSum { mode_sum: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BracketSpec {
    pub prefactor: Prefactor,
}

impl BracketSpec {
    pub fn plain() -> Self {
        BracketSpec {
            prefactor: Prefactor::Plain,
        }
    }

    pub fn mode_sum(mode_sum: i64) -> Self {
        BracketSpec {
            prefactor: Prefactor::ModeSum { mode_sum },
        }
    }
}

impl<K: Basis> Operator<K> {
    pub fn from_action<F>(domain: impl IntoIterator<Item = K>, mut f: F) -> Result<Self>
    where
        F: FnMut(&K) -> Result<Vec<(K, Scalar)>>,
    {
        let mut action = BTreeMap::new();
        for k in domain {
            let mut image = Image::new();
            for (t, c) in f(&k)? {
                accumulate(&mut image, t, c);
            }
            action.insert(k, image);
        }
        Ok(Operator { action })
    }

    pub fn zero(domain: impl IntoIterator<Item = K>) -> Self {
        Operator {
            action: domain.into_iter().map(|k| (k, Image::new())).collect(),
        }
    }

    pub fn identity(domain: impl IntoIterator<Item = K>) -> Self {
        Operator {
            action: domain
                .into_iter()
                .map(|k| {
                    let mut image = Image::new();
                    image.insert(k.clone(), one());
                    (k, image)
                })
                .collect(),
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = &K> {
        self.action.keys()
    }

    pub fn domain_len(&self) -> usize {
        self.action.len()
    }

    pub fn image(&self, k: &K) -> Option<&Image<K>> {
        self.action.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.action.values().all(|i| i.is_empty())
    }

    /// Applies the operator to a vector, or `None` if some monomial lies outside the domain.
    pub fn apply(&self, v: &Image<K>) -> Option<Image<K>> {
        let mut out = Image::new();
        for (k, c) in v {
            let image = self.action.get(k)?;
            for (t, x) in image {
                accumulate(&mut out, t.clone(), c * x);
            }
        }
        Some(out)
    }

    fn nonempty(self) -> Result<Self> {
        if self.action.is_empty() {
            Err(Error::WindowExhausted)
        } else {
            Ok(self)
        }
    }

    /// `self . other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let mut action = BTreeMap::new();
        for (k, image) in &other.action {
            if let Some(v) = self.apply(image) {
                action.insert(k.clone(), v);
            }
        }
        Operator { action }.nonempty()
    }

    pub fn linear_combination(terms: &[(Scalar, &Self)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::WindowExhausted);
        };
        let mut action = BTreeMap::new();
        'modes: for k in first.action.keys() {
            let mut out = Image::new();
            for (c, op) in terms {
                let Some(image) = op.action.get(k) else {
                    continue 'modes;
                };
                for (t, x) in image {
                    accumulate(&mut out, t.clone(), c * x);
                }
            }
            action.insert(k.clone(), out);
        }
        Operator { action }.nonempty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::linear_combination(&[(one(), self), (one(), other)])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::linear_combination(&[(one(), self), (-one(), other)])
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let action = self
            .action
            .iter()
            .map(|(k, image)| {
                let mut out = Image::new();
                for (t, x) in image {
                    accumulate(&mut out, t.clone(), x * c);
                }
                (k.clone(), out)
            })
            .collect();
        Operator { action }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Rewrites every matrix entry `(source, target, c)` as `(source, target, f(...))`.
    pub fn try_map_entries(&self, mut f: impl FnMut(&K, &K, &Scalar) -> Result<Scalar>) -> Result<Self> {
        let mut action = BTreeMap::new();
        for (k, image) in &self.action {
            let mut out = Image::new();
            for (t, c) in image {
                accumulate(&mut out, t.clone(), f(k, t, c)?);
            }
            action.insert(k.clone(), out);
        }
        Ok(Operator { action })
    }

    /// Restricts the domain to the monomials accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        Operator {
            action: self
                .action
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Exact comparison on the common domain; the witness has the smallest mode size.
    pub fn compare(&self, other: &Self) -> Result<Comparison> {
        let mut checked = 0;
        let mut best: Option<Witness> = None;
        let mut best_key: Option<(i64, K)> = None;
        for (k, a) in &self.action {
            let Some(b) = other.action.get(k) else {
                continue;
            };
            checked += 1;
            if a == b {
                continue;
            }
            let key = (k.size(), k.clone());
            if best_key.as_ref().is_some_and(|bk| *bk <= key) {
                continue;
            }
            let target = a
                .keys()
                .chain(b.keys())
                .find(|t| a.get(*t) != b.get(*t))
                .expect("images differ")
                .clone();
            let get = |i: &Image<K>| i.get(&target).cloned().unwrap_or_else(Scalar::zero);
            best = Some(Witness {
                mode: k.coords(),
                target: target.coords(),
                expected: get(a),
                got: get(b),
            });
            best_key = Some(key);
        }
        if checked == 0 {
            return Err(Error::WindowExhausted);
        }
        Ok(match best {
            Some(w) => Comparison::Differs(w),
            None => Comparison::Equal { checked },
        })
    }

    /// If `self = c * other` on the common domain, returns `c`; `other` must be nonzero there.
    pub fn ratio_to(&self, other: &Self) -> Result<Option<Scalar>> {
        let mut ratio: Option<Scalar> = None;
        let mut checked = 0;
        for (k, a) in &self.action {
            let Some(b) = other.action.get(k) else {
                continue;
            };
            checked += 1;
            for t in a.keys().chain(b.keys()) {
                let x = a.get(t).cloned().unwrap_or_else(Scalar::zero);
                let y = b.get(t).cloned().unwrap_or_else(Scalar::zero);
                if y.is_zero() {
                    if !x.is_zero() {
                        return Ok(None);
                    }
                    continue;
                }
                let r = x / y;
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) if *prev != r => return Ok(None),
                    _ => {}
                }
            }
        }
        if checked == 0 {
            return Err(Error::WindowExhausted);
        }
        Ok(Some(ratio.unwrap_or_else(Scalar::zero)))
    }
}

impl<K: Basis> Operator<K> {
    /// `self = c * target` on the common domain; `Err(witness)` when no such `c` exists.
    pub fn proportional_to(&self, target: &Self) -> Result<std::result::Result<Scalar, Witness>> {
        if let Some(c) = self.ratio_to(target)? {
            return Ok(Ok(c));
        }
        let mut guess = None;
        for (k, b) in &target.action {
            let Some(a) = self.action.get(k) else {
                continue;
            };
            if let Some((t, y)) = b.iter().find(|(_, y)| !y.is_zero()) {
                guess = Some(a.get(t).cloned().unwrap_or_else(Scalar::zero) / y);
                break;
            }
        }
        let guess = guess.unwrap_or_else(Scalar::zero);
        match target.scale(&guess).compare(self)? {
            Comparison::Differs(w) => Ok(Err(w)),
            Comparison::Equal { .. } => Ok(Ok(guess)),
        }
    }
}

/// Coefficients `c` with `target = sum_i c_i basis_i` on the common domain, if any exist.
pub fn span_coefficients<K: Basis>(target: &Operator<K>, basis: &[&Operator<K>]) -> Result<Option<Vec<Scalar>>> {
    let cols = basis.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (k, image) in &target.action {
        let images: Option<Vec<&Image<K>>> = basis.iter().map(|b| b.action.get(k)).collect();
        let Some(images) = images else {
            continue;
        };
        let mut targets: Vec<&K> = image.keys().collect();
        for i in &images {
            targets.extend(i.keys());
        }
        targets.sort();
        targets.dedup();
        for t in targets {
            let mut row: Vec<Scalar> = images.iter().map(|i| i.get(t).cloned().unwrap_or_else(Scalar::zero)).collect();
            row.push(image.get(t).cloned().unwrap_or_else(Scalar::zero));
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(Error::WindowExhausted);
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..rows.len()).find(|i| !rows[*i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=cols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(None);
    }
    let mut out = vec![Scalar::zero(); cols];
    for (i, c) in pivots.iter().enumerate() {
        out[*c] = rows[i][cols].clone();
    }
    Ok(Some(out))
}

impl GradedOperator {
    pub fn window(window: i64) -> std::ops::RangeInclusive<i64> {
        -window..=window
    }

    /// Smallest and largest shift `n' - n` over all nonzero matrix entries.
    pub fn shift_bounds(&self) -> Option<(i64, i64)> {
        let shifts = self
            .action
            .iter()
            .flat_map(|(n, image)| image.keys().map(move |t| t - n));
        shifts.fold(None, |acc, s| match acc {
            None => Some((s, s)),
            Some((lo, hi)) => Some((lo.min(s), hi.max(s))),
        })
    }
}

/// `sum_sigma sgn(sigma) O_sigma(1) ... O_sigma(n)`, times the optional prefactor.
pub fn n_bracket<K: Basis>(
    ops: &[&Operator<K>],
    spec: BracketSpec,
    d: &Deformation,
) -> Result<Operator<K>> {
    let bracket = plain_bracket(ops)?;
    match spec.prefactor {
        Prefactor::Plain => Ok(bracket),
        Prefactor::ModeSum { mode_sum } => {
            Ok(bracket.scale(&d.bracket_prefactor(mode_sum, ops.len().max(2))?))
        }
    }
}

/// The antisymmetrized product, built subset by subset:
/// `f(S) = sum_{i in S} (-1)^{#{j in S, j < i}} O_i f(S - {i})`.
pub fn plain_bracket<K: Basis>(ops: &[&Operator<K>]) -> Result<Operator<K>> {
    let n = ops.len();
    assert!((1..=16).contains(&n), "unsupported bracket arity");
    let full = (1usize << n) - 1;
    let mut action = BTreeMap::new();
    'modes: for k in ops[0].domain() {
        let mut partial: Vec<Image<K>> = vec![Image::new(); full + 1];
        partial[0].insert(k.clone(), one());
        for mask in 1..=full {
            let mut acc = Image::new();
            let mut below = 0;
            for (i, op) in ops.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                let Some(v) = op.apply(&partial[mask ^ (1 << i)]) else {
                    continue 'modes;
                };
                let s = scalar::sign(below % 2 == 0);
                for (t, x) in v {
                    accumulate(&mut acc, t, &s * x);
                }
                below += 1;
            }
            partial[mask] = acc;
        }
        action.insert(k.clone(), std::mem::take(&mut partial[full]));
    }
    Operator { action }.nonempty()
}

/// `A1[A2,A3] + A2[A3,A1] + A3[A1,A2]`.
pub fn nambu_left<K: Basis>(a: &Operator<K>, b: &Operator<K>, c: &Operator<K>) -> Result<Operator<K>> {
    let x = a.compose(&b.commutator(c)?)?;
    let y = b.compose(&c.commutator(a)?)?;
    let z = c.compose(&a.commutator(b)?)?;
    x.add(&y)?.add(&z)
}

/// `[A2,A3]A1 + [A3,A1]A2 + [A1,A2]A3`.
pub fn nambu_right<K: Basis>(a: &Operator<K>, b: &Operator<K>, c: &Operator<K>) -> Result<Operator<K>> {
    let x = b.commutator(c)?.compose(a)?;
    let y = c.commutator(a)?.compose(b)?;
    let z = a.commutator(b)?.compose(c)?;
    x.add(&y)?.add(&z)
}

/// Parity of a permutation given as a list of distinct indices.
pub fn permutation_is_even(perm: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// The generalized Jacobi sum over `2n-1` operators, `n = (len+1)/2`.
///
/// Both brackets are totally antisymmetric, so the full sum over `S_{2n-1}` equals
/// `n!(n-1)!` times the sum over `n`-subsets with the shuffle sign; the common
/// factor is dropped. With `modes` given, each bracket carries the mode-sum
/// prefactor of its own arguments.
pub fn gji_residual<K: Basis>(ops: &[&Operator<K>], modes: Option<&[i64]>, d: &Deformation) -> Result<Operator<K>> {
    let total = ops.len();
    assert!(total % 2 == 1 && total >= 3, "GJI needs 2n-1 operators");
    let n = total.div_ceil(2);
    let spec_for = |idx: &[usize]| match modes {
        Some(m) => BracketSpec::mode_sum(idx.iter().map(|i| m[*i]).sum()),
        None => BracketSpec::plain(),
    };
    let all: Vec<usize> = (0..total).collect();
    let outer = spec_for(&all);
    let mut terms: Vec<(Scalar, Operator<K>)> = Vec::new();
    for subset in itertools::Itertools::combinations(0..total, n) {
        let rest: Vec<usize> = (0..total).filter(|i| !subset.contains(i)).collect();
        let order: Vec<usize> = subset.iter().chain(rest.iter()).copied().collect();
        let inner_ops: Vec<&Operator<K>> = subset.iter().map(|i| ops[*i]).collect();
        let nested = n_bracket(&inner_ops, spec_for(&subset), d)?;
        let mut outer_ops = vec![&nested];
        outer_ops.extend(rest.iter().map(|i| ops[*i]));
        let value = n_bracket(&outer_ops, outer, d)?;
        terms.push((scalar::sign(permutation_is_even(&order)), value));
    }
    let refs: Vec<(Scalar, &Operator<K>)> = terms.iter().map(|(c, o)| (c.clone(), o)).collect();
    Operator::linear_combination(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use itertools::Itertools;

    fn pq() -> Deformation {
        Deformation::two_parameter(ratio(1, 2), ratio(1, 3)).unwrap()
    }

    fn mult(window: i64, m: i64) -> GradedOperator {
        GradedOperator::from_action(GradedOperator::window(window), |n| Ok(vec![(n + m, one())])).unwrap()
    }

    fn deriv(d: &Deformation, window: i64) -> GradedOperator {
        GradedOperator::from_action(GradedOperator::window(window), |n| Ok(vec![(n - 1, d.number(*n)?)])).unwrap()
    }

    #[test]
    fn commutator_of_d_and_z() {
        let d = pq();
        let c = deriv(&d, 6).commutator(&mult(6, 1)).unwrap();
        for n in c.domain() {
            let expected = d.number(n + 1).unwrap() - d.number(*n).unwrap();
            assert_eq!(c.image(n).unwrap().get(n).cloned().unwrap_or_default(), expected);
        }
        assert!(mult(6, 1).commutator(&mult(6, 1)).unwrap().is_zero());
    }

    #[test]
    fn compare_reports_smallest_witness() {
        let d = pq();
        let w = match deriv(&d, 4).compare(&mult(4, 1)).unwrap() {
            Comparison::Differs(w) => w,
            other => panic!("{other:?}"),
        };
        assert_eq!(w.mode, vec![0]);
        let a = mult(4, 1);
        assert!(a.compare(&a).unwrap().is_equal());
        assert!(GradedOperator::zero(-2..=2).compare(&GradedOperator::zero(-2..=2)).unwrap().is_equal());
    }

    #[test]
    fn composition_shrinks_domain() {
        let a = mult(4, 3);
        let aa = a.compose(&a).unwrap();
        assert_eq!(aa.domain().copied().collect_vec(), (-4..=1).collect_vec());
        assert_eq!(a.shift_bounds(), Some((3, 3)));
        let far = mult(2, 5);
        assert_eq!(far.compose(&far), Err(Error::WindowExhausted));
    }

    #[test]
    fn bracket_matches_literal_permutation_sum() {
        let d = pq();
        let ops = [deriv(&d, 8), mult(8, 1), mult(8, -1).compose(&deriv(&d, 8)).unwrap().restrict(|n| n.abs() <= 7)];
        let refs = ops.iter().collect_vec();
        let fast = plain_bracket(&refs).unwrap();
        let mut terms = Vec::new();
        for perm in (0..3).permutations(3) {
            let prod = ops[perm[0]].compose(&ops[perm[1]]).unwrap().compose(&ops[perm[2]]).unwrap();
            terms.push((scalar::sign(permutation_is_even(&perm)), prod));
        }
        let refs2 = terms.iter().map(|(c, o)| (c.clone(), o)).collect_vec();
        let slow = GradedOperator::linear_combination(&refs2).unwrap();
        assert!(fast.compare(&slow).unwrap().is_equal());
        assert!(n_bracket(&refs, BracketSpec::plain(), &d).unwrap().compare(&fast).unwrap().is_equal());
        let left = nambu_left(&ops[0], &ops[1], &ops[2]).unwrap();
        assert!(left.compare(&fast).unwrap().is_equal());
    }

    #[test]
    fn mode_sum_prefactor_scales_even_brackets() {
        let d = pq();
        let (a, b) = (deriv(&d, 6), mult(6, 2));
        let plain = n_bracket(&[&a, &b], BracketSpec::plain(), &d).unwrap();
        let scaled = n_bracket(&[&a, &b], BracketSpec::mode_sum(1), &d).unwrap();
        assert!(scaled.compare(&plain.scale(&ratio(5, 2))).unwrap().is_equal());
        assert_eq!(int(1), one());
    }

    #[test]
    fn span_solves_small_systems() {
        let d = pq();
        let (a, b) = (deriv(&d, 6), mult(6, 1));
        let target = a.scale(&ratio(2, 3)).sub(&b.scale(&int(4))).unwrap();
        let c = span_coefficients(&target, &[&a, &b]).unwrap().unwrap();
        assert_eq!(c, vec![ratio(2, 3), int(-4)]);
        assert_eq!(span_coefficients(&mult(6, 2), &[&a, &b]).unwrap(), None);
    }

    #[test]
    fn reduced_gji_matches_full_sum_for_commutators() {
        let d = pq();
        let ops = [deriv(&d, 8), mult(8, 2), mult(8, -1).compose(&deriv(&d, 8)).unwrap()];
        let refs = ops.iter().collect_vec();
        let reduced = gji_residual(&refs, None, &d).unwrap();
        assert!(reduced.is_zero());
        let full: Vec<_> = (0..3)
            .permutations(3)
            .map(|p| {
                let inner = ops[p[0]].commutator(&ops[p[1]]).unwrap();
                (scalar::sign(permutation_is_even(&p)), inner.commutator(&ops[p[2]]).unwrap())
            })
            .collect();
        let refs2 = full.iter().map(|(c, o)| (c.clone(), o)).collect_vec();
        assert!(GradedOperator::linear_combination(&refs2).unwrap().is_zero());
    }
}
