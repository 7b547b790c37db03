//! Homogeneous differential forms `Σ_I a_I dz_I`.
//!
//! Basis r-vectors are stored only under strictly increasing multi-indices;
//! every sign from reordering is folded into the coefficient when a term is
//! built. A degree-0 form is a single coefficient under the empty index.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, MultiPoly, RatFun, Ring};

/// Strictly increasing tuple of zero-based variable indices naming
/// `dz_{i_1} ∧ ... ∧ dz_{i_r}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self, Error> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMultiIndex(indices));
        }
        Ok(MultiIndex(indices))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(alloc::vec![i])
    }

    /// Sorts arbitrary indices. Returns the sorted index and whether the
    /// sorting permutation is odd, or `None` on a repeated index.
    pub fn from_unsorted(indices: &[usize]) -> Option<(Self, bool)> {
        let mut v = indices.to_vec();
        let mut odd = false;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((MultiIndex(v), odd))
    }

    /// All strictly increasing `r`-subsets of `0..n`, lexicographically.
    pub fn all(n: usize, r: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(r);
        fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == r {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, r, cur, out);
                cur.pop();
            }
        }
        if r <= n {
            rec(0, n, r, &mut current, &mut out);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// `I - i` and the position `s` of `i`, so `dz_I = (-1)^s dz_i ∧ dz_{I-i}`.
    pub fn remove(&self, i: usize) -> Option<(MultiIndex, usize)> {
        let pos = self.0.binary_search(&i).ok()?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some((MultiIndex(v), pos))
    }

    /// `I + j` and the number `s` of entries below `j`, so
    /// `dz_j ∧ dz_I = (-1)^s dz_{I+j}`.
    pub fn insert(&self, j: usize) -> Option<(MultiIndex, usize)> {
        let pos = self.0.binary_search(&j).err()?;
        let mut v = self.0.clone();
        v.insert(pos, j);
        Some((MultiIndex(v), pos))
    }

    /// `dz_I ∧ dz_J = ±dz_{I∪J}`; `None` when the indices overlap.
    pub fn wedge(&self, other: &MultiIndex) -> Option<(MultiIndex, bool)> {
        let mut inversions = 0usize;
        for &i in &self.0 {
            for &j in &other.0 {
                if i == j {
                    return None;
                }
                if i > j {
                    inversions += 1;
                }
            }
        }
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        Some((MultiIndex(v), inversions % 2 == 1))
    }

    /// Exponent vector of `z_I^{k}` in `n` variables.
    pub fn power_exponents(&self, n: usize, k: u32) -> Vec<u32> {
        let mut e = alloc::vec![0; n];
        for &i in &self.0 {
            e[i] = k;
        }
        e
    }
}

impl fmt::Display for MultiIndex {
    /// One-based: `(1,2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str(")")
    }
}

/// Coefficient ring of a form: [`MultiPoly`] or [`RatFun`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero(ring: Ring) -> Self;
    fn from_poly(poly: MultiPoly) -> Self;
    fn ring(&self) -> Ring;
    fn is_zero(&self) -> bool;
    fn scale(&self, c: u32) -> Self;
    fn mul_poly(&self, f: &MultiPoly) -> Self;
    /// Unchecked partial derivative; `var` must be in range.
    fn derive(&self, var: usize) -> Self;
    /// The value in `F_p` when the coefficient is constant.
    fn as_constant(&self) -> Option<u32>;
    fn is_differential_constant(&self) -> bool;
    /// The polynomial value when the denominator is trivial.
    fn to_poly(&self) -> Option<MultiPoly>;
    /// `a(z) ↦ a(z^p)`.
    fn frobenius_twist(&self) -> Result<Self, Error>;
    fn check_degree(&self) -> Result<(), Error>;
    fn max_var_degree(&self) -> u32;

    fn derive_pow(&self, var: usize, k: u32) -> Self {
        if k >= self.ring().p() {
            return Self::zero(self.ring());
        }
        (0..k).fold(self.clone(), |f, _| f.derive(var))
    }

    /// `∂_I^{p-1}`.
    fn derive_multi(&self, index: &MultiIndex) -> Self {
        let k = self.ring().p() - 1;
        index.iter().fold(self.clone(), |f, i| f.derive_pow(i, k))
    }
}

impl Coefficient for MultiPoly {
    fn zero(ring: Ring) -> Self {
        MultiPoly::zero(ring)
    }
    fn from_poly(poly: MultiPoly) -> Self {
        poly
    }
    fn ring(&self) -> Ring {
        MultiPoly::ring(self)
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn scale(&self, c: u32) -> Self {
        MultiPoly::scale(self, c)
    }
    fn mul_poly(&self, f: &MultiPoly) -> Self {
        self * f
    }
    fn derive(&self, var: usize) -> Self {
        MultiPoly::derive(self, var)
    }
    fn derive_pow(&self, var: usize, k: u32) -> Self {
        MultiPoly::derive_pow(self, var, k)
    }
    fn as_constant(&self) -> Option<u32> {
        MultiPoly::as_constant(self)
    }
    fn is_differential_constant(&self) -> bool {
        MultiPoly::is_differential_constant(self)
    }
    fn to_poly(&self) -> Option<MultiPoly> {
        Some(self.clone())
    }
    fn frobenius_twist(&self) -> Result<Self, Error> {
        self.substitute_pth()
    }
    fn check_degree(&self) -> Result<(), Error> {
        MultiPoly::check_degree(self)
    }
    fn max_var_degree(&self) -> u32 {
        MultiPoly::max_var_degree(self)
    }
}

impl Coefficient for RatFun {
    fn zero(ring: Ring) -> Self {
        RatFun::zero(ring)
    }
    fn from_poly(poly: MultiPoly) -> Self {
        RatFun::from_poly(poly)
    }
    fn ring(&self) -> Ring {
        RatFun::ring(self)
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn scale(&self, c: u32) -> Self {
        RatFun::scale(self, c)
    }
    fn mul_poly(&self, f: &MultiPoly) -> Self {
        RatFun::mul_poly(self, f)
    }
    fn derive(&self, var: usize) -> Self {
        RatFun::derive(self, var)
    }
    fn as_constant(&self) -> Option<u32> {
        RatFun::as_constant(self)
    }
    fn is_differential_constant(&self) -> bool {
        self.num().is_differential_constant()
    }
    fn to_poly(&self) -> Option<MultiPoly> {
        RatFun::to_poly(self)
    }
    fn frobenius_twist(&self) -> Result<Self, Error> {
        self.substitute_pth()
    }
    fn check_degree(&self) -> Result<(), Error> {
        RatFun::check_degree(self)
    }
    fn max_var_degree(&self) -> u32 {
        self.num().max_var_degree().max(self.den().max_var_degree())
    }
}

/// A homogeneous form of degree `r` in `n` variables over `F_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffForm<C> {
    ring: Ring,
    degree: usize,
    terms: BTreeMap<MultiIndex, C>,
}

pub type PolyForm = DiffForm<MultiPoly>;
pub type RatForm = DiffForm<RatFun>;

impl<C: Coefficient> DiffForm<C> {
    pub fn zero(ring: Ring, degree: usize) -> Self {
        DiffForm {
            ring,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(f: C) -> Self {
        let mut out = Self::zero(f.ring(), 0);
        out.accumulate(MultiIndex::empty(), f);
        out
    }

    /// `dz_{i+1}`.
    pub fn differential(ring: Ring, i: usize) -> Self {
        let mut out = Self::zero(ring, 1);
        out.accumulate(MultiIndex::single(i), C::from_poly(MultiPoly::one(ring)));
        out
    }

    /// `c · dz_{i_1} ∧ ... ∧ dz_{i_r}` for indices in any order.
    pub fn monomial(ring: Ring, coeff: C, indices: &[usize]) -> Result<Self, Error> {
        ring.check_compatible(&coeff.ring())?;
        for &i in indices {
            ring.check_var(i)?;
        }
        let mut out = Self::zero(ring, indices.len());
        if let Some((idx, odd)) = MultiIndex::from_unsorted(indices) {
            let coeff = if odd { -coeff } else { coeff };
            out.accumulate(idx, coeff);
        }
        Ok(out)
    }

    /// Sums terms over strictly increasing indices of length `degree`.
    pub fn from_terms<I>(ring: Ring, degree: usize, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (MultiIndex, C)>,
    {
        let mut out = Self::zero(ring, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch(idx.len(), degree));
            }
            for i in idx.iter() {
                ring.check_var(i)?;
            }
            ring.check_compatible(&c.ring())?;
            out.accumulate(idx, c);
        }
        Ok(out)
    }

    pub(crate) fn accumulate(&mut self, idx: MultiIndex, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&idx) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(idx, sum);
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic order of multi-index.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Option<&C> {
        self.terms.get(idx)
    }

    /// The coefficient of a 0-form.
    pub fn as_function(&self) -> Option<C> {
        (self.degree == 0).then(|| {
            self.terms
                .get(&MultiIndex::empty())
                .cloned()
                .unwrap_or_else(|| C::zero(self.ring))
        })
    }

    /// Applies `f` to every coefficient, keeping indices.
    pub fn map_coefficients(&self, mut f: impl FnMut(&MultiIndex, &C) -> C) -> Self {
        let mut out = Self::zero(self.ring, self.degree);
        for (idx, c) in &self.terms {
            out.accumulate(idx.clone(), f(idx, c));
        }
        out
    }

    pub fn try_map_coefficients<D: Coefficient>(
        &self,
        mut f: impl FnMut(&MultiIndex, &C) -> Result<D, Error>,
    ) -> Result<DiffForm<D>, Error> {
        let mut out = DiffForm::zero(self.ring, self.degree);
        for (idx, c) in &self.terms {
            out.accumulate(idx.clone(), f(idx, c)?);
        }
        Ok(out)
    }

    fn check_same_space(&self, other: &Self) -> Result<(), Error> {
        self.ring.check_compatible(&other.ring)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.accumulate(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.accumulate(idx.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> Self {
        self.map_coefficients(|_, a| a.scale(c))
    }

    pub fn mul_coefficient(&self, g: &C) -> Self {
        self.map_coefficients(|_, a| a.clone() * g.clone())
    }

    pub fn mul_poly(&self, g: &MultiPoly) -> Self {
        self.map_coefficients(|_, a| a.mul_poly(g))
    }

    /// `ω ∧ η`.
    pub fn wedge(&self, other: &Self) -> Result<Self, Error> {
        self.ring.check_compatible(&other.ring)?;
        let mut out = Self::zero(self.ring, self.degree + other.degree);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((idx, odd)) = i.wedge(j) {
                    let c = a.clone() * b.clone();
                    out.accumulate(idx, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `dω = Σ_I Σ_j ∂_j(a_I) dz_j ∧ dz_I`.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = Self::zero(self.ring, self.degree + 1);
        for (idx, a) in &self.terms {
            for j in 0..self.ring.nvars() {
                let Some((target, below)) = idx.insert(j) else {
                    continue;
                };
                let da = a.derive(j);
                if da.is_zero() {
                    continue;
                }
                out.accumulate(target, if below % 2 == 1 { -da } else { da });
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }

    /// Coefficient-wise `∂_i`.
    pub fn partial(&self, var: usize) -> Result<Self, Error> {
        self.ring.check_var(var)?;
        Ok(self.map_coefficients(|_, a| a.derive(var)))
    }

    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .values()
            .map(|c| c.max_var_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn check_degree(&self) -> Result<(), Error> {
        self.terms.values().try_for_each(|c| c.check_degree())
    }

    /// First index of `dω` with a nonzero coefficient.
    pub(crate) fn first_non_closed_index(&self) -> Option<MultiIndex> {
        self.exterior_derivative().terms.keys().next().cloned()
    }

    /// Same form with any ring of identical field and arity (e.g. a
    /// different degree cap).
    pub fn with_ring(mut self, ring: Ring) -> Self {
        assert!(self.ring.check_compatible(&ring).is_ok());
        self.ring = ring;
        self
    }
}

impl PolyForm {
    pub fn to_rational(&self) -> RatForm {
        DiffForm {
            ring: self.ring,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), RatFun::from_poly(c.clone())))
                .collect(),
        }
    }
}

impl RatForm {
    pub fn to_polynomial(&self) -> Option<PolyForm> {
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            terms.insert(i.clone(), c.to_poly()?);
        }
        Some(DiffForm {
            ring: self.ring,
            degree: self.degree,
            terms,
        })
    }

    /// Like [`to_polynomial`](Self::to_polynomial) but reports the first
    /// rational coefficient.
    pub fn require_polynomial(&self) -> Result<PolyForm, Error> {
        match self.terms.iter().find(|(_, c)| c.to_poly().is_none()) {
            Some((idx, _)) => Err(Error::NonPolynomial(idx.clone())),
            None => Ok(self.to_polynomial().unwrap()),
        }
    }
}

impl<C: Coefficient> fmt::Display for DiffForm<C> {
    /// `2*z1 dz1^dz2 + (z2 + 1) dz1^dz3`; the zero form prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (idx, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let text = alloc::format!("{c}");
            if idx.is_empty() {
                f.write_str(&text)?;
                continue;
            }
            let is_one = c.as_constant() == Some(1);
            if !is_one {
                if text.contains(" + ") && !text.starts_with('(') {
                    write!(f, "({text}) ")?;
                } else {
                    write!(f, "{text} ")?;
                }
            }
            for (m, i) in idx.iter().enumerate() {
                if m > 0 {
                    f.write_str("^")?;
                }
                write!(f, "dz{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> Add for DiffForm<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("forms from different spaces")
    }
}

impl<C: Coefficient> Sub for DiffForm<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("forms from different spaces")
    }
}

impl<C: Coefficient> Neg for DiffForm<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_coefficients(|_, a| -a.clone())
    }
}
