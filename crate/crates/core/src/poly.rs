//! Sparse multivariate polynomials over `F_p`.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so iteration order
//! is lexicographic on exponents and two polynomials are equal exactly when
//! their maps are. Zero coefficients are never stored.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Deref, Mul, Neg, Sub};

use crate::{Error, Prime};

pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// The ambient polynomial ring `F_p[z_1, ..., z_n]` plus the per-variable
/// degree cap that guards growth in Frobenius twists and p-th powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    prime: Prime,
    nvars: usize,
    max_degree: u32,
}

impl Ring {
    pub fn new(prime: Prime, nvars: usize) -> Self {
        Ring {
            prime,
            nvars,
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }

    pub fn with_max_degree(self, max_degree: u32) -> Self {
        Ring { max_degree, ..self }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.prime.get()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Same field and same number of variables; the degree cap may differ.
    pub fn check_compatible(&self, other: &Ring) -> Result<(), Error> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.p(), other.p()));
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn check_var(&self, var: usize) -> Result<(), Error> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        Ok(())
    }
}

/// Exponent vector `(e_1, ..., e_n)` of a monomial `z_1^e_1 ... z_n^e_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponents(exps)
    }

    pub fn zeros(nvars: usize) -> Self {
        Exponents(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Exponents(e)
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn all_divisible_by(&self, p: u32) -> bool {
        self.0.iter().all(|&e| e % p == 0)
    }

    fn with(&self, var: usize, value: u32) -> Self {
        let mut e = self.0.clone();
        e[var] = value;
        Exponents(e)
    }
}

impl Deref for Exponents {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

/// A polynomial in `F_p[z_1, ..., z_n]`.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Exponents, u32>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.prime == other.ring.prime
            && self.ring.nvars == other.ring.nvars
            && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ring: Ring) -> Self {
        MultiPoly {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: Ring, c: i64) -> Self {
        Self::monomial(ring, Exponents::zeros(ring.nvars), ring.prime.reduce(c))
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, 1)
    }

    /// The coordinate function `z_{var+1}`.
    pub fn var(ring: Ring, var: usize) -> Self {
        Self::monomial(ring, Exponents::unit(ring.nvars, var), 1)
    }

    pub fn monomial(ring: Ring, exps: Exponents, c: u32) -> Self {
        assert_eq!(exps.len(), ring.nvars, "exponent vector length");
        let c = c % ring.p();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exps, c);
        }
        MultiPoly { ring, terms }
    }

    /// `z_1^e_1 ... z_n^e_n` with coefficient 1.
    pub fn power_product(ring: Ring, exps: &[u32]) -> Self {
        Self::monomial(ring, Exponents(exps.to_vec()), 1)
    }

    /// Sums the given terms; repeated exponent vectors accumulate.
    pub fn from_terms<I>(ring: Ring, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, u32)>,
    {
        let mut poly = Self::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.len(), ring.nvars, "exponent vector length");
            poly.add_term(e, c);
        }
        poly
    }

    fn add_term(&mut self, exps: Exponents, c: u32) {
        let p = self.ring.prime;
        let c = c % p.get();
        if c == 0 {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = p.add(*v, c);
                if *v == 0 {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn with_ring(mut self, ring: Ring) -> Self {
        assert!(self.ring.check_compatible(&ring).is_ok());
        self.ring = ring;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (e, &c) = self.terms.iter().next().unwrap();
                e.is_zero().then_some(c)
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, u32)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> u32 {
        self.terms
            .get(&Exponents(exps.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    /// Largest exponent of `z_{var+1}`, 0 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn check_degree(&self) -> Result<(), Error> {
        let cap = self.ring.max_degree;
        for e in self.terms.keys() {
            if let Some((var, &d)) = e.iter().enumerate().find(|(_, &d)| d > cap) {
                return Err(Error::DegreeOverflow {
                    var,
                    degree: d as u64,
                    cap,
                });
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.ring.check_compatible(&other.ring)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.ring.check_compatible(&other.ring)?;
        let p = self.ring.prime;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), p.neg(c));
        }
        Ok(out)
    }

    /// Product with the degree cap enforced.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.ring.check_compatible(&other.ring)?;
        let out = self.mul_unchecked(other);
        out.check_degree()?;
        Ok(out)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.ring.prime;
        let mut out = Self::zero(self.ring);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(Exponents(e), p.mul(ca, cb));
            }
        }
        out
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.ring.prime;
        let c = c % p.get();
        if c == 0 {
            return Self::zero(self.ring);
        }
        MultiPoly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(e, &v)| (e.clone(), p.mul(v, c)))
                .collect(),
        }
    }

    /// Multiplies by the power product `z^exps`.
    pub fn shift(&self, exps: &[u32]) -> Self {
        MultiPoly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| {
                    let shifted = e.iter().zip(exps).map(|(a, b)| a + b).collect();
                    (Exponents(shifted), c)
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ring);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Exponents) -> bool) -> Self {
        MultiPoly {
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        }
    }

    /// Terms mapped through `f`; returning `None` drops the term. The map
    /// must be injective on exponents (coefficients are not re-accumulated).
    fn map_terms(&self, mut f: impl FnMut(&Exponents, u32) -> Option<(Exponents, u32)>) -> Self {
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            if let Some((e2, c2)) = f(e, c) {
                if c2 != 0 {
                    terms.insert(e2, c2);
                }
            }
        }
        MultiPoly {
            ring: self.ring,
            terms,
        }
    }

    pub(crate) fn derive(&self, var: usize) -> Self {
        let p = self.ring.prime;
        self.map_terms(|e, c| {
            let k = e[var];
            (k % p.get() != 0).then(|| (e.with(var, k - 1), p.mul(c, k % p.get())))
        })
    }

    /// `∂f/∂z_{var+1}`.
    pub fn partial(&self, var: usize) -> Result<Self, Error> {
        self.ring.check_var(var)?;
        Ok(self.derive(var))
    }

    pub(crate) fn derive_pow(&self, var: usize, k: u32) -> Self {
        if k >= self.ring.p() {
            return Self::zero(self.ring);
        }
        (0..k).fold(self.clone(), |f, _| f.derive(var))
    }

    /// `∂^k f / ∂z_{var+1}^k` as `k` iterated single derivatives.
    pub fn partial_pow(&self, var: usize, k: u32) -> Result<Self, Error> {
        self.ring.check_var(var)?;
        Ok(self.derive_pow(var, k))
    }

    /// Same as [`partial_pow`](Self::partial_pow) via the falling factorial
    /// `e (e-1) ... (e-k+1)` on each exponent.
    pub fn partial_pow_falling(&self, var: usize, k: u32) -> Result<Self, Error> {
        self.ring.check_var(var)?;
        let p = self.ring.prime;
        Ok(self.map_terms(|e, c| {
            let d = e[var];
            if d < k {
                return None;
            }
            let coeff = (0..k).fold(c, |acc, j| p.mul(acc, (d - j) % p.get()));
            Some((e.with(var, d - k), coeff))
        }))
    }

    pub(crate) fn derive_multi(&self, vars: &[usize]) -> Self {
        let k = self.ring.p() - 1;
        vars.iter().fold(self.clone(), |f, &i| f.derive_pow(i, k))
    }

    /// `∂_I^{p-1} f`, the composition of `∂_i^{p-1}` over `i ∈ I`.
    pub fn partial_multi(&self, vars: &[usize]) -> Result<Self, Error> {
        for &i in vars {
            self.ring.check_var(i)?;
        }
        Ok(self.derive_multi(vars))
    }

    /// `F` with `∂F/∂z_{var+1} = f` and no `z_{var+1}`-free terms added.
    pub fn antiderivative(&self, var: usize) -> Result<Self, Error> {
        self.ring.check_var(var)?;
        let p = self.ring.prime;
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            let k = e[var];
            if (k + 1) % p.get() == 0 {
                return Err(Error::ObstructedAntiderivative {
                    var,
                    exponents: e.0.clone(),
                });
            }
            let inv = p.inv((k + 1) % p.get())?;
            terms.insert(e.with(var, k + 1), p.mul(c, inv));
        }
        Ok(MultiPoly {
            ring: self.ring,
            terms,
        })
    }

    /// Coordinates `g_I` of `f = Σ_I g_I z^I` over `F_p[z^p]`, for `I` with
    /// every entry below `p`. Each `g_I` keeps its p-th-power exponents.
    pub fn frobenius_decompose(&self) -> BTreeMap<Exponents, MultiPoly> {
        let p = self.ring.p();
        let mut out: BTreeMap<Exponents, MultiPoly> = BTreeMap::new();
        for (e, &c) in &self.terms {
            let low = Exponents(e.iter().map(|&k| k % p).collect());
            let high = Exponents(e.iter().map(|&k| k - k % p).collect());
            out.entry(low)
                .or_insert_with(|| Self::zero(self.ring))
                .terms
                .insert(high, c);
        }
        out
    }

    /// `f(z_1^p, ..., z_n^p)`.
    pub fn substitute_pth(&self) -> Result<Self, Error> {
        let p = self.ring.p();
        let cap = self.ring.max_degree;
        for e in self.terms.keys() {
            for (var, &k) in e.iter().enumerate() {
                let degree = k as u64 * p as u64;
                if degree > cap as u64 {
                    return Err(Error::DegreeOverflow { var, degree, cap });
                }
            }
        }
        Ok(self.map_terms(|e, c| Some((Exponents(e.iter().map(|&k| k * p).collect()), c))))
    }

    /// Inverse of [`substitute_pth`](Self::substitute_pth).
    pub fn unsubstitute_pth(&self) -> Result<Self, Error> {
        let p = self.ring.p();
        if let Some(e) = self.terms.keys().find(|e| !e.all_divisible_by(p)) {
            return Err(Error::NotPthPower {
                exponents: e.0.clone(),
            });
        }
        Ok(self.map_terms(|e, c| Some((Exponents(e.iter().map(|&k| k / p).collect()), c))))
    }

    /// True iff every exponent is divisible by `p`, i.e. `df = 0`.
    pub fn is_differential_constant(&self) -> bool {
        let p = self.ring.p();
        self.terms.keys().all(|e| e.all_divisible_by(p))
    }

    /// Leading (lexicographically largest) term.
    pub fn leading_term(&self) -> Option<(&Exponents, u32)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Componentwise minimum of the exponents over all terms.
    pub fn monomial_content(&self) -> Option<Vec<u32>> {
        let mut it = self.terms.keys();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e.iter()).map(|(a, b)| *a.min(b)).collect()
        }))
    }

    /// Exact division by `z^exps`; every term must be divisible.
    pub(crate) fn unshift(&self, exps: &[u32]) -> Self {
        self.map_terms(|e, c| {
            let reduced = e.iter().zip(exps).map(|(a, b)| a - b).collect();
            Some((Exponents(reduced), c))
        })
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending lexicographic order: `2*z1^2*z2 + z1 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, &c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write_monomial(f, e, c)?;
        }
        Ok(())
    }
}

pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], c: u32) -> fmt::Result {
    let mut first = true;
    if c != 1 || e.iter().all(|&k| k == 0) {
        write!(f, "{c}")?;
        first = false;
    }
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "z{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.ring
                    .check_compatible(&rhs.ring)
                    .expect("polynomials from different rings");
                self.$checked(rhs)
            }
        }
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

impl MultiPoly {
    fn add_impl(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).unwrap()
    }
    fn sub_impl(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).unwrap()
    }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_unchecked);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(self.ring.p() - 1)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
