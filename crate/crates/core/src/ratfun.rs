//! Rational functions whose denominator is a p-th power.
//!
//! Any `P/Q` can be rewritten as `P·Q^{p-1} / Q^p`. Keeping every
//! denominator in `F_p[z^p]` makes it a differential constant, so all
//! derivative operators act on the numerator alone and no polynomial gcd is
//! ever needed. Equality is decided by cross-multiplication.
//!
//! Normalization is cheap and partial: a zero numerator becomes `0/1`, the
//! common monomial factor `z^{pk}` is cancelled, the denominator is made
//! monic, and a numerator proportional to the denominator collapses to a
//! constant.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::forms::{DiffForm, PolyForm, RatForm};
use crate::{Error, MultiPoly, Ring};

#[derive(Clone, Debug)]
pub struct RatFun {
    num: MultiPoly,
    den: MultiPoly,
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        if self.num.ring().check_compatible(&other.num.ring()).is_err() {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl RatFun {
    /// `P / Q` in normal form `P·Q^{p-1} / Q^p`.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, Error> {
        num.ring().check_compatible(&den.ring())?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if den.is_differential_constant() {
            return Ok(RatFun { num, den }.normalized());
        }
        let p = den.ring().p();
        let den_pm1 = den.pow(p - 1);
        let new_den = &den_pm1 * &den;
        new_den.check_degree()?;
        let new_num = &num * &den_pm1;
        Ok(RatFun {
            num: new_num,
            den: new_den,
        }
        .normalized())
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.ring());
        RatFun { num, den }
    }

    pub fn zero(ring: Ring) -> Self {
        Self::from_poly(MultiPoly::zero(ring))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn ring(&self) -> Ring {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is a nonzero constant.
    pub fn to_poly(&self) -> Option<MultiPoly> {
        let c = self.den.as_constant()?;
        let inv = self.ring().prime().inv(c).ok()?;
        Some(self.num.scale(inv))
    }

    /// The constant value `c` when `num = c·den`.
    pub fn as_constant(&self) -> Option<u32> {
        self.to_poly()?.as_constant()
    }

    fn normalized(mut self) -> Self {
        let ring = self.num.ring();
        let p = ring.prime();
        if self.num.is_zero() {
            self.den = MultiPoly::one(ring);
            return self;
        }
        if let (Some(cn), Some(cd)) = (self.num.monomial_content(), self.den.monomial_content()) {
            let common: Vec<u32> = cn
                .iter()
                .zip(&cd)
                .map(|(a, b)| a.min(b) / p.get() * p.get())
                .collect();
            if common.iter().any(|&k| k > 0) {
                self.num = self.num.unshift(&common);
                self.den = self.den.unshift(&common);
            }
        }
        let lead = self.den.leading_term().map(|(_, c)| c).unwrap();
        if lead != 1 {
            let inv = p.inv(lead).unwrap();
            self.num = self.num.scale(inv);
            self.den = self.den.scale(inv);
        }
        if self.den.as_constant().is_none() && self.num.num_terms() == self.den.num_terms() {
            let c = self.num.leading_term().map(|(_, c)| c).unwrap();
            if self.num == self.den.scale(c) {
                self.num = MultiPoly::constant(ring, c as i64);
                self.den = MultiPoly::one(ring);
            }
        }
        self
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.ring().check_compatible(&other.ring())?;
        if self.den == other.den {
            return Ok(RatFun {
                num: &self.num + &other.num,
                den: self.den.clone(),
            }
            .normalized());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Ok(RatFun {
            num,
            den: &self.den * &other.den,
        }
        .normalized())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.ring().check_compatible(&other.ring())?;
        Ok(RatFun {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
        .normalized())
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, Error> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn scale(&self, c: u32) -> Self {
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    pub fn mul_poly(&self, f: &MultiPoly) -> Self {
        RatFun {
            num: &self.num * f,
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Division by a differential constant; the result keeps the normal form.
    pub fn div_constant(&self, lambda: &MultiPoly) -> Result<Self, Error> {
        if lambda.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        debug_assert!(lambda.is_differential_constant());
        Ok(RatFun {
            num: self.num.clone(),
            den: &self.den * lambda,
        }
        .normalized())
    }

    pub(crate) fn derive(&self, var: usize) -> Self {
        RatFun {
            num: self.num.derive(var),
            den: self.den.clone(),
        }
        .normalized()
    }

    /// `∂f/∂z_{var+1}`; only the numerator is differentiated.
    pub fn partial(&self, var: usize) -> Result<Self, Error> {
        self.ring().check_var(var)?;
        Ok(self.derive(var))
    }

    pub fn substitute_pth(&self) -> Result<Self, Error> {
        Ok(RatFun {
            num: self.num.substitute_pth()?,
            den: self.den.substitute_pth()?,
        }
        .normalized())
    }

    /// Degree cap check on numerator and denominator.
    pub fn check_degree(&self) -> Result<(), Error> {
        self.num.check_degree()?;
        self.den.check_degree()
    }
}

impl fmt::Display for RatFun {
    /// A polynomial prints bare; otherwise `(num/den)` with multi-term parts
    /// parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(poly) = self.to_poly() {
            return write!(f, "{poly}");
        }
        f.write_str("(")?;
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        f.write_str("/")?;
        if self.den.num_terms() > 1 {
            write!(f, "({})", self.den)?;
        } else {
            write!(f, "{}", self.den)?;
        }
        f.write_str(")")
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        self.checked_add(&rhs)
            .expect("rational functions from different rings")
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self.checked_add(&-rhs)
            .expect("rational functions from different rings")
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        self.checked_mul(&rhs)
            .expect("rational functions from different rings")
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -self.num,
            den: self.den,
        }
    }
}

/// Multiplies a rational form by the product `λ` of its distinct
/// denominators, returning `(λ, λ·ω)` with `λ·ω` polynomial.
pub fn clear_denominators(form: &RatForm) -> (MultiPoly, PolyForm) {
    let ring = form.ring();
    let mut dens: Vec<&MultiPoly> = Vec::new();
    for (_, c) in form.terms() {
        if c.den().as_constant().is_none() && !dens.contains(&c.den()) {
            dens.push(c.den());
        }
    }
    let lambda = dens.iter().fold(MultiPoly::one(ring), |acc, d| &acc * *d);
    let terms = form.terms().map(|(idx, c)| {
        let cofactor = dens
            .iter()
            .filter(|d| **d != c.den())
            .fold(MultiPoly::one(ring), |acc, d| &acc * *d);
        let scaled = &c.to_poly().unwrap_or_else(|| c.num().clone()) * &cofactor;
        (idx.clone(), scaled)
    });
    let cleared =
        DiffForm::from_terms(ring, form.degree(), terms).expect("indices come from a valid form");
    (lambda, cleared)
}
