//! Integration of p-closed forms, and a brute-force exactness oracle.
//!
//! [`integrate`] follows the inductive construction over the variables
//! `z_1, ..., z_n`. At step `i` the remainder is free of `dz_1 .. dz_{i-1}`
//! and its coefficients are constants for `∂_1 .. ∂_{i-1}`. The step splits
//! it as `dz_i ∧ (z_i^{p-1} ω_i + η_i) + τ_i`, integrates the lower-degree
//! p-closed form `ω_i` recursively to `α` (so `z_i^{p-1} dz_i ∧ ω_i` is
//! `d(-z_i^{p-1} dz_i ∧ α)`), integrates `η_i` in `z_i` term by term to
//! `θ`, and keeps `ω - d(-z_i^{p-1} dz_i ∧ α) - dθ`, which no longer
//! involves `dz_i`.
//!
//! [`exactness_oracle`] knows nothing about that construction: it writes a
//! generic `(r-1)`-form with bounded exponents and solves `dη = ω` as a
//! linear system over `F_p`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::forms::{Coefficient, DiffForm, MultiIndex, PolyForm, RatForm};
use crate::linsolve::{self, Row};
use crate::operators::{decompose_unchecked, p_closed_violation};
use crate::ratfun::clear_denominators;
use crate::{Error, Exponents, MultiPoly};

/// A potential together with whatever part of the input it does not
/// account for: `d(potential) + residual = input`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationResult {
    pub potential: PolyForm,
    pub residual: PolyForm,
}

/// A form `η` with `dη = ω` for a p-closed polynomial form `ω` of degree
/// at least 1.
pub fn integrate(form: &PolyForm) -> Result<PolyForm, Error> {
    let result = integrate_with_residual(form)?;
    if let Some((idx, _)) = result.residual.terms().next() {
        return Err(Error::InternalResidual(idx.clone()));
    }
    Ok(result.potential)
}

/// Runs the construction after the p-closedness check and reports the
/// residual instead of failing on it.
pub fn integrate_with_residual(form: &PolyForm) -> Result<IntegrationResult, Error> {
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if let Some(idx) = p_closed_violation(form) {
        return Err(Error::NotPClosed(idx));
    }
    construct(form)
}

fn construct(form: &PolyForm) -> Result<IntegrationResult, Error> {
    let ring = form.ring();
    let p = ring.p();
    let mut remainder = form.clone();
    let mut potential = PolyForm::zero(ring, form.degree() - 1);
    for var in 0..ring.nvars() {
        if remainder.is_zero() {
            break;
        }
        let step = decompose_unchecked(&remainder, var);
        if !step.omega.is_zero() && step.omega.degree() > 0 {
            let inner = construct(&step.omega)?;
            if !inner.residual.is_zero() {
                // only reachable if the input was not p-closed
                break;
            }
            let lift = PolyForm::differential(ring, var)
                .wedge(&inner.potential)?
                .mul_poly(&-MultiPoly::var(ring, var).pow(p - 1));
            remainder = remainder.checked_sub(&lift.exterior_derivative())?;
            potential = potential.checked_add(&lift)?;
        }
        if !step.eta.is_zero() {
            let theta = step
                .eta
                .try_map_coefficients(|_, b| b.antiderivative(var))?;
            remainder = remainder.checked_sub(&theta.exterior_derivative())?;
            potential = potential.checked_add(&theta)?;
        }
    }
    Ok(IntegrationResult {
        potential,
        residual: remainder,
    })
}

/// Integrates a p-closed rational form by clearing its denominators with a
/// differential constant `λ` and dividing the polynomial potential by `λ`.
pub fn integrate_rational(form: &RatForm) -> Result<RatForm, Error> {
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if let Some(idx) = p_closed_violation(form) {
        return Err(Error::NotPClosed(idx));
    }
    let (lambda, cleared) = clear_denominators(form);
    let potential = integrate(&cleared)?;
    potential
        .to_rational()
        .try_map_coefficients(|_, c| c.div_constant(&lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Extra per-variable degree allowed in the potential; `None` means `p`.
    pub margin: Option<u32>,
    pub max_unknowns: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            margin: None,
            max_unknowns: 200_000,
        }
    }
}

/// Searches for `η` with `dη = ω` among all `(r-1)`-forms whose
/// per-variable degrees are at most `max_var_degree(ω) + margin`.
/// `Ok(None)` means no potential exists within that bound.
pub fn exactness_oracle(form: &PolyForm, config: &OracleConfig) -> Result<Option<PolyForm>, Error> {
    let ring = form.ring();
    let p = ring.prime();
    let n = ring.nvars();
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let bound = form.max_var_degree() + config.margin.unwrap_or(p.get());
    let indices = MultiIndex::all(n, form.degree() - 1);
    let per_index = (bound as usize + 1)
        .checked_pow(n as u32)
        .unwrap_or(usize::MAX);
    let unknowns = per_index.saturating_mul(indices.len());
    if unknowns > config.max_unknowns {
        return Err(Error::SystemTooLarge {
            unknowns,
            cap: config.max_unknowns,
        });
    }

    let monomials = exponent_box(n, bound);
    let mut equations: BTreeMap<(MultiIndex, Exponents), Row> = BTreeMap::new();
    let mut columns: Vec<(MultiIndex, Exponents)> = Vec::with_capacity(unknowns);
    for source in &indices {
        for e in &monomials {
            let col = columns.len();
            for k in 0..n {
                if e[k] % p.get() == 0 {
                    continue;
                }
                let Some((target, below)) = source.insert(k) else {
                    continue;
                };
                let mut lowered = e.to_vec();
                lowered[k] -= 1;
                let value = p.mul(p.sign(below), e[k] % p.get());
                equations
                    .entry((target, Exponents::new(lowered)))
                    .or_default()
                    .coeffs
                    .insert(col, value);
            }
            columns.push((source.clone(), e.clone()));
        }
    }
    for (idx, a) in form.terms() {
        for (e, c) in a.terms() {
            equations.entry((idx.clone(), e.clone())).or_default().rhs = c;
        }
    }

    let Some(solution) = linsolve::solve(p, columns.len(), equations.into_values().collect())
    else {
        return Ok(None);
    };
    let mut potential = DiffForm::zero(ring, form.degree() - 1);
    for ((idx, e), value) in columns.into_iter().zip(solution) {
        if value != 0 {
            potential.accumulate(idx, MultiPoly::monomial(ring, e, value));
        }
    }
    Ok(Some(potential))
}

fn exponent_box(n: usize, bound: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut current = alloc::vec![0u32; n];
    loop {
        out.push(Exponents::new(current.clone()));
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if current[k] < bound {
                current[k] += 1;
                break;
            }
            current[k] = 0;
            k += 1;
        }
    }
}

/// Largest per-variable degree of `η` minus that of `ω`, for the
/// empirical degree-growth check on potentials.
pub fn degree_growth<C: Coefficient>(form: &DiffForm<C>, potential: &DiffForm<C>) -> i64 {
    potential.max_var_degree() as i64 - form.max_var_degree() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Prime, RatFun, Ring};

    fn ring(p: u64, n: usize) -> Ring {
        Ring::new(Prime::new(p).unwrap(), n)
    }

    fn var(r: Ring, i: usize) -> MultiPoly {
        MultiPoly::var(r, i)
    }

    #[test]
    fn integrates_the_remark_form() {
        let r = ring(3, 2);
        let (x, y) = (var(r, 0), var(r, 1));
        let w = PolyForm::monomial(r, x.pow(2) + y.pow(2), &[0, 1]).unwrap();
        let eta = integrate(&w).unwrap();
        assert_eq!(eta.exterior_derivative(), w);
        // the classical witness x y^2 dy - x^2 y dx differs by a closed form
        let witness = PolyForm::monomial(r, &x * &y.pow(2), &[1]).unwrap()
            - PolyForm::monomial(r, &x.pow(2) * &y, &[0]).unwrap();
        assert_eq!(witness.exterior_derivative(), w);
        assert!(eta.checked_sub(&witness).unwrap().is_closed());
    }

    #[test]
    fn integrates_x_dx() {
        let r = ring(3, 1);
        let x = var(r, 0);
        let eta = integrate(&PolyForm::monomial(r, x.clone(), &[0]).unwrap()).unwrap();
        assert_eq!(eta, PolyForm::function(x.pow(2).scale(2)));
    }

    #[test]
    fn rejects_the_closed_non_exact_witness() {
        let r = ring(3, 1);
        let w = PolyForm::monomial(r, var(r, 0).pow(2), &[0]).unwrap();
        assert_eq!(integrate(&w), Err(Error::NotPClosed(MultiIndex::single(0))));
        assert_eq!(
            integrate(&PolyForm::function(var(r, 0))),
            Err(Error::DegreeZero)
        );
    }

    #[test]
    fn integrates_a_rational_form() {
        let r = ring(3, 1);
        let z = var(r, 0);
        // z/z^3 dz = z^-2 dz
        let coeff = RatFun::new(MultiPoly::one(r), z.pow(2)).unwrap();
        let w = RatForm::monomial(r, coeff, &[0]).unwrap();
        let eta = integrate_rational(&w).unwrap();
        assert_eq!(eta.exterior_derivative(), w);
        // -1/z = 2 z^2/z^3
        let expected = RatFun::new(MultiPoly::constant(r, 2), z).unwrap();
        assert_eq!(eta.as_function().unwrap(), expected);
    }

    #[test]
    fn top_degree_forms() {
        let r = ring(5, 3);
        let f = &var(r, 0).pow(3) * &var(r, 2);
        let w = PolyForm::monomial(r, f, &[0, 1, 2]).unwrap();
        let eta = integrate(&w).unwrap();
        assert_eq!(eta.exterior_derivative(), w);
    }

    #[test]
    fn nested_recursion() {
        // z1^2 z2^2 z3 dz1^dz2^dz3 at p = 3 forces ω_i at two levels
        let r = ring(3, 3);
        let f = &(&var(r, 0).pow(2) * &var(r, 1).pow(2)) * &var(r, 2);
        let w = PolyForm::monomial(r, f, &[0, 1, 2]).unwrap();
        let eta = integrate(&w).unwrap();
        assert_eq!(eta.exterior_derivative(), w);
    }

    #[test]
    fn oracle_examples() {
        let r = ring(3, 1);
        let x = var(r, 0);
        let w = PolyForm::monomial(r, x.clone(), &[0]).unwrap();
        let eta = exactness_oracle(&w, &OracleConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(eta.exterior_derivative(), w);

        let witness = PolyForm::monomial(r, x.pow(2), &[0]).unwrap();
        for margin in 0..12 {
            let config = OracleConfig {
                margin: Some(margin),
                ..OracleConfig::default()
            };
            assert_eq!(exactness_oracle(&witness, &config).unwrap(), None);
        }

        let big = OracleConfig {
            margin: Some(100),
            max_unknowns: 1000,
        };
        let r3 = ring(3, 3);
        let w3 = PolyForm::differential(r3, 0);
        assert!(matches!(
            exactness_oracle(&w3, &big),
            Err(Error::SystemTooLarge { .. })
        ));
    }
}
