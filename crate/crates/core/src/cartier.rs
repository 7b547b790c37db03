//! The map `γ_0`, the Cartier operator on closed forms, and cohomology
//! classes represented by irrational parts.
//!
//! `γ_0(a dz_I) = a(z^p) z_I^{p-1} dz_I`. The Cartier operator sends a
//! closed `ω = Σ a_I dz_I` to `Σ (-1)^r F_0^{-1}(∂_I^{p-1} a_I) dz_I`; the
//! sign is what makes `γ_0(C(ω)) - ω` exact, because
//! `∂_I^{p-1}(z_I^{p-1}) = ((p-1)!)^r = (-1)^r`.

use crate::forms::{Coefficient, DiffForm, MultiIndex, PolyForm, RatForm};
use crate::operators::{irrational_part, is_p_closed};
use crate::ratfun::clear_denominators;
use crate::{Error, MultiPoly, RatFun};

/// `Σ a_I(z^p) z_I^{p-1} dz_I`.
pub fn gamma0<C: Coefficient>(form: &DiffForm<C>) -> Result<DiffForm<C>, Error> {
    let ring = form.ring();
    let mut out = DiffForm::zero(ring, form.degree());
    for (idx, a) in form.terms() {
        let power =
            MultiPoly::power_product(ring, &idx.power_exponents(ring.nvars(), ring.p() - 1));
        let image = a.frobenius_twist()?.mul_poly(&power);
        image.check_degree()?;
        out.accumulate(idx.clone(), image);
    }
    Ok(out)
}

/// The Cartier operator on a closed polynomial form of degree at least 1.
pub fn cartier(form: &PolyForm) -> Result<PolyForm, Error> {
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if let Some(idx) = form.first_non_closed_index() {
        return Err(Error::NotClosed(idx));
    }
    let sign = form.ring().prime().sign(form.degree());
    form.try_map_coefficients(|idx, a| {
        Coefficient::derive_multi(a, idx)
            .unsubstitute_pth()
            .map(|b| b.scale(sign))
    })
}

/// The Cartier operator on a closed rational form. Clearing denominators
/// multiplies by a differential constant `λ = μ(z^p)`, and the operator
/// is linear over those up to untwisting, so `C(ω) = C(λω) / μ`.
pub fn cartier_rational(form: &RatForm) -> Result<RatForm, Error> {
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if let Some(idx) = form.first_non_closed_index() {
        return Err(Error::NotClosed(idx));
    }
    let (lambda, cleared) = clear_denominators(form);
    let mu = lambda.unsubstitute_pth()?;
    cartier(&cleared)?
        .to_rational()
        .try_map_coefficients(|_, c| c.checked_div(&RatFun::from_poly(mu.clone())))
}

/// The canonical representative of the class of a closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyWitness<C> {
    /// `Q_r(ω)`.
    pub representative: DiffForm<C>,
    /// Whether `ω - representative` was found p-closed.
    pub exact_difference_check: bool,
}

pub fn class_representative<C: Coefficient>(
    form: &DiffForm<C>,
) -> Result<CohomologyWitness<C>, Error> {
    if let Some(idx) = form.first_non_closed_index() {
        return Err(Error::NotClosed(idx));
    }
    let representative = irrational_part(form)?;
    let exact_difference_check = is_p_closed(&form.checked_sub(&representative)?);
    Ok(CohomologyWitness {
        representative,
        exact_difference_check,
    })
}

/// Whether two closed forms of the same degree differ by an exact form.
pub fn same_class<C: Coefficient>(a: &DiffForm<C>, b: &DiffForm<C>) -> Result<bool, Error> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    for form in [a, b] {
        if let Some(idx) = form.first_non_closed_index() {
            return Err(Error::NotClosed(idx));
        }
    }
    Ok(is_p_closed(&a.checked_sub(b)?))
}

/// Whether `z_I^{p-1}` divides the coefficient exactly once in each
/// variable of `I`, i.e. whether the term lies in the image of `γ_0`.
pub fn in_gamma0_image(coeff: &MultiPoly, index: &MultiIndex) -> bool {
    let p = coeff.ring().p();
    coeff.terms().all(|(e, _)| {
        e.iter().enumerate().all(|(k, &ek)| {
            if index.contains(k) {
                ek % p == p - 1
            } else {
                ek % p == 0
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Prime, Ring};

    fn ring(p: u64, n: usize) -> Ring {
        Ring::new(Prime::new(p).unwrap(), n)
    }

    fn var(r: Ring, i: usize) -> MultiPoly {
        MultiPoly::var(r, i)
    }

    fn form(r: Ring, c: MultiPoly, idx: &[usize]) -> PolyForm {
        PolyForm::monomial(r, c, idx).unwrap()
    }

    #[test]
    fn gamma0_examples() {
        let r = ring(3, 1);
        let z = var(r, 0);
        assert_eq!(
            gamma0(&PolyForm::differential(r, 0)).unwrap(),
            form(r, z.pow(2), &[0])
        );
        assert_eq!(gamma0(&PolyForm::zero(r, 1)).unwrap(), PolyForm::zero(r, 1));
        assert_eq!(
            gamma0(&form(r, z.clone(), &[0])).unwrap(),
            form(r, z.pow(5), &[0])
        );
        assert!(in_gamma0_image(&z.pow(5), &MultiIndex::single(0)));
        assert!(!in_gamma0_image(&z.pow(4), &MultiIndex::single(0)));
    }

    #[test]
    fn cartier_examples() {
        let r = ring(3, 1);
        let z = var(r, 0);
        let w = form(r, z.pow(2), &[0]);
        let c = cartier(&w).unwrap();
        assert_eq!(c, PolyForm::differential(r, 0));
        assert_eq!(gamma0(&c).unwrap(), w);

        let r2 = ring(3, 2);
        let eta = form(r2, &var(r2, 0).pow(4) * &var(r2, 1).pow(2), &[1]);
        assert!(cartier(&eta.exterior_derivative()).unwrap().is_zero());
        assert!(cartier(&PolyForm::zero(r2, 2)).unwrap().is_zero());

        let not_closed = form(r2, var(r2, 1), &[0]);
        assert_eq!(
            cartier(&not_closed),
            Err(Error::NotClosed(
                MultiIndex::new(alloc::vec![0, 1]).unwrap()
            ))
        );
    }

    #[test]
    fn cartier_without_the_sign_breaks_the_class() {
        let r = ring(5, 1);
        let z = var(r, 0);
        let w = form(r, z.pow(4), &[0]);
        let back = gamma0(&cartier(&w).unwrap()).unwrap();
        assert!(same_class(&back, &w).unwrap());
        let unsigned = gamma0(&cartier(&w).unwrap().scale(r.prime().sign(1))).unwrap();
        assert!(!same_class(&unsigned, &w).unwrap());
    }

    #[test]
    fn cartier_on_rational_forms() {
        let r = ring(3, 1);
        let z = var(r, 0);
        // z^2/z^3 dz = dz/z, whose image under C is dz/z
        let w =
            RatForm::monomial(r, RatFun::new(MultiPoly::one(r), z.clone()).unwrap(), &[0]).unwrap();
        let c = cartier_rational(&w).unwrap();
        assert_eq!(c, w);
        assert!(same_class(&gamma0(&c).unwrap(), &w).unwrap());
    }

    #[test]
    fn class_examples() {
        let r = ring(3, 1);
        let x = var(r, 0);
        let w = form(r, x.pow(2), &[0]);
        let witness = class_representative(&w).unwrap();
        assert_eq!(witness.representative, w);
        assert!(witness.exact_difference_check);

        let mixed = form(r, x.pow(2) + x.clone(), &[0]);
        assert_eq!(class_representative(&mixed).unwrap().representative, w);
        assert!(same_class(&mixed, &w).unwrap());

        let exact = form(r, x.clone(), &[0]);
        assert!(class_representative(&exact)
            .unwrap()
            .representative
            .is_zero());
        assert!(!same_class(&w, &PolyForm::zero(r, 1)).unwrap());
        assert_eq!(
            same_class(&w, &PolyForm::function(x)),
            Err(Error::DegreeMismatch(1, 0))
        );
    }
}
