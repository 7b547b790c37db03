//! Characteristic-p operators on forms.
//!
//! Conventions:
//!
//! * `P_J = Π_{i∈J} z_i^{p-1} ∂_i^{p-1}` and the irrational part is
//!   `Q_r(ω) = (-1)^r Σ_J P_J(a_J) dz_J`. The sign makes `∂_J^{p-1}` kill
//!   the rational part `ω - Q_r(ω)`, since `∂_J^{p-1}(z_J^{p-1}) = (-1)^r`.
//! * `O_J = Π_{i∈J} (1 + P_i) - 1`, which equals the sum of `Π_{i∈S} P_i`
//!   over nonempty `S ⊆ J` and satisfies `O_J O_J = -O_J`.
//! * `O_r(ω) = -Σ_J O_J(a_J) dz_J`, an idempotent, so `ω = ω_C + ω_T`
//!   with `ω_T = O_r(ω)` is a projector split.

use alloc::vec::Vec;

use crate::forms::{Coefficient, DiffForm, MultiIndex, PolyForm};
use crate::{Error, MultiPoly, Ring};

fn check_index(ring: Ring, index: &MultiIndex) -> Result<(), Error> {
    index.iter().try_for_each(|i| ring.check_var(i))
}

/// The rational/irrational split of a closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitRI<C> {
    /// `ω_R`, exact when the input is closed.
    pub rational: DiffForm<C>,
    /// `ω_I = Q_r(ω)`.
    pub irrational: DiffForm<C>,
}

/// The completely-integrable/restricted split of a polynomial form.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitCT {
    /// `ω_C`, with `O_r(ω_C) = 0`.
    pub complete: PolyForm,
    /// `ω_T = O_r(ω)`.
    pub restricted: PolyForm,
}

/// Closed, and `∂_I^{p-1}(a_I) = 0` for every index. A 0-form is p-closed
/// exactly when it is a constant.
pub fn is_p_closed<C: Coefficient>(form: &DiffForm<C>) -> bool {
    p_closed_violation(form).is_none()
}

/// The first multi-index witnessing that `form` is not p-closed.
pub fn p_closed_violation<C: Coefficient>(form: &DiffForm<C>) -> Option<MultiIndex> {
    if form.degree() == 0 {
        let f = form.as_function().unwrap();
        return f.as_constant().is_none().then(MultiIndex::empty);
    }
    if let Some(idx) = form.first_non_closed_index() {
        return Some(idx);
    }
    form.terms()
        .find(|(idx, a)| !a.derive_multi(idx).is_zero())
        .map(|(idx, _)| idx.clone())
}

/// Closed, and each `a_I` is killed by `∂_{i_s}^{p-1}` for some `i_s ∈ I`.
/// Sufficient for p-closedness but not necessary.
pub fn corollary_condition<C: Coefficient>(form: &DiffForm<C>) -> bool {
    if form.degree() == 0 || !form.is_closed() {
        return false;
    }
    let k = form.ring().p() - 1;
    form.terms()
        .all(|(idx, a)| idx.iter().any(|i| a.derive_pow(i, k).is_zero()))
}

/// `φ(Σ a_I dz_I) = Σ ∂_I^{p-1}(a_I) dz_I`.
pub fn phi<C: Coefficient>(form: &DiffForm<C>) -> DiffForm<C> {
    form.map_coefficients(|idx, a| a.derive_multi(idx))
}

/// `Π_{i∈J} z_i^{p-1} ∂_i^{p-1}` applied to a coefficient.
pub fn p_operator<C: Coefficient>(f: &C, index: &MultiIndex) -> Result<C, Error> {
    let ring = f.ring();
    check_index(ring, index)?;
    Ok(apply_p(f, index))
}

fn apply_p<C: Coefficient>(f: &C, index: &MultiIndex) -> C {
    let ring = f.ring();
    let power = MultiPoly::power_product(ring, &index.power_exponents(ring.nvars(), ring.p() - 1));
    f.derive_multi(index).mul_poly(&power)
}

/// `Q_r(ω) = (-1)^r Σ_J P_J(a_J) dz_J`.
pub fn irrational_part<C: Coefficient>(form: &DiffForm<C>) -> Result<DiffForm<C>, Error> {
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let sign = form.ring().prime().sign(form.degree());
    Ok(form.map_coefficients(|idx, a| apply_p(a, idx).scale(sign)))
}

/// `ω = ω_R + ω_I` for a closed form.
pub fn split_rational_irrational<C: Coefficient>(form: &DiffForm<C>) -> Result<SplitRI<C>, Error> {
    if let Some(idx) = form.first_non_closed_index() {
        return Err(Error::NotClosed(idx));
    }
    split_rational_irrational_unchecked(form)
}

/// The same split without the closedness check; the guarantees on the two
/// parts then do not hold in general.
pub fn split_rational_irrational_unchecked<C: Coefficient>(
    form: &DiffForm<C>,
) -> Result<SplitRI<C>, Error> {
    let irrational = irrational_part(form)?;
    let rational = form.checked_sub(&irrational)?;
    Ok(SplitRI {
        rational,
        irrational,
    })
}

/// One step of the p-decomposition along `z_{i+1}`:
/// `ω = dz_i ∧ (z_i^{p-1} ω_i + η_i) + τ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionStep {
    pub omega: PolyForm,
    pub eta: PolyForm,
    pub tau: PolyForm,
}

impl DecompositionStep {
    /// `dz_i ∧ (z_i^{p-1} ω_i + η_i) + τ_i`.
    pub fn recompose(&self, var: usize) -> PolyForm {
        let ring = self.tau.ring();
        let dzi = PolyForm::differential(ring, var);
        let lift = self
            .omega
            .mul_poly(&MultiPoly::var(ring, var).pow(ring.p() - 1));
        let inner = lift.checked_add(&self.eta).unwrap();
        dzi.wedge(&inner).unwrap().checked_add(&self.tau).unwrap()
    }
}

/// Splits each `dz_i`-coefficient by the residue of its `z_i`-exponents:
/// terms with exponent `≡ p-1 (mod p)` contribute `z_i^{p-1}·ω_i`, the rest
/// go to `η_i`, and `dz_i`-free terms form `τ_i`.
pub fn p_decompose_step(form: &PolyForm, var: usize) -> Result<DecompositionStep, Error> {
    let ring = form.ring();
    ring.check_var(var)?;
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if let Some(idx) = p_closed_violation(form) {
        return Err(Error::NotPClosed(idx));
    }
    Ok(decompose_unchecked(form, var))
}

pub(crate) fn decompose_unchecked(form: &PolyForm, var: usize) -> DecompositionStep {
    let ring = form.ring();
    let p = ring.p();
    let r = form.degree();
    let mut omega = PolyForm::zero(ring, r - 1);
    let mut eta = PolyForm::zero(ring, r - 1);
    let mut tau = PolyForm::zero(ring, r);
    let mut unshift = alloc::vec![0u32; ring.nvars()];
    unshift[var] = p - 1;
    for (idx, a) in form.terms() {
        let Some((rest, pos)) = idx.remove(var) else {
            tau.accumulate(idx.clone(), a.clone());
            continue;
        };
        // dz_I = (-1)^pos dz_i ∧ dz_{I-i}
        let b = a.scale(ring.prime().sign(pos));
        let obstructed = b.filter_terms(|e| e[var] % p == p - 1);
        let free = b.filter_terms(|e| e[var] % p != p - 1);
        omega.accumulate(rest.clone(), obstructed.unshift(&unshift));
        eta.accumulate(rest, free);
    }
    DecompositionStep { omega, eta, tau }
}

fn check_polynomial_index(f: &MultiPoly, index: &MultiIndex) -> Result<(), Error> {
    check_index(f.ring(), index)
}

/// `O_J = Π_{i∈J}(1 + P_i) - 1`, evaluated as a product.
pub fn o_operator(f: &MultiPoly, index: &MultiIndex) -> Result<MultiPoly, Error> {
    check_polynomial_index(f, index)?;
    Ok(apply_o(f, index))
}

fn apply_o(f: &MultiPoly, index: &MultiIndex) -> MultiPoly {
    let mut g = f.clone();
    for i in index.iter() {
        let pi = apply_p(&g, &MultiIndex::single(i));
        g = &g + &pi;
    }
    &g - f
}

/// `O_J` in expanded form: `Σ_{∅≠S⊆J} Π_{i∈S} P_i`, one term per subset.
pub fn o_operator_expanded(f: &MultiPoly, index: &MultiIndex) -> Result<MultiPoly, Error> {
    check_polynomial_index(f, index)?;
    let vars: Vec<usize> = index.iter().collect();
    let mut total = MultiPoly::zero(f.ring());
    for mask in 1u64..(1u64 << vars.len()) {
        let mut g = f.clone();
        for (bit, &i) in vars.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                g = apply_p(&g, &MultiIndex::single(i));
            }
        }
        total = &total + &g;
    }
    Ok(total)
}

/// `O_r(ω) = -Σ_J O_J(a_J) dz_J`.
pub fn o_r(form: &PolyForm) -> Result<PolyForm, Error> {
    if form.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    Ok(form.map_coefficients(|idx, a| -apply_o(a, idx)))
}

/// `ω = ω_C + ω_T` with `ω_T = O_r(ω)`.
pub fn split_complete_restricted(form: &PolyForm) -> Result<SplitCT, Error> {
    let restricted = o_r(form)?;
    let complete = form.checked_sub(&restricted)?;
    Ok(SplitCT {
        complete,
        restricted,
    })
}
