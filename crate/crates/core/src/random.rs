//! Random polynomials and forms for tests, the audit harness and fuzzing.
//!
//! Every generator takes the caller's RNG so seeded runs are reproducible.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cartier::gamma0;
use crate::forms::{DiffForm, MultiIndex, PolyForm, RatForm};
use crate::{Exponents, MultiPoly, RatFun, Ring};

/// Shape of generated objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    /// Largest per-variable exponent.
    pub max_deg: u32,
    /// Upper bound on terms per coefficient.
    pub max_terms: usize,
    /// Upper bound on nonzero coefficients per form.
    pub max_indices: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_deg: 6,
            max_terms: 4,
            max_indices: 3,
        }
    }
}

pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, ring: Ring) -> u32 {
    rng.gen_range(0..ring.p())
}

/// A polynomial with up to `shape.max_terms` terms; may be zero.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, ring: Ring, shape: Shape) -> MultiPoly {
    let count = rng.gen_range(0..=shape.max_terms);
    let terms = (0..count).map(|_| {
        let exps: Vec<u32> = (0..ring.nvars())
            .map(|_| rng.gen_range(0..=shape.max_deg))
            .collect();
        (Exponents::new(exps), rng.gen_range(1..ring.p()))
    });
    MultiPoly::from_terms(ring, terms.collect::<Vec<_>>())
}

pub fn random_nonzero_poly<R: Rng + ?Sized>(rng: &mut R, ring: Ring, shape: Shape) -> MultiPoly {
    loop {
        let f = random_poly(
            rng,
            ring,
            Shape {
                max_terms: shape.max_terms.max(1),
                ..shape
            },
        );
        if !f.is_zero() {
            return f;
        }
    }
}

/// A form of the given degree with random coefficients on a random set of
/// indices. Degrees above `n` give the zero form.
pub fn random_form<R: Rng + ?Sized>(
    rng: &mut R,
    ring: Ring,
    degree: usize,
    shape: Shape,
) -> PolyForm {
    let mut indices = MultiIndex::all(ring.nvars(), degree);
    indices.shuffle(rng);
    let count = rng.gen_range(0..=shape.max_indices.min(indices.len()));
    let mut form = DiffForm::zero(ring, degree);
    for idx in indices.into_iter().take(count) {
        form.accumulate(idx, random_poly(rng, ring, shape));
    }
    form
}

/// `dη` for a random `(r-1)`-form `η`; always p-closed. `r` must be at least 1.
pub fn random_exact_form<R: Rng + ?Sized>(
    rng: &mut R,
    ring: Ring,
    degree: usize,
    shape: Shape,
) -> PolyForm {
    assert!(degree >= 1, "exact forms have degree at least 1");
    let inner = Shape {
        max_deg: shape.max_deg + 1,
        ..shape
    };
    random_form(rng, ring, degree - 1, inner).exterior_derivative()
}

/// `dη + γ_0(α)`: closed, usually with a nonzero class.
pub fn random_closed_form<R: Rng + ?Sized>(
    rng: &mut R,
    ring: Ring,
    degree: usize,
    shape: Shape,
) -> PolyForm {
    let small = Shape {
        max_deg: shape.max_deg / ring.p(),
        ..shape
    };
    let alpha = random_form(rng, ring, degree, small);
    let twisted = gamma0(&alpha).expect("small exponents stay under the cap");
    if degree == 0 {
        return twisted;
    }
    random_exact_form(rng, ring, degree, shape)
        .checked_add(&twisted)
        .expect("same space")
}

/// A random p-th power `q^p` with `q` of low degree, used as a
/// differential-constant denominator.
pub fn random_pth_power<R: Rng + ?Sized>(rng: &mut R, ring: Ring) -> MultiPoly {
    let q = random_nonzero_poly(
        rng,
        ring,
        Shape {
            max_deg: 1,
            max_terms: 2,
            max_indices: 1,
        },
    );
    q.substitute_pth().expect("degree 1 stays under the cap")
}

/// A form whose coefficients are random polynomials over small random
/// denominators.
pub fn random_rational_form<R: Rng + ?Sized>(
    rng: &mut R,
    ring: Ring,
    degree: usize,
    shape: Shape,
) -> RatForm {
    let base = random_form(rng, ring, degree, shape);
    base.try_map_coefficients(|_, a| {
        let den = random_nonzero_poly(
            rng,
            ring,
            Shape {
                max_deg: 1,
                max_terms: 2,
                max_indices: 1,
            },
        );
        RatFun::new(a.clone(), den)
    })
    .expect("small denominators stay under the cap")
}

/// A closed rational form `ω / λ` with `ω` closed and `λ` a p-th power.
pub fn random_closed_rational_form<R: Rng + ?Sized>(
    rng: &mut R,
    ring: Ring,
    degree: usize,
    shape: Shape,
) -> RatForm {
    let form = random_closed_form(rng, ring, degree, shape);
    let lambda = random_pth_power(rng, ring);
    form.to_rational()
        .try_map_coefficients(|_, c| c.div_constant(&lambda))
        .expect("nonzero denominator")
}
