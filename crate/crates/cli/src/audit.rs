//! Randomized audit of the identities the kernel relies on, plus a few
//! published variants that do not hold as stated.
//!
//! Every claim gets its own ChaCha8 stream derived from the seed, so the
//! report is a pure function of `(seed, trials)` and claims can run in
//! parallel. Contested claims spend trial 0 on a fixed candidate
//! counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use pforms_core::cartier::{cartier, gamma0, same_class};
use pforms_core::operators::{
    irrational_part, is_p_closed, o_operator, o_operator_expanded, o_r, p_operator, phi,
    split_complete_restricted, split_rational_irrational,
};
use pforms_core::poincare::{exactness_oracle, integrate, OracleConfig};
use pforms_core::random::{
    random_closed_form, random_exact_form, random_form, random_poly, random_pth_power, Shape,
};
use pforms_core::{MultiIndex, MultiPoly, PolyForm, Prime, Ring};

use crate::document::FormDocument;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Must hold; a failure is a bug.
    Verified,
    /// Expected to fail; the report carries the counterexample.
    Contested,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub id: &'static str,
    pub status: Status,
    pub statement: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub counterexample: Option<FormDocument>,
    pub counterexample_text: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub trials: usize,
    pub claims: Vec<ClaimRecord>,
}

impl AuditReport {
    /// Verified claims that failed at least once.
    pub fn regressions(&self) -> Vec<&ClaimRecord> {
        self.claims
            .iter()
            .filter(|c| c.status == Status::Verified && c.failures > 0)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {} trials {}\n", self.seed, self.trials);
        for c in &self.claims {
            let verdict = match (c.status, c.failures) {
                (Status::Verified, 0) => "PASS",
                (Status::Verified, _) => "FAIL",
                (Status::Contested, 0) => "UNREFUTED",
                (Status::Contested, _) => "REFUTED",
            };
            let status = match c.status {
                Status::Verified => "verified",
                Status::Contested => "contested",
            };
            out.push_str(&format!(
                "{verdict:<9} {status:<9} {:<22} {}/{} failed  {}\n",
                c.id, c.failures, c.trials, c.statement
            ));
            if let (Some(doc), Some(text)) = (&c.counterexample, &c.counterexample_text) {
                out.push_str(&format!(
                    "          counterexample (p={}, n={}): {}\n",
                    doc.p, doc.n, text
                ));
            }
        }
        out
    }
}

enum Outcome {
    Pass,
    Fail(PolyForm),
    /// The sampled configuration does not meet the claim's hypotheses.
    Skip,
}

use Outcome::{Fail, Pass, Skip};

type Check = fn(&mut ChaCha8Rng, Ring) -> Outcome;

struct Claim {
    id: &'static str,
    status: Status,
    statement: &'static str,
    /// Smallest number of variables the claim needs.
    min_n: usize,
    check: Check,
    candidate: Option<fn() -> (Ring, Outcome)>,
}

fn ring(p: u64, n: usize) -> Ring {
    Ring::new(Prime::new(p).unwrap(), n)
}

fn shape() -> Shape {
    Shape {
        max_deg: 5,
        max_terms: 3,
        max_indices: 3,
    }
}

fn degree_in(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

fn coefficient_case(rng: &mut ChaCha8Rng, ring: Ring) -> (MultiPoly, MultiIndex) {
    let f = random_poly(rng, ring, shape());
    let r = degree_in(rng, 1, ring.nvars());
    let all = MultiIndex::all(ring.nvars(), r);
    let j = all[rng.gen_range(0..all.len())].clone();
    (f, j)
}

fn as_form(ring: Ring, f: MultiPoly, j: &MultiIndex) -> PolyForm {
    PolyForm::monomial(ring, f, j.as_slice()).unwrap()
}

fn verdict(ok: bool, witness: impl FnOnce() -> PolyForm) -> Outcome {
    if ok {
        Pass
    } else {
        Fail(witness())
    }
}

/// `O_J` as printed with minus signs: `Π_{i∈J}(1 - P_i) - 1`.
fn o_minus(f: &MultiPoly, j: &MultiIndex) -> MultiPoly {
    let mut g = f.clone();
    for i in j.iter() {
        let pi = p_operator(&g, &MultiIndex::single(i)).unwrap();
        g = &g - &pi;
    }
    &g - f
}

/// `O_r` assembled from the expanded subset sums.
fn o_r_expanded(form: &PolyForm) -> PolyForm {
    form.map_coefficients(|idx, a| -o_operator_expanded(a, idx).unwrap())
}

fn x_squared_dx_p3() -> (Ring, PolyForm) {
    let r = ring(3, 1);
    (
        r,
        as_form(r, MultiPoly::var(r, 0).pow(2), &MultiIndex::single(0)),
    )
}

fn claims() -> Vec<Claim> {
    vec![
        Claim {
            id: "d-squared",
            status: Status::Verified,
            statement: "d(d(w)) = 0",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 0, ring.nvars());
                let w = random_form(rng, ring, r, shape());
                verdict(
                    w.exterior_derivative().exterior_derivative().is_zero(),
                    || w,
                )
            },
            candidate: None,
        },
        Claim {
            id: "exact-is-p-closed",
            status: Status::Verified,
            statement: "d(eta) is p-closed",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_exact_form(rng, ring, r, shape());
                verdict(is_p_closed(&w), || w)
            },
            candidate: None,
        },
        Claim {
            id: "p-closed-integrates",
            status: Status::Verified,
            statement: "a p-closed form w has eta with d(eta) = w",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let closed = random_closed_form(rng, ring, r, shape());
                let rational = split_rational_irrational(&closed).unwrap().rational;
                let w = random_exact_form(rng, ring, r, shape()) + rational;
                let ok = integrate(&w).is_ok_and(|eta| eta.exterior_derivative() == w);
                verdict(ok, || w)
            },
            candidate: None,
        },
        Claim {
            id: "non-exact-witness",
            status: Status::Verified,
            statement: "z^(p-1) dz is closed and not exact",
            min_n: 1,
            check: |_, ring| {
                let one = ring_one_var(ring);
                let w = as_form(
                    one,
                    MultiPoly::var(one, 0).pow(one.p() - 1),
                    &MultiIndex::single(0),
                );
                let none =
                    exactness_oracle(&w, &OracleConfig::default()).is_ok_and(|s| s.is_none());
                verdict(
                    w.is_closed() && !is_p_closed(&w) && integrate(&w).is_err() && none,
                    || w,
                )
            },
            candidate: None,
        },
        Claim {
            id: "p-closed-subspace",
            status: Status::Verified,
            statement: "lambda * w is p-closed for p-closed w and a p-th power lambda",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let lam = random_pth_power(rng, ring);
                let w = random_exact_form(rng, ring, r, shape()).mul_poly(&lam);
                verdict(is_p_closed(&w), || w)
            },
            candidate: None,
        },
        Claim {
            id: "phi-constant",
            status: Status::Verified,
            statement: "phi(w) has differential-constant coefficients for closed w",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                verdict(
                    phi(&w).terms().all(|(_, c)| c.is_differential_constant()),
                    || w,
                )
            },
            candidate: None,
        },
        Claim {
            id: "phi-p-closed",
            status: Status::Verified,
            statement: "phi(w) is p-closed for closed w",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                verdict(is_p_closed(&phi(&w)), || w)
            },
            candidate: None,
        },
        Claim {
            id: "p-single-square",
            status: Status::Verified,
            statement: "P_i P_i = -P_i",
            min_n: 1,
            check: |rng, ring| {
                let f = random_poly(rng, ring, shape());
                let i = MultiIndex::single(rng.gen_range(0..ring.nvars()));
                let once = p_operator(&f, &i).unwrap();
                verdict(p_operator(&once, &i).unwrap() == -once, || {
                    as_form(ring, f, &i)
                })
            },
            candidate: None,
        },
        Claim {
            id: "p-multi-square",
            status: Status::Verified,
            statement: "P_J P_J = (-1)^|J| P_J",
            min_n: 1,
            check: |rng, ring| {
                let (f, j) = coefficient_case(rng, ring);
                let once = p_operator(&f, &j).unwrap();
                let sign = ring.prime().sign(j.len());
                verdict(p_operator(&once, &j).unwrap() == once.scale(sign), || {
                    as_form(ring, f, &j)
                })
            },
            candidate: None,
        },
        Claim {
            id: "q-idempotent",
            status: Status::Verified,
            statement: "Q_r Q_r = Q_r",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_form(rng, ring, r, shape());
                let q = irrational_part(&w).unwrap();
                verdict(irrational_part(&q).unwrap() == q, || w)
            },
            candidate: None,
        },
        Claim {
            id: "q-kills-rational",
            status: Status::Verified,
            statement: "Q_r(w - Q_r(w)) = 0",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_form(rng, ring, r, shape());
                let rational = w.checked_sub(&irrational_part(&w).unwrap()).unwrap();
                verdict(irrational_part(&rational).unwrap().is_zero(), || w)
            },
            candidate: None,
        },
        Claim {
            id: "split-ri-laws",
            status: Status::Verified,
            statement: "closed w: w_R p-closed, w_I closed, w_I = 0 iff w p-closed",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                let s = split_rational_irrational(&w).unwrap();
                let ok = is_p_closed(&s.rational)
                    && s.irrational.is_closed()
                    && s.irrational.is_zero() == is_p_closed(&w)
                    && s.rational.checked_add(&s.irrational).unwrap() == w;
                verdict(ok, || w)
            },
            candidate: None,
        },
        Claim {
            id: "exactness-equivalence",
            status: Status::Verified,
            statement: "oracle solvable <=> p-closed <=> closed and Q_r(w) = 0",
            min_n: 1,
            check: |rng, ring| {
                let small = Shape {
                    max_deg: 3,
                    max_terms: 2,
                    max_indices: 2,
                };
                let r = degree_in(rng, 1, ring.nvars());
                let w = match rng.gen_range(0..3) {
                    0 => random_form(rng, ring, r, small),
                    1 => random_closed_form(rng, ring, r, small),
                    _ => random_exact_form(rng, ring, r, small),
                };
                let Ok(found) = exactness_oracle(&w, &OracleConfig::default()) else {
                    return Skip;
                };
                let pc = is_p_closed(&w);
                let q = w.is_closed() && irrational_part(&w).unwrap().is_zero();
                verdict(found.is_some() == pc && pc == q, || w)
            },
            candidate: None,
        },
        Claim {
            id: "o-expanded",
            status: Status::Verified,
            statement: "prod(1 + P_i) - 1 equals the sum over nonempty subsets",
            min_n: 1,
            check: |rng, ring| {
                let (f, j) = coefficient_case(rng, ring);
                let ok = o_operator(&f, &j).unwrap() == o_operator_expanded(&f, &j).unwrap();
                verdict(ok, || as_form(ring, f, &j))
            },
            candidate: None,
        },
        Claim {
            id: "o-square",
            status: Status::Verified,
            statement: "O_J O_J = -O_J",
            min_n: 1,
            check: |rng, ring| {
                let (f, j) = coefficient_case(rng, ring);
                let once = o_operator(&f, &j).unwrap();
                verdict(o_operator(&once, &j).unwrap() == -once, || {
                    as_form(ring, f, &j)
                })
            },
            candidate: None,
        },
        Claim {
            id: "o-r-idempotent",
            status: Status::Verified,
            statement: "O_r O_r = O_r",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_form(rng, ring, r, shape());
                let once = o_r(&w).unwrap();
                verdict(o_r(&once).unwrap() == once, || w)
            },
            candidate: None,
        },
        Claim {
            id: "o-obstruction",
            status: Status::Verified,
            statement: "d_i^(p-1) O_J = -d_i^(p-1) for i in J",
            min_n: 1,
            check: |rng, ring| {
                let (f, j) = coefficient_case(rng, ring);
                let i = j.as_slice()[rng.gen_range(0..j.len())];
                let k = ring.p() - 1;
                let lhs = o_operator(&f, &j).unwrap().partial_pow(i, k).unwrap();
                let rhs = -f.partial_pow(i, k).unwrap();
                verdict(lhs == rhs, || as_form(ring, f, &j))
            },
            candidate: None,
        },
        Claim {
            id: "split-ct-closed",
            status: Status::Verified,
            statement: "closed w: w_C and w_T are closed",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                let s = split_complete_restricted(&w).unwrap();
                verdict(s.complete.is_closed() && s.restricted.is_closed(), || w)
            },
            candidate: None,
        },
        Claim {
            id: "gamma0-injective",
            status: Status::Verified,
            statement: "C(gamma0(a)) = a",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let small = Shape {
                    max_deg: 3,
                    ..shape()
                };
                let a = random_form(rng, ring, r, small);
                let ok = gamma0(&a).and_then(|g| cartier(&g)).is_ok_and(|c| c == a);
                verdict(ok, || a)
            },
            candidate: None,
        },
        Claim {
            id: "gamma0-surjective",
            status: Status::Verified,
            statement: "gamma0(C(w)) - w is exact for closed w",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                let ok = cartier(&w)
                    .and_then(|c| gamma0(&c))
                    .and_then(|g| same_class(&g, &w))
                    .unwrap_or(false);
                verdict(ok, || w)
            },
            candidate: None,
        },
        Claim {
            id: "cartier-kills-exact",
            status: Status::Verified,
            statement: "C(d(eta)) = 0",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_exact_form(rng, ring, r, shape());
                verdict(cartier(&w).is_ok_and(|c| c.is_zero()), || w)
            },
            candidate: None,
        },
        Claim {
            id: "o-r-kills-exact",
            status: Status::Contested,
            statement: "O_r(d(eta)) = 0",
            min_n: 2,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_exact_form(rng, ring, r, shape());
                verdict(o_r_expanded(&w).is_zero(), || w)
            },
            candidate: Some(|| {
                // eta = z1 z2 dz1 at p = 2
                let r = ring(2, 2);
                let eta = as_form(
                    r,
                    &MultiPoly::var(r, 0) * &MultiPoly::var(r, 1),
                    &MultiIndex::single(0),
                );
                let w = eta.exterior_derivative();
                (r, verdict(o_r_expanded(&w).is_zero(), || w))
            }),
        },
        Claim {
            id: "o-commutes-partial",
            status: Status::Contested,
            statement: "d_k O_J = O_J d_k for every k",
            min_n: 1,
            check: |rng, ring| {
                let (f, j) = coefficient_case(rng, ring);
                let k = rng.gen_range(0..ring.nvars());
                let lhs = o_operator(&f, &j).unwrap().partial(k).unwrap();
                let rhs = o_operator(&f.partial(k).unwrap(), &j).unwrap();
                verdict(lhs == rhs, || as_form(ring, f, &j))
            },
            candidate: Some(|| {
                let (r, w) = x_squared_dx_p3();
                let f = w.coefficient(&MultiIndex::single(0)).unwrap().clone();
                let j = MultiIndex::single(0);
                let lhs = o_operator(&f, &j).unwrap().partial(0).unwrap();
                let rhs = o_operator(&f.partial(0).unwrap(), &j).unwrap();
                (r, verdict(lhs == rhs, || w))
            }),
        },
        Claim {
            id: "o-r-anti-idempotent",
            status: Status::Contested,
            statement: "O_r O_r = -O_r",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_form(rng, ring, r, shape());
                let once = o_r(&w).unwrap();
                verdict(o_r(&once).unwrap() == -once, || w)
            },
            candidate: Some(|| {
                let (r, w) = x_squared_dx_p3();
                let once = o_r(&w).unwrap();
                (r, verdict(o_r(&once).unwrap() == -once, || w))
            }),
        },
        Claim {
            id: "o-minus-singleton",
            status: Status::Contested,
            statement: "(1 - P_i) - 1 = P_i",
            min_n: 1,
            check: |rng, ring| {
                let f = random_poly(rng, ring, shape());
                let i = MultiIndex::single(rng.gen_range(0..ring.nvars()));
                verdict(o_minus(&f, &i) == p_operator(&f, &i).unwrap(), || {
                    as_form(ring, f, &i)
                })
            },
            candidate: Some(|| {
                let (r, w) = x_squared_dx_p3();
                let f = w.coefficient(&MultiIndex::single(0)).unwrap().clone();
                let i = MultiIndex::single(0);
                (
                    r,
                    verdict(o_minus(&f, &i) == p_operator(&f, &i).unwrap(), || w),
                )
            }),
        },
        Claim {
            id: "split-ct-sign",
            status: Status::Contested,
            statement: "O_r(w_T) = -w_T",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_form(rng, ring, r, shape());
                let t = split_complete_restricted(&w).unwrap().restricted;
                verdict(o_r(&t).unwrap() == -t, || w)
            },
            candidate: Some(|| {
                let (r, w) = x_squared_dx_p3();
                let t = split_complete_restricted(&w).unwrap().restricted;
                (r, verdict(o_r(&t).unwrap() == -t, || w))
            }),
        },
        Claim {
            id: "psi-unsigned",
            status: Status::Contested,
            statement: "w - sum P_I(a_I) dz_I is p-closed for closed w",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                verdict(psi_unsigned_holds(&w), || w)
            },
            candidate: Some(|| {
                let (r, w) = x_squared_dx_p3();
                (r, verdict(psi_unsigned_holds(&w), || w))
            }),
        },
        Claim {
            id: "cartier-unsigned",
            status: Status::Contested,
            statement: "gamma0(sum F0^-1(d_I^(p-1) a_I) dz_I) - w is exact for closed w",
            min_n: 1,
            check: |rng, ring| {
                let r = degree_in(rng, 1, ring.nvars());
                let w = random_closed_form(rng, ring, r, shape());
                verdict(cartier_unsigned_holds(&w), || w)
            },
            candidate: Some(|| {
                let (r, w) = x_squared_dx_p3();
                (r, verdict(cartier_unsigned_holds(&w), || w))
            }),
        },
    ]
}

/// The single-variable ring with the same prime.
fn ring_one_var(ring: Ring) -> Ring {
    Ring::new(ring.prime(), 1).with_max_degree(ring.max_degree())
}

fn psi_unsigned_holds(w: &PolyForm) -> bool {
    let psi = w.map_coefficients(|idx, a| p_operator(a, idx).unwrap());
    is_p_closed(&w.checked_sub(&psi).unwrap())
}

fn cartier_unsigned_holds(w: &PolyForm) -> bool {
    let sign = w.ring().prime().sign(w.degree());
    let unsigned = cartier(w).unwrap().scale(sign);
    same_class(&gamma0(&unsigned).unwrap(), w).unwrap()
}

const PRIMES: [u64; 3] = [2, 3, 5];

fn run_claim(index: usize, claim: &Claim, seed: u64, trials: usize) -> ClaimRecord {
    let stream = seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut record = ClaimRecord {
        id: claim.id,
        status: claim.status,
        statement: claim.statement,
        trials: 0,
        failures: 0,
        counterexample: None,
        counterexample_text: None,
    };
    let note = |record: &mut ClaimRecord, outcome: Outcome| match outcome {
        Skip => {}
        Pass => record.trials += 1,
        Fail(w) => {
            record.trials += 1;
            record.failures += 1;
            if record.counterexample.is_none() {
                record.counterexample_text = Some(w.to_string());
                record.counterexample = Some(FormDocument::from_form(&w.to_rational()));
            }
        }
    };
    for trial in 0..trials {
        if trial == 0 {
            if let Some(candidate) = claim.candidate {
                note(&mut record, candidate().1);
                continue;
            }
        }
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let n = rng.gen_range(claim.min_n..=3);
        note(&mut record, (claim.check)(&mut rng, ring(p, n)));
    }
    record
}

/// Runs every claim for `trials` trials.
pub fn run_audit(seed: u64, trials: usize) -> AuditReport {
    let claims = claims();
    let records = claims
        .par_iter()
        .enumerate()
        .map(|(i, c)| run_claim(i, c, seed, trials))
        .collect();
    AuditReport {
        seed,
        trials,
        claims: records,
    }
}
