use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pforms_core::cartier::{cartier, gamma0, same_class};
use pforms_core::operators::{
    corollary_condition, irrational_part, is_p_closed, o_operator, o_operator_expanded, o_r,
    p_decompose_step, p_operator, phi, split_complete_restricted, split_rational_irrational,
};
use pforms_core::poincare::{exactness_oracle, integrate, integrate_rational, OracleConfig};
use pforms_core::random::{
    random_closed_form, random_closed_rational_form, random_exact_form, random_form,
    random_nonzero_poly, random_poly, random_pth_power, random_rational_form, Shape,
};
use pforms_core::ratfun::clear_denominators;
use pforms_core::{MultiIndex, MultiPoly, PolyForm, Prime, RatFun, Ring};

const PRIMES: [u64; 3] = [2, 3, 5];

fn setup(seed: u64, pi: usize, n: usize) -> (ChaCha8Rng, Ring) {
    let ring = Ring::new(Prime::new(PRIMES[pi]).unwrap(), n);
    (ChaCha8Rng::seed_from_u64(seed), ring)
}

fn small() -> Shape {
    Shape {
        max_deg: 3,
        max_terms: 3,
        max_indices: 2,
    }
}

fn random_index(rng: &mut ChaCha8Rng, n: usize) -> MultiIndex {
    use rand::Rng;
    let r = rng.gen_range(0..=n);
    let all = MultiIndex::all(n, r);
    all[rng.gen_range(0..all.len())].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_and_commuting_partials(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let f = random_poly(&mut rng, ring, Shape::default());
        let g = random_poly(&mut rng, ring, Shape::default());
        for i in 0..n {
            let lhs = (&f * &g).partial(i).unwrap();
            let rhs = &(&f.partial(i).unwrap() * &g) + &(&f * &g.partial(i).unwrap());
            prop_assert_eq!(lhs, rhs);
            for j in 0..n {
                prop_assert_eq!(
                    f.partial(i).unwrap().partial(j).unwrap(),
                    f.partial(j).unwrap().partial(i).unwrap()
                );
            }
            prop_assert!(f.partial_pow(i, ring.p()).unwrap().is_zero());
            prop_assert_eq!(
                f.partial_pow(i, ring.p() - 1).unwrap(),
                f.partial_pow_falling(i, ring.p() - 1).unwrap()
            );
        }
    }

    #[test]
    fn antiderivative_round_trip(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let f = random_poly(&mut rng, ring, Shape::default());
        let p = ring.p();
        for i in 0..n {
            let obstructed = f.filter_terms(|e| e[i] % p == p - 1);
            match f.antiderivative(i) {
                Ok(g) => {
                    prop_assert_eq!(g.partial(i).unwrap(), f.clone());
                    prop_assert!(obstructed.partial_multi(&[i]).unwrap().is_zero());
                }
                Err(_) => prop_assert!(!obstructed.partial_multi(&[i]).unwrap().is_zero()),
            }
        }
    }

    #[test]
    fn frobenius_and_substitution(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let f = random_poly(&mut rng, ring, Shape::default());
        let mut total = MultiPoly::zero(ring);
        for (e, g) in f.frobenius_decompose() {
            prop_assert!(g.is_differential_constant());
            total = &total + &g.shift(&e);
        }
        prop_assert_eq!(total, f.clone());
        prop_assert_eq!(f.substitute_pth().unwrap().unsubstitute_pth().unwrap(), f);
    }

    #[test]
    fn rational_calculus(seed in any::<u64>(), pi in 0..3usize, n in 1..=2usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let f = random_poly(&mut rng, ring, small());
        let g = random_nonzero_poly(&mut rng, ring, Shape { max_deg: 2, ..small() });
        let q = RatFun::new(f.clone(), g.clone()).unwrap();
        for i in 0..n {
            let num = &(&f.partial(i).unwrap() * &g) - &(&f * &g.partial(i).unwrap());
            let expected = RatFun::new(num, &g * &g).unwrap();
            prop_assert_eq!(q.partial(i).unwrap(), expected);
        }

        let w = random_rational_form(&mut rng, ring, rng_degree(seed, n), small());
        let (lambda, cleared) = clear_denominators(&w);
        prop_assert!(lambda.is_differential_constant());
        let back = cleared
            .to_rational()
            .try_map_coefficients(|_, c| c.div_constant(&lambda))
            .unwrap();
        prop_assert_eq!(back, w.clone());

        let lam = random_pth_power(&mut rng, ring);
        let scaled = w.try_map_coefficients(|_, c| Ok(c.mul_poly(&lam))).unwrap();
        let d_scaled = w.exterior_derivative().try_map_coefficients(|_, c| Ok(c.mul_poly(&lam))).unwrap();
        prop_assert_eq!(scaled.exterior_derivative(), d_scaled);
    }

    #[test]
    fn exterior_algebra(seed in any::<u64>(), pi in 0..3usize, n in 1..=4usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let shape = small();
        for r in 0..=n {
            let w = random_form(&mut rng, ring, r, shape);
            prop_assert!(w.exterior_derivative().exterior_derivative().is_zero());
        }
        let r = rng_degree(seed, n);
        let s = rng_degree(seed >> 8, n);
        let t = rng_degree(seed >> 16, n);
        let a = random_form(&mut rng, ring, r, shape);
        let b = random_form(&mut rng, ring, s, shape);
        let c = random_form(&mut rng, ring, t, shape);
        let sign = ring.prime().sign(r);
        let lhs = a.wedge(&b).unwrap().exterior_derivative();
        let rhs = a.exterior_derivative().wedge(&b).unwrap()
            + a.wedge(&b.exterior_derivative()).unwrap().scale(sign);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(
            a.wedge(&b).unwrap().wedge(&c).unwrap(),
            a.wedge(&b.wedge(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.wedge(&b).unwrap(),
            b.wedge(&a).unwrap().scale(ring.prime().sign(r * s))
        );
    }

    #[test]
    fn operator_identities(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let shape = Shape::default();
        let f = random_poly(&mut rng, ring, shape);
        let j = random_index(&mut rng, n);
        let pj = p_operator(&f, &j).unwrap();
        prop_assert_eq!(p_operator(&pj, &j).unwrap(), pj.scale(ring.prime().sign(j.len())));
        let oj = o_operator(&f, &j).unwrap();
        prop_assert_eq!(oj.clone(), o_operator_expanded(&f, &j).unwrap());
        prop_assert_eq!(o_operator(&oj, &j).unwrap(), -oj);

        let r = 1 + rng_degree(seed, n - 1);
        let w = random_form(&mut rng, ring, r, shape);
        let q = irrational_part(&w).unwrap();
        prop_assert_eq!(irrational_part(&q).unwrap(), q.clone());
        prop_assert!(irrational_part(&(w.clone() - q)).unwrap().is_zero());

        let o = o_r(&w).unwrap();
        prop_assert_eq!(o_r(&o).unwrap(), o);
        let split = split_complete_restricted(&w).unwrap();
        prop_assert_eq!(split.complete.clone() + split.restricted.clone(), w);
        prop_assert!(o_r(&split.complete).unwrap().is_zero());
        prop_assert_eq!(o_r(&split.restricted).unwrap(), split.restricted);
    }

    #[test]
    fn closed_form_structure(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let r = 1 + rng_degree(seed, n - 1);
        let w = random_closed_form(&mut rng, ring, r, Shape::default());
        let ph = phi(&w);
        prop_assert!(ph.terms().all(|(_, c)| c.is_differential_constant()));
        prop_assert!(is_p_closed(&ph));

        let split = split_rational_irrational(&w).unwrap();
        prop_assert!(is_p_closed(&split.rational));
        prop_assert!(split.irrational.is_closed());
        prop_assert_eq!(split.irrational.is_zero(), is_p_closed(&w));

        let exact = random_exact_form(&mut rng, ring, r, Shape::default());
        let lam = random_pth_power(&mut rng, ring);
        prop_assert!(is_p_closed(&exact.mul_poly(&lam)));
        for var in 0..n {
            let step = p_decompose_step(&exact, var).unwrap();
            prop_assert_eq!(step.recompose(var), exact.clone());
            prop_assert!(is_p_closed(&step.omega) || step.omega.degree() == 0);
        }
    }

    #[test]
    fn integration(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let r = 1 + rng_degree(seed, n - 1);
        let exact = random_exact_form(&mut rng, ring, r, Shape::default());
        let eta = integrate(&exact).unwrap();
        prop_assert_eq!(eta.exterior_derivative(), exact.clone());
        prop_assert!(eta.max_var_degree() <= exact.max_var_degree() + 1);

        let w = random_closed_form(&mut rng, ring, r, Shape::default());
        prop_assert_eq!(integrate(&w).is_ok(), is_p_closed(&w));

        let rw = random_closed_rational_form(&mut rng, ring, r, small());
        if is_p_closed(&rw) {
            let eta = integrate_rational(&rw).unwrap();
            prop_assert_eq!(eta.exterior_derivative(), rw);
        } else {
            prop_assert!(integrate_rational(&rw).is_err());
        }
    }

    #[test]
    fn cartier_round_trips(seed in any::<u64>(), pi in 0..3usize, n in 1..=3usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let r = 1 + rng_degree(seed, n - 1);
        let alpha = random_form(&mut rng, ring, r, small());
        prop_assert_eq!(cartier(&gamma0(&alpha).unwrap()).unwrap(), alpha);

        let w = random_closed_form(&mut rng, ring, r, Shape::default());
        let c = cartier(&w).unwrap();
        prop_assert!(same_class(&gamma0(&c).unwrap(), &w).unwrap());

        let eta = random_form(&mut rng, ring, r - 1, Shape::default());
        prop_assert!(cartier(&eta.exterior_derivative()).unwrap().is_zero());

        let k = random_poly(&mut rng, ring, Shape { max_deg: 1, ..small() });
        let twisted = w.mul_poly(&k.substitute_pth().unwrap());
        prop_assert_eq!(cartier(&twisted).unwrap(), c.mul_poly(&k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corollary_chain(seed in any::<u64>(), pi in 0..3usize, n in 1..=2usize) {
        let (mut rng, ring) = setup(seed, pi, n);
        let r = 1 + rng_degree(seed, n - 1);
        let shape = Shape { max_deg: 2, max_terms: 2, max_indices: 2 };
        let w = random_closed_form(&mut rng, ring, r, shape);
        if corollary_condition(&w) {
            prop_assert!(is_p_closed(&w));
        }
        let found = exactness_oracle(&w, &OracleConfig::default()).unwrap();
        prop_assert_eq!(found.is_some(), is_p_closed(&w));
        if let Some(eta) = found {
            prop_assert_eq!(eta.exterior_derivative(), w);
        }
    }
}

fn rng_degree(seed: u64, n: usize) -> usize {
    (seed % (n as u64 + 1)) as usize
}

#[test]
fn corollary_converse_fails_on_the_remark_form() {
    let ring = Ring::new(Prime::new(3).unwrap(), 2);
    let (x, y) = (MultiPoly::var(ring, 0), MultiPoly::var(ring, 1));
    let w = PolyForm::monomial(ring, x.pow(2) + y.pow(2), &[0, 1]).unwrap();
    assert!(is_p_closed(&w));
    assert!(!corollary_condition(&w));
}
